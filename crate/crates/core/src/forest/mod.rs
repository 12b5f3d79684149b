//! Despiking forests on finite balls.
//!
//! Classifying every element of a ball against a ladder yields a parent map
//! (each spiked element points to its prefix) whose edges form a forest:
//! heights strictly decrease towards the roots, which are exactly the
//! unspiked elements. Balls truncate the picture, so edges whose parent
//! falls outside the ball are flagged rather than dropped, and root counting
//! distinguishes parent-closed components from truncated ones.

mod export;
mod rays;

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

pub use export::{export_dot, forest_to_json, WalkOverlay};
pub use rays::{
    forest_ray_prefixes, generate_rays, is_admissible_ray, root_is_extendable,
    sharp_boundary_margin, Ray,
};

use crate::group::{GroupElement, GroupError};
use crate::ladder::{Classification, Classifier, LadderError, Scale};

#[derive(Debug, Error)]
pub enum ForestError {
    #[error("element {0} has more than one spike decomposition; the scale is not a ladder")]
    Ambiguous(String),
    #[error("gauge is not fast-growth; ray generation by local rules needs it")]
    NotFastGrowth,
    #[error("ray is not admissible: {0}")]
    BadRay(String),
    #[error(transparent)]
    Ladder(#[from] LadderError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Where a vertex's parent edge leads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParentLink {
    /// Unspiked: a root.
    Root,
    /// Spiked with the prefix inside the ball (index of the parent vertex).
    Edge(usize),
    /// Spiked, but the prefix lies outside the ball; the edge exists in the
    /// full forest and is kept as an explicit marker so root counting stays
    /// honest about ball effects.
    Truncated(GroupElement),
}

#[derive(Debug, Clone)]
pub struct Forest {
    scale: Arc<Scale>,
    vertices: Vec<GroupElement>,
    index: HashMap<GroupElement, usize>,
    parent: Vec<ParentLink>,
    height: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ForestStats {
    pub vertices: usize,
    pub edges: usize,
    pub roots: usize,
    pub truncated: usize,
    pub components: usize,
    pub parent_closed_components: usize,
    /// Components (parent-closed) whose root count differs from one, and
    /// components of any kind with more than one root. Empty for ladders.
    pub root_violations: usize,
    pub acyclic: bool,
    pub max_height: u32,
}

impl Forest {
    pub fn scale(&self) -> &Scale {
        &self.scale
    }

    pub fn vertices(&self) -> &[GroupElement] {
        &self.vertices
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.index.contains_key(g)
    }

    pub fn vertex_index(&self, g: &GroupElement) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn parent_link(&self, i: usize) -> &ParentLink {
        &self.parent[i]
    }

    pub fn height_of(&self, i: usize) -> u32 {
        self.height[i]
    }

    pub fn roots(&self) -> impl Iterator<Item = usize> + '_ {
        self.parent
            .iter()
            .enumerate()
            .filter(|(_, l)| matches!(l, ParentLink::Root))
            .map(|(i, _)| i)
    }

    /// Children of vertex `i` through in-ball edges, in vertex order.
    pub fn children(&self, i: usize) -> Vec<usize> {
        self.parent
            .iter()
            .enumerate()
            .filter(|(_, l)| matches!(l, ParentLink::Edge(p) if *p == i))
            .map(|(c, _)| c)
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.parent
            .iter()
            .filter(|l| matches!(l, ParentLink::Edge(_)))
            .count()
    }

    /// Independent acyclicity check by explicit traversal of parent chains
    /// (does not rely on heights).
    pub fn verify_acyclic(&self) -> bool {
        for start in 0..self.vertices.len() {
            let mut seen = vec![start];
            let mut current = start;
            while let ParentLink::Edge(p) = self.parent[current] {
                if seen.contains(&p) {
                    return false;
                }
                seen.push(p);
                current = p;
            }
        }
        true
    }

    /// Heights strictly decrease along every in-ball parent edge.
    pub fn heights_strictly_decrease(&self) -> bool {
        self.parent.iter().enumerate().all(|(child, link)| match link {
            ParentLink::Edge(p) => self.height[*p] < self.height[child],
            _ => true,
        })
    }

    /// Connected components of the undirected edge graph, with root counts.
    fn component_analysis(&self) -> (usize, usize, usize) {
        let n = self.vertices.len();
        let mut dsu: Vec<usize> = (0..n).collect();
        fn find(dsu: &mut Vec<usize>, mut x: usize) -> usize {
            while dsu[x] != x {
                dsu[x] = dsu[dsu[x]];
                x = dsu[x];
            }
            x
        }
        for (child, link) in self.parent.iter().enumerate() {
            if let ParentLink::Edge(p) = link {
                let (a, b) = (find(&mut dsu, child), find(&mut dsu, *p));
                dsu[a] = b;
            }
        }
        let mut roots_per: HashMap<usize, usize> = HashMap::new();
        let mut truncated_in: HashMap<usize, bool> = HashMap::new();
        for i in 0..n {
            let rep = find(&mut dsu, i);
            let entry = roots_per.entry(rep).or_insert(0);
            if matches!(self.parent[i], ParentLink::Root) {
                *entry += 1;
            }
            let t = truncated_in.entry(rep).or_insert(false);
            if matches!(self.parent[i], ParentLink::Truncated(_)) {
                *t = true;
            }
        }
        let components = roots_per.len();
        let mut parent_closed = 0;
        let mut violations = 0;
        for (rep, roots) in &roots_per {
            let closed = !truncated_in.get(rep).copied().unwrap_or(false);
            if closed {
                parent_closed += 1;
                if *roots != 1 {
                    violations += 1;
                }
            } else if *roots > 1 {
                violations += 1;
            }
        }
        (components, parent_closed, violations)
    }

    pub fn stats(&self) -> ForestStats {
        let (components, parent_closed_components, root_violations) = self.component_analysis();
        ForestStats {
            vertices: self.vertices.len(),
            edges: self.edge_count(),
            roots: self.roots().count(),
            truncated: self
                .parent
                .iter()
                .filter(|l| matches!(l, ParentLink::Truncated(_)))
                .count(),
            components,
            parent_closed_components,
            root_violations,
            acyclic: self.verify_acyclic() && self.heights_strictly_decrease(),
            max_height: self.height.iter().copied().max().unwrap_or(0),
        }
    }
}

/// Classifies every element of `ball(Δ_{N+1}, ball_radius)` and assembles
/// the parent map. Any ambiguous classification aborts: the scale is not a
/// ladder and the parent map would be meaningless.
pub fn build_forest(
    scale: Arc<Scale>,
    ball_radius: u64,
    budget: usize,
) -> Result<Forest, ForestError> {
    let n_levels = scale.horizon() as u32;
    let ball = scale.delta_ball(n_levels + 1, ball_radius, budget)?;

    let mut classifier = Classifier::new(&scale, budget);
    let vertices: Vec<GroupElement> = ball.elements().to_vec();
    let mut index = HashMap::with_capacity(vertices.len());
    for (i, v) in vertices.iter().enumerate() {
        index.insert(v.clone(), i);
    }

    let mut parent = Vec::with_capacity(vertices.len());
    let mut height = Vec::with_capacity(vertices.len());
    for v in &vertices {
        match classifier.classify(v)? {
            Classification::Unspiked => {
                parent.push(ParentLink::Root);
                height.push(0);
            }
            Classification::Spiked(d) => {
                height.push(d.height);
                match index.get(&d.prefix) {
                    Some(&p) => parent.push(ParentLink::Edge(p)),
                    None => parent.push(ParentLink::Truncated(d.prefix)),
                }
            }
            Classification::Ambiguous(_) => {
                return Err(ForestError::Ambiguous(v.to_string()));
            }
        }
    }

    Ok(Forest {
        scale,
        vertices,
        index,
        parent,
        height,
    })
}

/// The constrained subforest: keeps an edge `(g, π(g))` exactly when
/// `height(g) ≤ κ(height(π(g)))`. Same predicate as [`edge_survives`].
pub fn constrained_forest(forest: &Forest, kappa: &dyn Fn(u32) -> u64) -> Forest {
    let mut out = forest.clone();
    for (child, link) in forest.parent.iter().enumerate() {
        if let ParentLink::Edge(p) = link {
            if !edge_survives(forest.height[child], forest.height[*p], kappa) {
                // the vertex stays, the edge goes: it becomes its own root
                // in the constrained picture only if genuinely unspiked,
                // which it is not; mark as truncated-by-constraint instead.
                out.parent[child] = ParentLink::Truncated(forest.vertices[*p].clone());
            }
        }
    }
    out
}

/// The edge-retention predicate of constrained forests, shared with the walk
/// verifier so both sides decide survival identically.
pub fn edge_survives(child_height: u32, parent_height: u32, kappa: &dyn Fn(u32) -> u64) -> bool {
    (child_height as u64) <= kappa(parent_height)
}

/// Upper bound on the out-degree of a vertex of height `h` in the
/// κ-constrained forest: children arrive only at heights in
/// `(h, κ(h)]`, each contributing at most `|Σ_n| · |ball(Δ_n, λ(n))|`.
pub fn constrained_child_bound(
    scale: &Scale,
    height: u32,
    kappa: &dyn Fn(u32) -> u64,
    budget: usize,
) -> Result<u64, ForestError> {
    let mut bound = 0u64;
    let top = kappa(height).min(scale.horizon() as u64) as u32;
    for n in (height + 1)..=top {
        let ball = scale.delta_ball(n, scale.gauge_at(n), budget)?;
        bound += scale.spiking_set(n).len() as u64 * ball.len() as u64;
    }
    Ok(bound)
}
