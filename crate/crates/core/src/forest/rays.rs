//! Geodesic rays by local transition rules.
//!
//! For fast-growth gauges the admissible extensions of a ray depend only on
//! its last vertex: append `σ h` with the spike height above the current
//! height and `|h|` within the gauge at the new height. Initial vertices are
//! unspiked elements short enough for the first spike height. Generated
//! rays coincide with the geodesic ray prefixes of the built forest; the
//! test suite checks the two enumerations against each other.

use std::collections::BTreeSet;

use crate::group::{bounded_length, GroupElement, Length};
use crate::ladder::{fast_growth_check, Classification, Classifier, Scale};

use super::{Forest, ForestError};

/// A ray prefix: `vertices[0]` is a root; `vertices[k] = vertices[k-1] ·
/// spikes[k-1] · posts[k-1]`, with strictly increasing heights.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Ray {
    pub vertices: Vec<GroupElement>,
    pub spikes: Vec<GroupElement>,
    pub posts: Vec<GroupElement>,
    pub heights: Vec<u32>,
}

impl Ray {
    pub fn depth(&self) -> usize {
        self.spikes.len()
    }
}

/// Enumerates every ray of depth at most `depth` by the local rules.
/// Requires a fast-growth gauge; tractable only for tiny scales.
pub fn generate_rays(
    scale: &Scale,
    depth: usize,
    budget: usize,
) -> Result<Vec<Ray>, ForestError> {
    if !fast_growth_check(scale.gauge()) {
        return Err(ForestError::NotFastGrowth);
    }
    let model = scale.model().clone();
    let mut classifier = Classifier::new(scale, budget);
    let n_levels = scale.horizon() as u32;

    // Base vertices per first-spike height n: unspiked elements of
    // ball(Δ_n, λ(n)). A vertex may qualify for several heights; rays are
    // deduplicated at the end.
    let mut rays: BTreeSet<Ray> = BTreeSet::new();
    let mut frontier: Vec<Ray> = Vec::new();
    let mut seen_starts: BTreeSet<GroupElement> = BTreeSet::new();
    for n in 1..=n_levels {
        let ball = scale.delta_ball(n, scale.gauge_at(n), budget)?;
        for g0 in ball.elements() {
            if !seen_starts.insert(g0.clone()) {
                continue;
            }
            if matches!(classifier.classify(g0)?, Classification::Unspiked) {
                let ray = Ray {
                    vertices: vec![g0.clone()],
                    spikes: Vec::new(),
                    posts: Vec::new(),
                    heights: Vec::new(),
                };
                rays.insert(ray.clone());
                frontier.push(ray);
            }
        }
    }

    for _ in 0..depth {
        let mut next = Vec::new();
        for ray in &frontier {
            let last = ray.vertices.last().expect("rays are non-empty");
            let current_height = ray.heights.last().copied().unwrap_or(0);
            for n in (current_height + 1)..=n_levels {
                // admissibility of the base vertex at this height
                let lambda = scale.gauge_at(n);
                let gens = scale.delta_gens(n);
                if !bounded_length(&model, last, &gens, lambda)?.at_most(lambda) {
                    continue;
                }
                let post_ball = scale.delta_ball(n, lambda, budget)?;
                for sigma in scale.spiking_set(n) {
                    let with_spike = model.multiply(last, sigma)?;
                    for h in post_ball.elements() {
                        let vertex = model.multiply(&with_spike, h)?;
                        let mut extended = ray.clone();
                        extended.vertices.push(vertex);
                        extended.spikes.push(sigma.clone());
                        extended.posts.push(h.clone());
                        extended.heights.push(n);
                        if rays.insert(extended.clone()) {
                            next.push(extended);
                        }
                    }
                }
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }

    Ok(rays.into_iter().collect())
}

/// All geodesic ray prefixes of depth at most `depth` read off a built
/// forest: downward paths from the roots, as vertex sequences. The oracle
/// side of the ray-enumeration equivalence.
pub fn forest_ray_prefixes(forest: &Forest, depth: usize) -> BTreeSet<Vec<GroupElement>> {
    let mut out = BTreeSet::new();
    let mut stack: Vec<Vec<usize>> = forest.roots().map(|r| vec![r]).collect();
    while let Some(path) = stack.pop() {
        out.insert(
            path.iter()
                .map(|&i| forest.vertices()[i].clone())
                .collect::<Vec<_>>(),
        );
        if path.len() <= depth {
            let last = *path.last().expect("non-empty path");
            for child in forest.children(last) {
                let mut next = path.clone();
                next.push(child);
                stack.push(next);
            }
        }
    }
    out
}

/// The boundary-sharpness margins `λ(height(γ_n)) − |γ_{n−1}|` along a ray,
/// with the length measured in `Δ_{height(γ_n)}`. Admissible rays have all
/// margins non-negative; divergence of the margins is the sharp-boundary
/// membership condition, testable here only over the observed window.
pub fn sharp_boundary_margin(scale: &Scale, ray: &Ray) -> Result<Vec<i64>, ForestError> {
    let model = scale.model();
    let mut margins = Vec::with_capacity(ray.depth());
    for k in 0..ray.depth() {
        let n = ray.heights[k];
        let lambda = scale.gauge_at(n);
        let gens = scale.delta_gens(n);
        match bounded_length(model, &ray.vertices[k], &gens, lambda)? {
            Length::Finite(len) => margins.push(lambda as i64 - len as i64),
            Length::Over => {
                return Err(ForestError::BadRay(format!(
                    "vertex {} exceeds the gauge at height {n}",
                    ray.vertices[k]
                )))
            }
        }
    }
    Ok(margins)
}

/// Can this root ever grow a ray? The initial condition requires the root to
/// fit the gauge at some level, which is also exactly what a depth-one
/// extension's prefix condition grants. Roots failing this are isolated at
/// the tested horizon, so ray enumerations quantify depth-0 over this set.
pub fn root_is_extendable(scale: &Scale, g: &GroupElement) -> Result<bool, ForestError> {
    let model = scale.model();
    for n in 1..=scale.horizon() as u32 {
        let lambda = scale.gauge_at(n);
        let gens = scale.delta_gens(n);
        if bounded_length(model, g, &gens, lambda)?.at_most(lambda) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Checks that a vertex sequence read from the forest matches the ray rules;
/// used to cross-validate the two enumerations beyond set equality.
pub fn is_admissible_ray(scale: &Scale, ray: &Ray) -> Result<bool, ForestError> {
    let model = scale.model();
    if ray.vertices.len() != ray.depth() + 1 {
        return Ok(false);
    }
    let mut previous_height = 0u32;
    for k in 0..ray.depth() {
        let n = ray.heights[k];
        if k > 0 && n <= previous_height {
            return Ok(false);
        }
        let lambda = scale.gauge_at(n);
        let gens = scale.delta_gens(n);
        if !bounded_length(model, &ray.vertices[k], &gens, lambda)?.at_most(lambda) {
            return Ok(false);
        }
        if !bounded_length(model, &ray.posts[k], &gens, lambda)?.at_most(lambda) {
            return Ok(false);
        }
        let rebuilt = model.multiply(
            &model.multiply(&ray.vertices[k], &ray.spikes[k])?,
            &ray.posts[k],
        )?;
        if rebuilt != ray.vertices[k + 1] {
            return Ok(false);
        }
        previous_height = n;
    }
    Ok(true)
}
