//! Word metrics: ball enumeration and truncated length computation with
//! respect to arbitrary finite generating sets.

use std::collections::{HashMap, HashSet, VecDeque};

use super::{GroupElement, GroupError, GroupModel};

/// Default cap on the number of elements a single ball may materialize.
pub const DEFAULT_BALL_BUDGET: usize = 1_000_000;

/// A finite set of generators. `symmetric` records whether the set is closed
/// under inverses; [`GeneratingSet::symmetric`] closes it on construction.
#[derive(Debug, Clone)]
pub struct GeneratingSet {
    pub elements: Vec<GroupElement>,
    pub symmetric: bool,
}

impl GeneratingSet {
    /// Uses the elements as given, checking the symmetry flag element-wise.
    pub fn new(
        model: &GroupModel,
        elements: Vec<GroupElement>,
        symmetric: bool,
    ) -> Result<Self, GroupError> {
        let dedup: Vec<GroupElement> = {
            let mut seen = HashSet::new();
            elements.into_iter().filter(|g| seen.insert(g.clone())).collect()
        };
        if symmetric {
            let set: HashSet<&GroupElement> = dedup.iter().collect();
            for g in &dedup {
                let inv = model.inverse(g)?;
                if !set.contains(&inv) {
                    return Err(GroupError::InvalidModel(format!(
                        "generating set flagged symmetric but misses the inverse of {g}"
                    )));
                }
            }
        }
        Ok(GeneratingSet {
            elements: dedup,
            symmetric,
        })
    }

    /// Closes the elements under inverse and returns a symmetric set.
    pub fn symmetric(model: &GroupModel, elements: Vec<GroupElement>) -> Result<Self, GroupError> {
        let mut closed = Vec::new();
        let mut seen = HashSet::new();
        for g in elements {
            let inv = model.inverse(&g)?;
            if seen.insert(g.clone()) {
                closed.push(g);
            }
            if seen.insert(inv.clone()) {
                closed.push(inv);
            }
        }
        Ok(GeneratingSet {
            elements: closed,
            symmetric: true,
        })
    }

    pub fn standard(model: &GroupModel) -> Self {
        GeneratingSet {
            elements: model.standard_generators(),
            symmetric: true,
        }
    }
}

/// A materialized ball: all products of at most `radius` generators,
/// in deterministic BFS discovery order, with a membership index.
#[derive(Debug, Clone)]
pub struct Ball {
    pub radius: u64,
    elements: Vec<GroupElement>,
    index: HashMap<GroupElement, usize>,
    /// distance[i] = BFS distance of elements[i] from the identity.
    distance: Vec<u64>,
}

impl Ball {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.index.contains_key(g)
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn distance(&self, g: &GroupElement) -> Option<u64> {
        self.index.get(g).map(|&i| self.distance[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = &GroupElement> {
        self.elements.iter()
    }
}

/// Enumerates the ball of the given radius: exactly the products of at most
/// `radius` elements of `gens ∪ {e}`. Fails loudly when the ball would
/// exceed `budget` elements.
pub fn ball(
    model: &GroupModel,
    gens: &GeneratingSet,
    radius: u64,
    budget: usize,
) -> Result<Ball, GroupError> {
    let identity = model.identity();
    let mut elements = vec![identity.clone()];
    let mut distance = vec![0u64];
    let mut index = HashMap::new();
    index.insert(identity, 0usize);

    let mut frontier_start = 0usize;
    for level in 1..=radius {
        let frontier_end = elements.len();
        if frontier_start == frontier_end {
            break; // ball saturated early
        }
        for i in frontier_start..frontier_end {
            let base = elements[i].clone();
            for g in &gens.elements {
                let next = model.multiply(&base, g)?;
                if !index.contains_key(&next) {
                    if elements.len() >= budget {
                        return Err(GroupError::BallCapacity { budget, radius });
                    }
                    index.insert(next.clone(), elements.len());
                    elements.push(next);
                    distance.push(level);
                }
            }
        }
        frontier_start = frontier_end;
    }

    Ok(Ball {
        radius,
        elements,
        index,
        distance,
    })
}

/// Truncated word length. `Over` means the element is not a product of at
/// most `cutoff` generators; generating sets need not generate the whole
/// group, so `Over` is a first-class outcome rather than an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Length {
    Finite(u64),
    Over,
}

impl Length {
    pub fn finite(self) -> Option<u64> {
        match self {
            Length::Finite(n) => Some(n),
            Length::Over => None,
        }
    }

    pub fn at_most(self, bound: u64) -> bool {
        matches!(self, Length::Finite(n) if n <= bound)
    }
}

/// BFS distance from the identity to `g` in the Cayley graph of `gens`,
/// truncated at `cutoff`. Runs bidirectionally: one frontier grows from the
/// identity by right multiplication, the other from `g` by cancelling a
/// final generator, and the smaller frontier is expanded first.
pub fn bounded_length(
    model: &GroupModel,
    g: &GroupElement,
    gens: &GeneratingSet,
    cutoff: u64,
) -> Result<Length, GroupError> {
    let identity = model.identity();
    if *g == identity {
        return Ok(Length::Finite(0));
    }
    if cutoff == 0 {
        return Ok(Length::Over);
    }

    let inverses: Vec<GroupElement> = gens
        .elements
        .iter()
        .map(|s| model.inverse(s))
        .collect::<Result<_, _>>()?;

    let mut fwd: HashMap<GroupElement, u64> = HashMap::from([(identity.clone(), 0)]);
    let mut bwd: HashMap<GroupElement, u64> = HashMap::from([(g.clone(), 0)]);
    let mut fwd_frontier = VecDeque::from([identity]);
    let mut bwd_frontier = VecDeque::from([g.clone()]);
    let (mut fwd_depth, mut bwd_depth) = (0u64, 0u64);
    let mut best: Option<u64> = check_meet(&fwd, &bwd, cutoff);

    while fwd_depth + bwd_depth < cutoff && best.is_none() {
        // Expand the smaller side; ties go forward.
        let expand_forward = fwd_frontier.len() <= bwd_frontier.len();
        let (frontier, visited, steps, depth) = if expand_forward {
            (&mut fwd_frontier, &mut fwd, &gens.elements, &mut fwd_depth)
        } else {
            (&mut bwd_frontier, &mut bwd, &inverses, &mut bwd_depth)
        };
        if frontier.is_empty() {
            break; // this side's component is exhausted
        }
        *depth += 1;
        let level = *depth;
        let mut next_frontier = VecDeque::new();
        while let Some(base) = frontier.pop_front() {
            for s in steps {
                let next = model.multiply(&base, s)?;
                if !visited.contains_key(&next) {
                    visited.insert(next.clone(), level);
                    next_frontier.push_back(next);
                }
            }
        }
        *frontier = next_frontier;
        best = check_meet(&fwd, &bwd, cutoff);
    }

    Ok(match best {
        Some(d) if d <= cutoff => Length::Finite(d),
        _ => Length::Over,
    })
}

fn check_meet(
    fwd: &HashMap<GroupElement, u64>,
    bwd: &HashMap<GroupElement, u64>,
    cutoff: u64,
) -> Option<u64> {
    let (small, large) = if fwd.len() <= bwd.len() {
        (fwd, bwd)
    } else {
        (bwd, fwd)
    };
    let mut best: Option<u64> = None;
    for (elem, &da) in small {
        if let Some(&db) = large.get(elem) {
            let total = da + db;
            if total <= cutoff && best.map_or(true, |b| total < b) {
                best = Some(total);
            }
        }
    }
    best
}

