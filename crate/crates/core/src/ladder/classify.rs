//! Spike decompositions and element classification.

use std::collections::HashMap;

use crate::group::{Ball, GroupElement, GroupError};

use super::{LadderError, Scale};

/// One factorization `g = prefix · spike · postfix` at the given height.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpikeDecomposition {
    pub prefix: GroupElement,
    pub spike: GroupElement,
    pub postfix: GroupElement,
    pub height: u32,
}

/// Classification of one element against a scale. `Ambiguous` can only occur
/// for scales that are not ladders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    Unspiked,
    Spiked(SpikeDecomposition),
    Ambiguous(Vec<SpikeDecomposition>),
}

impl Classification {
    pub fn from_decompositions(mut decs: Vec<SpikeDecomposition>) -> Self {
        match decs.len() {
            0 => Classification::Unspiked,
            1 => Classification::Spiked(decs.pop().expect("len checked")),
            _ => Classification::Ambiguous(decs),
        }
    }

    /// Height of the element: 0 for unspiked, the decomposition height for
    /// spiked; ambiguous elements have no single height.
    pub fn height(&self) -> Option<u32> {
        match self {
            Classification::Unspiked => Some(0),
            Classification::Spiked(d) => Some(d.height),
            Classification::Ambiguous(_) => None,
        }
    }

    /// Prefix-map value for spiked elements.
    pub fn prefix(&self) -> Option<&GroupElement> {
        match self {
            Classification::Spiked(d) => Some(&d.prefix),
            _ => None,
        }
    }
}

/// Classifies elements against one scale, materializing each level's prefix
/// ball (and the `(prefix · σ)⁻¹` join table) once.
pub struct Classifier<'a> {
    scale: &'a Scale,
    budget: usize,
    /// Per level `n` (index `n-1`): the ball `ball(Δ_n, λ(n))` and the list
    /// of `(prefix index, σ index, (prefix·σ)⁻¹)` used to solve for
    /// postfixes by a single multiplication.
    levels: Vec<Option<LevelTables>>,
}

struct LevelTables {
    prefix_ball: Ball,
    /// `(prefix, σ, (prefix·σ)⁻¹)` for every pair, so each postfix candidate
    /// costs one multiplication and one membership lookup.
    join: Vec<(GroupElement, GroupElement, GroupElement)>,
}

impl<'a> Classifier<'a> {
    pub fn new(scale: &'a Scale, budget: usize) -> Self {
        let levels = (0..scale.horizon()).map(|_| None).collect();
        Classifier {
            scale,
            budget,
            levels,
        }
    }

    pub fn scale(&self) -> &'a Scale {
        self.scale
    }

    fn level_tables(&mut self, n: u32) -> Result<&LevelTables, LadderError> {
        let idx = (n - 1) as usize;
        if self.levels[idx].is_none() {
            let lambda = self.scale.gauge_at(n);
            let prefix_ball = self
                .scale
                .delta_ball(n, lambda, self.budget)
                .map_err(|e| match e {
                    GroupError::BallCapacity { budget, radius } => LadderError::Horizon {
                        level: n,
                        reason: format!(
                            "prefix ball of radius {radius} exceeds budget {budget}; \
                             heights at this level cannot be enumerated"
                        ),
                    },
                    other => LadderError::Group(other),
                })?;
            let model = self.scale.model();
            let mut join = Vec::new();
            for prefix in prefix_ball.elements() {
                for sigma in self.scale.spiking_set(n) {
                    let left = model.multiply(prefix, sigma)?;
                    join.push((prefix.clone(), sigma.clone(), model.inverse(&left)?));
                }
            }
            self.levels[idx] = Some(LevelTables { prefix_ball, join });
        }
        Ok(self.levels[idx].as_ref().expect("just filled"))
    }

    /// All spike decompositions of `g`, enumerated level by level.
    ///
    /// Per level, the postfix candidate `(prefix·σ)⁻¹·g` is accepted exactly
    /// when it lies in the level's prefix ball (membership in the ball is
    /// the truncated-length condition). When the scale's certificate grants
    /// the escape property, levels with `|g|_n ≤ λ(n)` are skipped: a spike
    /// there would put `σ` inside `Δ_n^{3λ(n)}`.
    pub fn decompositions(
        &mut self,
        g: &GroupElement,
    ) -> Result<Vec<SpikeDecomposition>, LadderError> {
        self.decompositions_inner(g, true)
    }

    /// The same enumeration with the escape shortcut disabled; used as the
    /// blind oracle in tests.
    pub fn decompositions_blind(
        &mut self,
        g: &GroupElement,
    ) -> Result<Vec<SpikeDecomposition>, LadderError> {
        self.decompositions_inner(g, false)
    }

    fn decompositions_inner(
        &mut self,
        g: &GroupElement,
        use_escape_shortcut: bool,
    ) -> Result<Vec<SpikeDecomposition>, LadderError> {
        let model = self.scale.model().clone();
        let escape_known = self.scale.certificate().is_ladder();
        let mut out = Vec::new();
        for n in 1..=self.scale.horizon() as u32 {
            let tables = self.level_tables(n)?;
            if use_escape_shortcut && escape_known && tables.prefix_ball.contains(g) {
                // |g|_n ≤ λ(n): any decomposition at this height would put
                // its spike within Δ_n^{3λ(n)}, which the certificate rules
                // out.
                continue;
            }
            for (prefix, sigma, left_inv) in &tables.join {
                let postfix = model.multiply(left_inv, g)?;
                if tables.prefix_ball.contains(&postfix) {
                    out.push(SpikeDecomposition {
                        prefix: prefix.clone(),
                        spike: sigma.clone(),
                        postfix,
                        height: n,
                    });
                }
            }
        }
        Ok(out)
    }

    pub fn classify(&mut self, g: &GroupElement) -> Result<Classification, LadderError> {
        Ok(Classification::from_decompositions(self.decompositions(g)?))
    }
}

/// A decomposition candidate carried by a caller who can bound the outer
/// lengths without enumerating balls (for instance by counting non-identity
/// low-level factors in a product).
#[derive(Debug, Clone)]
pub struct SpikeWitness {
    pub prefix: GroupElement,
    pub spike: GroupElement,
    pub postfix: GroupElement,
    pub height: u32,
    /// Certified upper bound on the `Δ_height`-length of the prefix.
    pub prefix_len_bound: u64,
    /// Certified upper bound on the `Δ_height`-length of the postfix.
    pub postfix_len_bound: u64,
}

/// Classifies `g` from a witness decomposition: validates the witness
/// (product identity, spike membership, length bounds within the gauge) and
/// concludes `Spiked` by the uniqueness granted by the scale's ladder
/// certificate. Enumerates nothing, so it works at heights whose prefix
/// balls are far beyond any materialization budget.
pub fn classify_with_witness(
    scale: &Scale,
    g: &GroupElement,
    witness: &SpikeWitness,
) -> Result<Classification, LadderError> {
    if !scale.certificate().is_ladder() {
        return Err(LadderError::NotCertified);
    }
    let n = witness.height;
    if n == 0 || n as usize > scale.horizon() {
        return Err(LadderError::Horizon {
            level: n,
            reason: "witness height outside the scale".into(),
        });
    }
    let lambda = scale.gauge_at(n);
    if witness.prefix_len_bound > lambda || witness.postfix_len_bound > lambda {
        return Err(LadderError::Validation(format!(
            "witness length bounds ({}, {}) exceed the gauge {} at height {}",
            witness.prefix_len_bound, witness.postfix_len_bound, lambda, n
        )));
    }
    if !scale.spiking_set(n).contains(&witness.spike) {
        return Err(LadderError::Validation(format!(
            "witness spike is not a member of Sigma_{n}"
        )));
    }
    let model = scale.model();
    let product = model.multiply(
        &model.multiply(&witness.prefix, &witness.spike)?,
        &witness.postfix,
    )?;
    if product != *g {
        return Err(LadderError::Validation(
            "witness factors do not multiply to the element".into(),
        ));
    }
    Ok(Classification::Spiked(SpikeDecomposition {
        prefix: witness.prefix.clone(),
        spike: witness.spike.clone(),
        postfix: witness.postfix.clone(),
        height: n,
    }))
}

/// Convenience: uniqueness-checked prefix map over a hash map cache.
pub struct PrefixMap {
    cache: HashMap<GroupElement, Option<GroupElement>>,
}

impl PrefixMap {
    pub fn new() -> Self {
        PrefixMap {
            cache: HashMap::new(),
        }
    }

    /// `π(g)` for spiked `g`, `None` for unspiked; errors propagate.
    pub fn get(
        &mut self,
        classifier: &mut Classifier<'_>,
        g: &GroupElement,
    ) -> Result<Option<GroupElement>, LadderError> {
        if let Some(hit) = self.cache.get(g) {
            return Ok(hit.clone());
        }
        let value = match classifier.classify(g)? {
            Classification::Spiked(d) => Some(d.prefix),
            Classification::Unspiked => None,
            Classification::Ambiguous(ds) => {
                return Err(LadderError::Validation(format!(
                    "prefix map undefined: {g} has {} decompositions",
                    ds.len()
                )))
            }
        };
        self.cache.insert(g.clone(), value.clone());
        Ok(value)
    }
}

impl Default for PrefixMap {
    fn default() -> Self {
        Self::new()
    }
}
