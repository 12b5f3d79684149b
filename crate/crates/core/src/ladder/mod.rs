//! Scales and ladders.
//!
//! A scale fixes a non-decreasing gauge `λ`, spiking sets `Σ_1…Σ_N` and
//! filling sets `A_0…A_N`. Writing `Δ_n` for the union of all spiking and
//! filling sets of index strictly below `n`, a spike decomposition of `g` at
//! height `n` is a factorization `g = prefix · σ · postfix` with `σ ∈ Σ_n`
//! and both outer factors of `Δ_n`-length at most `λ(n)`. A scale is a
//! ladder when every element has at most one spike decomposition and the
//! height strictly drops from any spiked element to its prefix; the prefix
//! map of a ladder orients the group into a forest.
//!
//! All sets here are required to be symmetric and *globally* disjoint
//! (across both families), which makes the level map `ζ` single-valued;
//! this is deliberately stronger than pairwise disjointness of the spiking
//! sets alone.

mod build;
mod check;
mod classify;
mod serial;
mod tower;

use std::collections::HashMap;

use num_bigint::BigUint;
use thiserror::Error;

pub use build::{build_ladder, BuildOptions};
pub use check::{check_ladder, LadderReport, SwitchingLevelOutcome};
pub use classify::{
    classify_with_witness, Classification, Classifier, PrefixMap, SpikeDecomposition,
    SpikeWitness,
};
pub use serial::{scale_from_text, scale_to_text};
pub use tower::{
    certified_free_ladder, certified_lamplighter_ladder, scale_levels,
    verify_family_certificate, TowerFilling, TowerParams,
};

use crate::group::{ball, Ball, GeneratingSet, GroupElement, GroupError, GroupModel};
use crate::switch::SwitchError;

#[derive(Debug, Error)]
pub enum LadderError {
    #[error("invalid scale: {0}")]
    Validation(String),
    #[error("element {element} appears in both {first} and {second}")]
    Overlap {
        element: String,
        first: String,
        second: String,
    },
    #[error("level {level}: cannot decide spike heights there ({reason})")]
    Horizon { level: u32, reason: String },
    #[error("scale carries no ladder certificate; witness classification needs one")]
    NotCertified,
    #[error("certificate invalid at level {level}: {reason}")]
    BadCertificate { level: u32, reason: String },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Switch(#[from] SwitchError),
}

/// Which family a level-assigned element belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetKind {
    Spiking,
    Filling,
}

/// How ladder-ness of a scale is known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LadderCertificate {
    /// Nothing verified yet.
    Unverified,
    /// Every `Σ_n` was checked switching for `ball(Δ_n, 5λ(n))` by
    /// enumeration (the sufficient condition), directly or by construction.
    SwitchingChecked,
    /// Structural family: `Σ_n` is switching for the whole standard-metric
    /// ball of radius `radii[n-1]`, which dominates `ball(Δ_n, 5λ(n))`.
    CertifiedFamily { radii: Vec<BigUint> },
}

impl LadderCertificate {
    pub fn is_ladder(&self) -> bool {
        !matches!(self, LadderCertificate::Unverified)
    }
}

/// A validated scale. Construction enforces the shape invariants; ladder-ness
/// is tracked separately in the certificate.
#[derive(Debug, Clone)]
pub struct Scale {
    model: GroupModel,
    gauge: Vec<u64>,
    spiking: Vec<Vec<GroupElement>>,
    filling: Vec<Vec<GroupElement>>,
    levels: HashMap<GroupElement, (u32, SetKind)>,
    certificate: LadderCertificate,
    /// Cached max standard length over `Δ_n`, index `n-1`, length `N+1`.
    delta_reach: Vec<BigUint>,
}

impl Scale {
    /// Validates and assembles a scale.
    pub fn new(
        model: GroupModel,
        gauge: Vec<u64>,
        spiking: Vec<Vec<GroupElement>>,
        filling: Vec<Vec<GroupElement>>,
    ) -> Result<Self, LadderError> {
        let n_levels = spiking.len();
        if gauge.len() != n_levels {
            return Err(LadderError::Validation(format!(
                "gauge table has {} entries for {} spiking levels",
                gauge.len(),
                n_levels
            )));
        }
        if filling.len() != n_levels + 1 {
            return Err(LadderError::Validation(format!(
                "{} filling sets for {} spiking levels; need one more filling set than levels",
                filling.len(),
                n_levels
            )));
        }
        if gauge.windows(2).any(|w| w[0] > w[1]) {
            return Err(LadderError::Validation(
                "gauge table must be non-decreasing".into(),
            ));
        }
        let e = model.identity();
        if !filling[0].contains(&e) {
            return Err(LadderError::Validation(
                "the zeroth filling set must contain the identity".into(),
            ));
        }

        let mut levels: HashMap<GroupElement, (u32, SetKind)> = HashMap::new();
        let name = |kind: SetKind, level: u32| match kind {
            SetKind::Spiking => format!("Sigma_{level}"),
            SetKind::Filling => format!("A_{level}"),
        };
        let mut assign = |set: &[GroupElement],
                          level: u32,
                          kind: SetKind|
         -> Result<(), LadderError> {
            for g in set {
                if let Some(&(other_level, other_kind)) =
                    levels.get(g)
                {
                    return Err(LadderError::Overlap {
                        element: g.to_string(),
                        first: name(other_kind, other_level),
                        second: name(kind, level),
                    });
                }
                levels.insert(g.clone(), (level, kind));
            }
            Ok(())
        };

        for (i, set) in filling.iter().enumerate() {
            assign(set, i as u32, SetKind::Filling)?;
        }
        for (i, set) in spiking.iter().enumerate() {
            let level = (i + 1) as u32;
            if set.is_empty() {
                return Err(LadderError::Validation(format!(
                    "spiking set Sigma_{level} is empty"
                )));
            }
            if set.contains(&e) {
                return Err(LadderError::Validation(format!(
                    "spiking set Sigma_{level} contains the identity"
                )));
            }
            assign(set, level, SetKind::Spiking)?;
        }

        // Element-wise symmetry of every set.
        for (label, set) in filling
            .iter()
            .enumerate()
            .map(|(i, s)| (format!("A_{i}"), s))
            .chain(
                spiking
                    .iter()
                    .enumerate()
                    .map(|(i, s)| (format!("Sigma_{}", i + 1), s)),
            )
        {
            for g in set.iter() {
                let inv = model.inverse(g)?;
                if !set.contains(&inv) {
                    return Err(LadderError::Validation(format!(
                        "set {label} is not symmetric: misses the inverse of {g}"
                    )));
                }
            }
        }

        let mut scale = Scale {
            model,
            gauge,
            spiking,
            filling,
            levels,
            certificate: LadderCertificate::Unverified,
            delta_reach: Vec::new(),
        };
        scale.delta_reach = scale.compute_delta_reach()?;
        Ok(scale)
    }

    fn compute_delta_reach(&self) -> Result<Vec<BigUint>, LadderError> {
        let mut reach = Vec::with_capacity(self.horizon() + 1);
        let mut current = BigUint::from(0u32);
        for n in 1..=self.horizon() + 1 {
            // Δ_n adds A_{n-1} and (for n ≥ 2) Σ_{n-1}.
            for g in &self.filling[n - 1] {
                current = current.max(self.model.standard_length(g)?);
            }
            if n >= 2 {
                for g in &self.spiking[n - 2] {
                    current = current.max(self.model.standard_length(g)?);
                }
            }
            reach.push(current.clone());
        }
        Ok(reach)
    }

    pub fn model(&self) -> &GroupModel {
        &self.model
    }

    /// Number of spiking levels `N`.
    pub fn horizon(&self) -> usize {
        self.spiking.len()
    }

    /// `λ(n)` for `n` in `1..=N`.
    pub fn gauge_at(&self, n: u32) -> u64 {
        self.gauge[(n - 1) as usize]
    }

    pub fn gauge(&self) -> &[u64] {
        &self.gauge
    }

    pub fn spiking_set(&self, n: u32) -> &[GroupElement] {
        &self.spiking[(n - 1) as usize]
    }

    pub fn filling_set(&self, i: u32) -> &[GroupElement] {
        &self.filling[i as usize]
    }

    pub fn certificate(&self) -> &LadderCertificate {
        &self.certificate
    }

    pub(crate) fn set_certificate(&mut self, certificate: LadderCertificate) {
        self.certificate = certificate;
    }

    /// Promotes the certificate after an enumerative switching check.
    pub fn mark_switching_checked(&mut self) {
        if self.certificate == LadderCertificate::Unverified {
            self.certificate = LadderCertificate::SwitchingChecked;
        }
    }

    /// The level map `ζ`: which set the element belongs to, if any.
    /// Single-valued thanks to global disjointness.
    pub fn level_of(&self, g: &GroupElement) -> Option<(u32, SetKind)> {
        self.levels.get(g).copied()
    }

    /// Elements of `Δ_n`: all spiking and filling sets of index `< n`.
    /// Valid for `n` in `1..=N+1`.
    pub fn delta_elements(&self, n: u32) -> Vec<GroupElement> {
        let n = n as usize;
        let mut out = Vec::new();
        for set in self.filling.iter().take(n) {
            out.extend(set.iter().cloned());
        }
        for set in self.spiking.iter().take(n.saturating_sub(1)) {
            out.extend(set.iter().cloned());
        }
        out
    }

    pub fn delta_gens(&self, n: u32) -> GeneratingSet {
        GeneratingSet {
            elements: self.delta_elements(n),
            symmetric: true,
        }
    }

    /// Max standard-metric length over `Δ_n`; zero when `Δ_n = {e}`.
    pub fn delta_reach(&self, n: u32) -> &BigUint {
        &self.delta_reach[(n - 1) as usize]
    }

    /// A ball `ball(Δ_n, radius)` of this scale.
    pub fn delta_ball(&self, n: u32, radius: u64, budget: usize) -> Result<Ball, GroupError> {
        ball(&self.model, &self.delta_gens(n), radius, budget)
    }
}

/// Fast-growth condition on a gauge table:
/// `λ(n+1) ≥ n + 2(λ(1) + … + λ(n))` for every tabulated `n`.
/// It makes the per-step conditions of ray generation Markov (no dependence
/// on how the current vertex was reached).
pub fn fast_growth_check(gauge: &[u64]) -> bool {
    if gauge.len() < 2 {
        return false;
    }
    let mut prefix_sum: u64 = 0;
    for (i, window) in gauge.windows(2).enumerate() {
        let n = (i + 1) as u64;
        prefix_sum += window[0];
        if window[1] < n + 2 * prefix_sum {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests;
