//! Step distributions adapted to a scale, and reproducible path simulation.
//!
//! The step law on the non-negative integers is realized on the group by
//! spreading each level's mass over that level's spiking and filling sets:
//! level `i` receives `p_i`, split `(1−α_i) : α_i` between `Σ_i` and
//! `A_i \ Σ_i` (level 0 entirely on `A_0`, which holds the identity). The
//! level of an increment is its height `ζ`, so the height sequence of a walk
//! is i.i.d. with the (truncated) law, and the record machinery applies
//! verbatim. The scale horizon truncates the law: the top level absorbs the
//! remaining tail mass, a desk-scale effect sized so that paths essentially
//! never reach it.

mod probe;
mod verify;

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

pub use probe::{
    hitting_statistics, paired_translation_check, stabilizer_probe, translate_cylinder_table,
    CylinderTable, PairedTranslation, ProbeHit, ProbeReport, WalkRay,
};
pub use verify::{
    extract_ray, verify_constrained, verify_spike_structure, verify_trunk, ConstrainedReport,
    EpochCheck, SpikeOptions, SpikeReport, TrunkReport,
};

use crate::group::{GroupElement, GroupError};
use crate::ladder::{LadderError, Scale, SetKind};
use crate::records::{analyze_records, RecordTrace, RecordsError, Simplicity, StepLaw};

#[derive(Debug, Error)]
pub enum WalkError {
    #[error("step law fails the record simplicity criterion: {0}")]
    LawNotSimple(String),
    #[error("invalid step distribution: {0}")]
    InvalidDistribution(String),
    #[error("walk start needs a declared length bound for verification")]
    MissingStartBound,
    #[error(transparent)]
    Ladder(#[from] LadderError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Records(#[from] RecordsError),
}

/// One sampled increment, stored compactly as coordinates into the scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Increment {
    pub level: u32,
    pub kind: SetKind,
    pub member: u32,
}

/// A probability measure adapted to a scale.
#[derive(Debug, Clone)]
pub struct StepDistribution {
    scale: Arc<Scale>,
    law: StepLaw,
    /// Truncated level masses `p̂_0..p̂_N`; the top entry absorbs the tail.
    level_mass: Vec<f64>,
    cumulative: Vec<f64>,
    alphas: Vec<f64>,
    /// Levels where `α > 0` was requested but the filling set is empty, so
    /// the α-mass was folded back into the spiking set.
    pub reallocated_levels: Vec<u32>,
    pub entropy: f64,
    pub symmetric: bool,
}

impl StepDistribution {
    /// Allocates the law over the scale.
    pub fn build(
        scale: Arc<Scale>,
        law: StepLaw,
        alpha: &dyn Fn(u32) -> f64,
    ) -> Result<Self, WalkError> {
        let simplicity = law.simplicity_criterion();
        if simplicity.verdict != Simplicity::Holds {
            return Err(WalkError::LawNotSimple(simplicity.reason));
        }
        let n_levels = scale.horizon() as u32;
        if scale.filling_set(0).is_empty() {
            return Err(WalkError::InvalidDistribution(
                "level 0 needs a non-empty filling set".into(),
            ));
        }

        let mut level_mass = Vec::with_capacity((n_levels + 1) as usize);
        for i in 0..n_levels {
            level_mass.push(law.weight(i as u64));
        }
        level_mass.push(law.tail_mass(n_levels as u64));
        let total: f64 = level_mass.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(WalkError::InvalidDistribution(format!(
                "level masses sum to {total}"
            )));
        }

        let mut alphas = vec![0.0; (n_levels + 1) as usize];
        let mut reallocated = Vec::new();
        for i in 1..=n_levels {
            let a = alpha(i).clamp(0.0, 1.0);
            if a > 0.0 && scale.filling_set(i).is_empty() {
                reallocated.push(i);
                alphas[i as usize] = 0.0;
            } else {
                alphas[i as usize] = a;
            }
        }

        let mut cumulative = Vec::with_capacity(level_mass.len());
        let mut acc = 0.0;
        for &m in &level_mass {
            acc += m;
            cumulative.push(acc);
        }

        let mut dist = StepDistribution {
            scale,
            law,
            level_mass,
            cumulative,
            alphas,
            reallocated_levels: reallocated,
            entropy: 0.0,
            symmetric: true,
        };
        dist.entropy = dist.compute_entropy();
        dist.symmetric = dist.check_symmetric()?;
        Ok(dist)
    }

    pub fn scale(&self) -> &Arc<Scale> {
        &self.scale
    }

    pub fn law(&self) -> &StepLaw {
        &self.law
    }

    pub fn top_level(&self) -> u32 {
        self.scale.horizon() as u32
    }

    pub fn level_mass(&self, i: u32) -> f64 {
        self.level_mass[i as usize]
    }

    pub fn alpha(&self, i: u32) -> f64 {
        self.alphas[i as usize]
    }

    /// `μ(g)` for a support element, zero elsewhere.
    pub fn weight(&self, g: &GroupElement) -> f64 {
        match self.scale.level_of(g) {
            None => 0.0,
            Some((level, kind)) => self.member_weight(level, kind),
        }
    }

    fn member_weight(&self, level: u32, kind: SetKind) -> f64 {
        let p = self.level_mass[level as usize];
        if level == 0 {
            return match kind {
                SetKind::Filling => p / self.scale.filling_set(0).len() as f64,
                SetKind::Spiking => 0.0,
            };
        }
        let a = self.alphas[level as usize];
        match kind {
            SetKind::Spiking => p * (1.0 - a) / self.scale.spiking_set(level).len() as f64,
            SetKind::Filling => {
                let set = self.scale.filling_set(level);
                if set.is_empty() {
                    0.0
                } else {
                    p * a / set.len() as f64
                }
            }
        }
    }

    fn compute_entropy(&self) -> f64 {
        let mut h = 0.0;
        for level in 0..=self.top_level() {
            for kind in [SetKind::Spiking, SetKind::Filling] {
                let count = match kind {
                    SetKind::Spiking if level >= 1 => self.scale.spiking_set(level).len(),
                    SetKind::Filling => self.scale.filling_set(level).len(),
                    _ => 0,
                };
                if count == 0 {
                    continue;
                }
                let w = self.member_weight(level, kind);
                if w > 0.0 {
                    h -= count as f64 * w * w.ln();
                }
            }
        }
        h
    }

    fn check_symmetric(&self) -> Result<bool, WalkError> {
        let model = self.scale.model();
        for level in 0..=self.top_level() {
            let sets: [&[GroupElement]; 2] = [
                if level >= 1 {
                    self.scale.spiking_set(level)
                } else {
                    &[]
                },
                self.scale.filling_set(level),
            ];
            for set in sets {
                for g in set {
                    let inv = model.inverse(g)?;
                    if (self.weight(g) - self.weight(&inv)).abs() > 1e-12 {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Exactness of the level allocation: `max_i |μ(Σ_i ∪ A_i) − p̂_i|`.
    pub fn allocation_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for level in 0..=self.top_level() {
            let mut mass = 0.0;
            if level >= 1 {
                mass += self.scale.spiking_set(level).len() as f64
                    * self.member_weight(level, SetKind::Spiking);
            }
            mass += self.scale.filling_set(level).len() as f64
                * self.member_weight(level, SetKind::Filling);
            worst = worst.max((mass - self.level_mass[level as usize]).abs());
        }
        worst
    }

    pub fn sample_increment<R: Rng + ?Sized>(&self, rng: &mut R) -> Increment {
        let u: f64 = rng.gen();
        let level = match self
            .cumulative
            .binary_search_by(|c| c.partial_cmp(&u).expect("finite"))
        {
            Ok(i) => (i + 1).min(self.cumulative.len() - 1) as u32,
            Err(i) => i.min(self.cumulative.len() - 1) as u32,
        };
        if level == 0 {
            let n = self.scale.filling_set(0).len();
            return Increment {
                level: 0,
                kind: SetKind::Filling,
                member: rng.gen_range(0..n) as u32,
            };
        }
        let from_filling = rng.gen::<f64>() < self.alphas[level as usize];
        if from_filling {
            let n = self.scale.filling_set(level).len();
            Increment {
                level,
                kind: SetKind::Filling,
                member: rng.gen_range(0..n) as u32,
            }
        } else {
            let n = self.scale.spiking_set(level).len();
            Increment {
                level,
                kind: SetKind::Spiking,
                member: rng.gen_range(0..n) as u32,
            }
        }
    }

    pub fn element(&self, inc: &Increment) -> &GroupElement {
        match inc.kind {
            SetKind::Spiking => &self.scale.spiking_set(inc.level)[inc.member as usize],
            SetKind::Filling => &self.scale.filling_set(inc.level)[inc.member as usize],
        }
    }

    pub fn is_identity_increment(&self, inc: &Increment) -> bool {
        inc.level == 0 && self.scale.model().is_identity(self.element(inc))
    }
}

/// A starting point with a declared length profile: `|start|_n ≤ bound` for
/// every level `n ≥ from_level`. The identity start is `(1, 0)`.
#[derive(Debug, Clone)]
pub struct StartPoint {
    pub element: GroupElement,
    pub from_level: u32,
    pub bound: u64,
}

impl StartPoint {
    pub fn identity(scale: &Scale) -> Self {
        StartPoint {
            element: scale.model().identity(),
            from_level: 1,
            bound: 0,
        }
    }
}

/// A simulated path, stored as compact increments plus the record analysis
/// of its height sequence. Positions are recomputed on demand.
#[derive(Debug, Clone)]
pub struct WalkTrace {
    pub master_seed: u64,
    pub stream: u64,
    pub start: StartPoint,
    pub increments: Vec<Increment>,
    pub records: RecordTrace,
}

impl WalkTrace {
    pub fn heights(&self) -> Vec<u64> {
        self.increments.iter().map(|i| i.level as u64).collect()
    }

    pub fn len(&self) -> usize {
        self.increments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.increments.is_empty()
    }

    /// Builds a trace from explicit increments (test hook and verification
    /// of adversarial sequences).
    pub fn from_increments(
        start: StartPoint,
        increments: Vec<Increment>,
    ) -> Result<Self, WalkError> {
        let heights: Vec<u64> = increments.iter().map(|i| i.level as u64).collect();
        let records = if heights.is_empty() {
            RecordTrace {
                times: vec![],
                values: vec![],
                multiplicities: vec![],
                occupation: Default::default(),
            }
        } else {
            analyze_records(&heights)?
        };
        Ok(WalkTrace {
            master_seed: 0,
            stream: 0,
            start,
            increments,
            records,
        })
    }

    /// All positions `y_0..y_T`; intended for short traces.
    pub fn positions(&self, dist: &StepDistribution) -> Result<Vec<GroupElement>, WalkError> {
        let model = dist.scale().model();
        let mut out = Vec::with_capacity(self.len() + 1);
        let mut y = self.start.element.clone();
        out.push(y.clone());
        for inc in &self.increments {
            model.multiply_in_place(&mut y, dist.element(inc))?;
            out.push(y.clone());
        }
        Ok(out)
    }
}

pub(crate) fn path_rng(master_seed: u64, stream: u64) -> ChaCha12Rng {
    use rand::SeedableRng;
    let mut rng = ChaCha12Rng::seed_from_u64(master_seed);
    rng.set_stream(stream);
    rng
}

/// Simulates one path of `length` steps; reproducible for a fixed
/// `(master_seed, stream)` pair.
pub fn sample_path(
    dist: &StepDistribution,
    length: usize,
    start: StartPoint,
    master_seed: u64,
    stream: u64,
) -> Result<WalkTrace, WalkError> {
    let mut rng = path_rng(master_seed, stream);
    let mut increments = Vec::with_capacity(length);
    for _ in 0..length {
        increments.push(dist.sample_increment(&mut rng));
    }
    let mut trace = WalkTrace::from_increments(start, increments)?;
    trace.master_seed = master_seed;
    trace.stream = stream;
    Ok(trace)
}

#[cfg(test)]
mod tests;
