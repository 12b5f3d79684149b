//! Named, pinned experiment presets.
//!
//! Every constant here was fixed by pilot runs and stays frozen so that the
//! verification suites are reproducible. Two regimes:
//!
//! * small, unit-gauge ladders built by superswitcher search, where every
//!   axiom is verified by exhaustive enumeration;
//! * deep certified towers with quadratically growing gauges, where walks of
//!   realistic length satisfy the per-epoch premises and ladder-ness comes
//!   from the structural family certificate.

use std::sync::Arc;

use crate::group::GroupModel;
use crate::ladder::{
    build_ladder, certified_free_ladder, certified_lamplighter_ladder, BuildOptions, LadderError,
    Scale, TowerFilling, TowerParams,
};
use crate::records::StepLaw;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PresetName {
    /// Free group, 3-level unit-gauge builder ladder.
    F2Small,
    /// Lamplighter over Z_2, 3-level unit-gauge builder ladder.
    LamplighterSmall,
    /// Free group tower with the minimal fast-growth gauge, for ray-rule
    /// enumeration.
    F2Markov,
    /// Deep free-group tower for the walk suites.
    F2Walk,
    /// Deep lamplighter tower, same regime.
    LamplighterWalk,
}

impl PresetName {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "f2-small" => Some(PresetName::F2Small),
            "lamplighter-small" => Some(PresetName::LamplighterSmall),
            "f2-markov" => Some(PresetName::F2Markov),
            "f2-walk" => Some(PresetName::F2Walk),
            "lamplighter-walk" => Some(PresetName::LamplighterWalk),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            PresetName::F2Small => "f2-small",
            PresetName::LamplighterSmall => "lamplighter-small",
            PresetName::F2Markov => "f2-markov",
            PresetName::F2Walk => "f2-walk",
            PresetName::LamplighterWalk => "lamplighter-walk",
        }
    }

    pub const ALL: [PresetName; 5] = [
        PresetName::F2Small,
        PresetName::LamplighterSmall,
        PresetName::F2Markov,
        PresetName::F2Walk,
        PresetName::LamplighterWalk,
    ];
}

/// Depth of the deep towers: sized so a `10^5`-step walk with the power(3)
/// law almost never reaches the absorbing top level twice.
pub const WALK_TOWER_LEVELS: u64 = 448;

/// Gauge of the deep towers: `λ(n) = 3(n+1)²`. Quadratic growth matches the
/// record-time scale of the power(3) law, with a pilot-chosen constant large
/// enough that the counting premises hold from mid-trace burn-ins on.
pub fn walk_gauge(levels: u64) -> Vec<u64> {
    (1..=levels).map(|n| 3 * (n + 1) * (n + 1)).collect()
}

/// The α-sequence of the walk presets: `α_i = 0.2/(i+1)²` (summable).
pub fn walk_alpha(i: u32) -> f64 {
    0.2 / (((i + 1) as u64 * (i + 1) as u64) as f64)
}

/// The walk presets' step law.
pub fn walk_law() -> StepLaw {
    StepLaw::power(3.0, 4096).expect("pinned parameters are valid")
}

pub fn build_preset_scale(name: PresetName) -> Result<Arc<Scale>, LadderError> {
    match name {
        PresetName::F2Small => {
            let m = GroupModel::free(2).expect("rank 2");
            let parse = |w: &str| m.parse(w).expect("preset elements parse");
            let filling = vec![
                vec![parse("e")],
                vec![parse("a"), parse("a^-1")],
                vec![parse("b"), parse("b^-1")],
                vec![],
            ];
            Ok(Arc::new(build_ladder(
                &m,
                vec![1, 1, 1],
                filling,
                &BuildOptions::default(),
            )?))
        }
        PresetName::LamplighterSmall => {
            let m = GroupModel::lamplighter(2).expect("modulus 2");
            let parse = |w: &str| m.parse(w).expect("preset elements parse");
            let filling = vec![
                vec![parse("e")],
                vec![parse("t"), parse("t^-1")],
                vec![parse("l0")],
                vec![],
            ];
            Ok(Arc::new(build_ladder(
                &m,
                vec![1, 1, 1],
                filling,
                &BuildOptions::default(),
            )?))
        }
        PresetName::F2Markov => Ok(Arc::new(certified_free_ladder(&TowerParams {
            gauge: vec![0, 1, 4],
            filling: TowerFilling::Minimal,
        })?)),
        PresetName::F2Walk => Ok(Arc::new(certified_free_ladder(&TowerParams {
            gauge: walk_gauge(WALK_TOWER_LEVELS),
            filling: TowerFilling::Generating,
        })?)),
        PresetName::LamplighterWalk => Ok(Arc::new(certified_lamplighter_ladder(
            2,
            &TowerParams {
                gauge: walk_gauge(WALK_TOWER_LEVELS),
                filling: TowerFilling::Generating,
            },
        )?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_presets_build() {
        for name in PresetName::ALL {
            let scale = build_preset_scale(name).unwrap();
            assert!(scale.horizon() >= 3, "{}", name.as_str());
            assert!(scale.certificate().is_ladder());
        }
    }

    #[test]
    fn preset_names_round_trip() {
        for name in PresetName::ALL {
            assert_eq!(PresetName::parse(name.as_str()), Some(name));
        }
        assert_eq!(PresetName::parse("nope"), None);
    }
}
