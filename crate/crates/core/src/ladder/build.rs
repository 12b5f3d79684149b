//! Recursive ladder construction by superswitcher search.
//!
//! Level by level, the spiking set is the symmetrized pair of the first
//! superswitcher for `ball(Δ_n, 5λ(n))` in breadth-first word-length order.
//! Built scales therefore satisfy the switching sufficient condition by
//! construction, which is what their certificate records.

use std::collections::HashSet;

use crate::group::{GroupElement, GroupModel};
use crate::switch::find_superswitcher;

use super::{LadderCertificate, LadderError, Scale};

#[derive(Debug, Clone)]
pub struct BuildOptions {
    /// Ball materialization budget (elements).
    pub ball_budget: usize,
    /// Candidate budget per superswitcher search.
    pub search_budget: usize,
    /// Generator order used by the candidate enumeration; defaults to the
    /// model's standard symmetric generators. Permuting it randomizes the
    /// tie-break among shortest superswitchers.
    pub generator_order: Option<Vec<GroupElement>>,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            ball_budget: crate::group::DEFAULT_BALL_BUDGET,
            search_budget: 2_000_000,
            generator_order: None,
        }
    }
}

/// Builds an `N`-level ladder over the given gauge and filling sets.
/// The filling list must have `N + 1` entries with `e ∈ A_0`; every chosen
/// spiking pair is kept disjoint from all filling sets and earlier spiking
/// sets, so the level map stays single-valued.
pub fn build_ladder(
    model: &GroupModel,
    gauge: Vec<u64>,
    filling: Vec<Vec<GroupElement>>,
    options: &BuildOptions,
) -> Result<Scale, LadderError> {
    let n_levels = gauge.len();
    if filling.len() != n_levels + 1 {
        return Err(LadderError::Validation(format!(
            "need {} filling sets for {} levels, got {}",
            n_levels + 1,
            n_levels,
            filling.len()
        )));
    }
    let generator_order = options
        .generator_order
        .clone()
        .unwrap_or_else(|| model.standard_generators());

    // Everything already assigned to a set is off limits for new spikes.
    let mut excluded: HashSet<GroupElement> = filling.iter().flatten().cloned().collect();

    let mut spiking: Vec<Vec<GroupElement>> = Vec::with_capacity(n_levels);
    for n in 1..=n_levels as u32 {
        // Δ_n from the partial scale: filling sets < n, spiking sets < n.
        let mut delta = Vec::new();
        for set in filling.iter().take(n as usize) {
            delta.extend(set.iter().cloned());
        }
        for set in spiking.iter() {
            delta.extend(set.iter().cloned());
        }
        let gens = crate::group::GeneratingSet {
            elements: delta,
            symmetric: true,
        };
        let radius = 5 * gauge[(n - 1) as usize];
        let z = crate::group::ball(model, &gens, radius, options.ball_budget)
            .map_err(|e| match e {
                crate::group::GroupError::BallCapacity { budget, radius } => {
                    LadderError::Horizon {
                        level: n,
                        reason: format!(
                            "switching ball of radius {radius} exceeds budget {budget}"
                        ),
                    }
                }
                other => LadderError::Group(other),
            })?;

        let found = find_superswitcher(
            model,
            z.elements(),
            generator_order.clone(),
            &excluded,
            options.search_budget,
        )
        .map_err(|e| match e {
            crate::switch::SwitchError::BudgetExhausted { budget, frontier } => {
                LadderError::Horizon {
                    level: n,
                    reason: format!(
                        "superswitcher search exhausted budget {budget} (frontier {frontier})"
                    ),
                }
            }
            other => LadderError::Switch(other),
        })?;

        let sigma = found.element;
        let sigma_inv = model.inverse(&sigma)?;
        let pair = if sigma == sigma_inv {
            vec![sigma]
        } else {
            vec![sigma, sigma_inv]
        };
        excluded.extend(pair.iter().cloned());
        spiking.push(pair);
    }

    let mut scale = Scale::new(model.clone(), gauge, spiking, filling)?;
    scale.set_certificate(LadderCertificate::SwitchingChecked);
    Ok(scale)
}
