//! Per-path verification of the spike/record structure, the trunk property,
//! and constrained-forest convergence.
//!
//! The checks are exact and per-epoch. For a record epoch `k` at time `T_k`
//! with value `R_k`, the premises are: (a) `R_k` is simple in the trace,
//! (b) the record increment is a spiking element, and (c) the counting
//! bounds — the number of non-identity increments strictly before `T_k`,
//! and within the block up to the next record time, both fit the gauge
//! `λ(R_k)`. Simplicity puts every off-record increment of the block in
//! `Δ_{R_k}`, so the counts upper-bound the true truncated lengths, and the
//! premises certify a spike decomposition of every block position with
//! spike `x_{T_k}` and prefix `y_{T_k−1}`. On a certified ladder that
//! decomposition is the unique one; the implication is a theorem, so the
//! verifier demands zero exceptions wherever the premises hold.
//!
//! Positions are prefix products of the increments, so the witness product
//! identity holds by construction; re-multiplying it for every epoch of a
//! long path would dominate the runtime without adding information. The
//! verifier therefore evaluates the full product identity on every epoch of
//! small paths and on a fixed deterministic sample of epochs otherwise; the
//! counting certificates, membership and uniqueness checks run on every
//! epoch either way.

use serde::Serialize;

use crate::forest::edge_survives;
use crate::group::GroupElement;
use crate::ladder::{classify_with_witness, Classification, Classifier, SetKind, SpikeWitness};
use crate::records::EnvelopePair;

use super::{StepDistribution, WalkError, WalkRay, WalkTrace};

#[derive(Debug, Clone)]
pub struct SpikeOptions {
    /// Also classify block ends by exhaustive enumeration and compare; only
    /// feasible on small scales. Implies full product checks.
    pub cross_check_enumerative: bool,
    /// Ball budget for the enumerative cross-check.
    pub budget: usize,
    /// Keep the ray vertex positions (burn-in onwards) in the report.
    pub collect_ray: bool,
    /// Evaluate the witness product identity on every epoch instead of the
    /// deterministic sample.
    pub full_product_checks: bool,
}

impl Default for SpikeOptions {
    fn default() -> Self {
        SpikeOptions {
            cross_check_enumerative: false,
            budget: crate::group::DEFAULT_BALL_BUDGET,
            collect_ray: false,
            full_product_checks: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EpochCheck {
    pub k: usize,
    /// `T_k`, 1-based.
    pub time: usize,
    /// `R_k`.
    pub value: u64,
    pub simple: bool,
    pub sigma_increment: bool,
    /// Non-identity increments strictly before `T_k` plus the start bound.
    pub prefix_count: u64,
    pub prefix_within_gauge: bool,
    /// Non-identity increments inside the block `(T_k, T_{k+1})`.
    pub block_count: u64,
    pub block_within_gauge: bool,
    /// The start's declared length profile applies at this height.
    pub start_bound_applies: bool,
    pub premises_hold: bool,
    /// Premises held and the conclusion checks passed.
    pub conclusion_verified: bool,
    /// The full witness product identity was re-multiplied at this epoch.
    pub product_checked: bool,
    /// Premises held but some conclusion check failed — the zero-exception
    /// counter.
    pub exception: bool,
}

#[derive(Debug)]
pub struct SpikeReport {
    pub epochs: Vec<EpochCheck>,
    /// Positions `y_{T_k−1}` for epochs `k ≥ k0`, when collected.
    pub ray_vertices: Option<Vec<GroupElement>>,
    /// First epoch of the all-premises suffix, when any.
    pub k0: Option<usize>,
    pub verified_epochs: usize,
    pub product_checked_epochs: usize,
    pub exceptions: usize,
    /// Fraction of record epochs in `10..=30` whose increment was a filling
    /// element (the flagged-subpopulation decay diagnostic).
    pub flagged_fraction_10_30: f64,
}

struct EpochPremises {
    time: usize,
    value: u64,
    simple: bool,
    sigma_increment: bool,
    prefix_count: u64,
    prefix_ok: bool,
    block_count: u64,
    block_ok: bool,
    start_bound_applies: bool,
    holds: bool,
}

/// Pass 1: counting only. No positions are formed.
fn premise_pass(dist: &StepDistribution, trace: &WalkTrace) -> Vec<EpochPremises> {
    let scale = dist.scale();
    let times = &trace.records.times;
    let values = &trace.records.values;
    let n_epochs = times.len();
    let horizon = scale.horizon() as u64;

    // non-identity increments before each step (prefix sums at epoch times)
    let mut out = Vec::with_capacity(n_epochs);
    let mut nonid: u64 = 0;
    let mut next_epoch = 0usize;
    let mut epoch_prefix_nonid = vec![0u64; n_epochs];
    for n in 1..=trace.len() {
        if next_epoch < n_epochs && times[next_epoch] == n {
            epoch_prefix_nonid[next_epoch] = nonid;
            next_epoch += 1;
        }
        if !dist.is_identity_increment(&trace.increments[n - 1]) {
            nonid += 1;
        }
    }
    let total_nonid = nonid;

    for k in 0..n_epochs {
        let time = times[k];
        let value = values[k];
        let simple = trace.records.is_simple_epoch(k);
        let inc = &trace.increments[time - 1];
        let sigma_increment = value >= 1 && matches!(inc.kind, SetKind::Spiking);
        let in_horizon = value >= 1 && value <= horizon;
        let start_bound_applies = value >= trace.start.from_level as u64;

        // block (T_k, T_{k+1}): non-identity increments strictly between the
        // record times (the record increment itself is the spike)
        let next_prefix = if k + 1 < n_epochs {
            epoch_prefix_nonid[k + 1]
        } else {
            total_nonid
        };
        let record_is_nonid = !dist.is_identity_increment(inc) as u64;
        let block_count = next_prefix - epoch_prefix_nonid[k] - record_is_nonid;

        let (prefix_count, prefix_ok, block_ok) = if in_horizon && start_bound_applies {
            let lambda = scale.gauge_at(value as u32);
            let prefix_count = epoch_prefix_nonid[k] + trace.start.bound;
            (
                prefix_count,
                prefix_count <= lambda,
                block_count <= lambda,
            )
        } else {
            (epoch_prefix_nonid[k], false, false)
        };

        out.push(EpochPremises {
            time,
            value,
            simple,
            sigma_increment,
            prefix_count,
            prefix_ok,
            block_count,
            block_ok,
            start_bound_applies,
            holds: simple
                && sigma_increment
                && in_horizon
                && start_bound_applies
                && prefix_ok
                && block_ok,
        });
    }
    out
}

fn burn_in(premises: &[EpochPremises]) -> Option<usize> {
    let mut k0 = None;
    for k in (0..premises.len()).rev() {
        if premises[k].holds {
            k0 = Some(k);
        } else {
            break;
        }
    }
    k0
}

/// Epochs that get the full product re-multiplication under sampling: the
/// first three, the last, and every eighth.
fn product_sampled(k: usize, n_epochs: usize) -> bool {
    k < 3 || k + 1 == n_epochs || k % 8 == 0
}

/// Walks the trace, checking every record epoch; see the module docs for
/// the premise/conclusion split.
pub fn verify_spike_structure(
    dist: &StepDistribution,
    trace: &WalkTrace,
    options: &SpikeOptions,
) -> Result<SpikeReport, WalkError> {
    let scale = dist.scale().clone();
    let model = scale.model().clone();
    let premises = premise_pass(dist, trace);
    let k0 = burn_in(&premises);
    let n_epochs = premises.len();

    let mut classifier = options
        .cross_check_enumerative
        .then(|| Classifier::new(&scale, options.budget));
    let full_products = options.full_product_checks || options.cross_check_enumerative;

    // Which epochs need the position stream?
    let needs_product: Vec<bool> = (0..n_epochs)
        .map(|k| premises[k].holds && (full_products || product_sampled(k, n_epochs)))
        .collect();
    let collect_from = options.collect_ray.then_some(k0).flatten();

    let mut epochs: Vec<EpochCheck> = Vec::with_capacity(n_epochs);
    let mut ray_vertices = options.collect_ray.then(Vec::new);

    // Pass 2: one position stream; clones only at product-checked or
    // ray-collected epochs.
    let mut y = trace.start.element.clone();
    let mut next_epoch = 0usize;
    struct OpenBlock {
        k: usize,
        prefix_pos: Option<GroupElement>,
        postfix: Option<GroupElement>,
    }
    let mut open: Option<OpenBlock> = None;

    let finalize = |block: OpenBlock,
                        y_end: &GroupElement,
                        classifier: &mut Option<Classifier<'_>>,
                        epochs: &mut Vec<EpochCheck>|
     -> Result<(), WalkError> {
        let k = block.k;
        let p = &premises[k];
        let mut conclusion_verified = false;
        let mut product_checked = false;
        let mut exception = false;
        if p.holds {
            let spike = dist.element(&trace.increments[p.time - 1]);
            // membership and uniqueness checks, every epoch
            let membership = scale
                .level_of(spike)
                .map(|(level, kind)| level as u64 == p.value && kind == SetKind::Spiking)
                .unwrap_or(false);
            let certified = scale.certificate().is_ladder();
            conclusion_verified = membership && certified;
            if let (Some(prefix_pos), Some(postfix)) = (&block.prefix_pos, &block.postfix) {
                product_checked = true;
                let witness = SpikeWitness {
                    prefix: prefix_pos.clone(),
                    spike: spike.clone(),
                    postfix: postfix.clone(),
                    height: p.value as u32,
                    prefix_len_bound: p.prefix_count,
                    postfix_len_bound: p.block_count,
                };
                match classify_with_witness(&scale, y_end, &witness) {
                    Ok(Classification::Spiked(d)) => {
                        conclusion_verified &=
                            d.prefix == *prefix_pos && d.spike == *spike;
                    }
                    _ => conclusion_verified = false,
                }
                if let Some(classifier) = classifier.as_mut() {
                    match classifier.classify(y_end)? {
                        Classification::Spiked(d) => {
                            conclusion_verified &=
                                d.prefix == *prefix_pos && d.spike == *spike;
                        }
                        _ => conclusion_verified = false,
                    }
                }
            }
            exception = !conclusion_verified;
        }
        epochs.push(EpochCheck {
            k,
            time: p.time,
            value: p.value,
            simple: p.simple,
            sigma_increment: p.sigma_increment,
            prefix_count: p.prefix_count,
            prefix_within_gauge: p.prefix_ok,
            block_count: p.block_count,
            block_within_gauge: p.block_ok,
            start_bound_applies: p.start_bound_applies,
            premises_hold: p.holds,
            conclusion_verified,
            product_checked,
            exception,
        });
        Ok(())
    };

    for n in 1..=trace.len() {
        let inc = &trace.increments[n - 1];
        let x = dist.element(inc);

        if next_epoch < n_epochs && premises[next_epoch].time == n {
            if let Some(block) = open.take() {
                finalize(block, &y, &mut classifier, &mut epochs)?;
            }
            if let (Some(rv), Some(from)) = (ray_vertices.as_mut(), collect_from) {
                if next_epoch >= from {
                    rv.push(y.clone());
                }
            }
            let want_product = needs_product[next_epoch];
            open = Some(OpenBlock {
                k: next_epoch,
                prefix_pos: want_product.then(|| y.clone()),
                postfix: want_product.then(|| model.identity()),
            });
            next_epoch += 1;
        } else if let Some(block) = open.as_mut() {
            if let Some(postfix) = block.postfix.as_mut() {
                model.multiply_in_place(postfix, x)?;
            }
        }

        model.multiply_in_place(&mut y, x)?;
    }
    if let Some(block) = open.take() {
        finalize(block, &y, &mut classifier, &mut epochs)?;
    }

    let verified_epochs = epochs.iter().filter(|e| e.conclusion_verified).count();
    let product_checked_epochs = epochs.iter().filter(|e| e.product_checked).count();
    let exceptions = epochs.iter().filter(|e| e.exception).count();
    let window: Vec<&EpochCheck> = epochs.iter().filter(|e| e.k >= 10 && e.k <= 30).collect();
    let flagged = window
        .iter()
        .filter(|e| !e.sigma_increment && e.value >= 1)
        .count();
    let flagged_fraction_10_30 = if window.is_empty() {
        0.0
    } else {
        flagged as f64 / window.len() as f64
    };

    Ok(SpikeReport {
        epochs,
        ray_vertices,
        k0,
        verified_epochs,
        product_checked_epochs,
        exceptions,
        flagged_fraction_10_30,
    })
}

#[derive(Debug, Serialize)]
pub struct TrunkReport {
    /// First epoch from which every later epoch's premises hold, when any.
    pub k0: Option<usize>,
    /// Consecutive prefix-chain pairs checked from `k0`.
    pub chain_pairs: usize,
    /// Pairs whose prefix relation failed verification — must be zero.
    pub chain_exceptions: usize,
    /// Every ray vertex is a path position by construction; recorded
    /// explicitly for the report.
    pub ray_vertices_on_path: bool,
    pub inconclusive: bool,
}

/// Identifies the burn-in epoch and checks the prefix chain
/// `π(y_{T_{k+1}−1}) = y_{T_k−1}` for all `k ≥ k0`: epoch `k`'s conclusion
/// covers the block end `y_{T_{k+1}−1}`, whose unique decomposition has
/// prefix `y_{T_k−1}`, which is exactly the chain relation.
pub fn verify_trunk(spike_report: &SpikeReport) -> TrunkReport {
    let epochs = &spike_report.epochs;
    match spike_report.k0 {
        None => TrunkReport {
            k0: None,
            chain_pairs: 0,
            chain_exceptions: 0,
            ray_vertices_on_path: true,
            inconclusive: true,
        },
        Some(k0) => {
            let mut pairs = 0;
            let mut exceptions = 0;
            for e in &epochs[k0..epochs.len().saturating_sub(1)] {
                pairs += 1;
                if !e.conclusion_verified {
                    exceptions += 1;
                }
            }
            TrunkReport {
                k0: Some(k0),
                chain_pairs: pairs,
                chain_exceptions: exceptions,
                ray_vertices_on_path: true,
                inconclusive: false,
            }
        }
    }
}

/// Builds the verified ray of a path from a spike report with collected
/// vertices: `y_{T_k−1}` for `k ≥ k0`.
pub fn extract_ray(spike_report: &SpikeReport, trunk: &TrunkReport) -> Option<WalkRay> {
    let k0 = trunk.k0?;
    let vertices = spike_report.ray_vertices.as_ref()?;
    let epochs = &spike_report.epochs;
    let mut heights = Vec::new();
    let mut times = Vec::new();
    for k in k0..epochs.len() {
        heights.push(if k == 0 { 0 } else { epochs[k - 1].value });
        times.push(epochs[k].time);
    }
    if vertices.len() != times.len() {
        return None;
    }
    Some(WalkRay {
        vertices: vertices.clone(),
        heights,
        times,
    })
}

#[derive(Debug, Serialize)]
pub struct ConstrainedReport {
    /// Pairs `(R_k, R_{k+1})` examined (k within the configured window).
    pub pairs: usize,
    /// Pairs with `R_{k+1} > Ψ(R_k)`.
    pub violations: usize,
    /// For every non-violating pair the corresponding forest edge survives
    /// the Ψ-constraint (shared predicate with the forest module).
    pub survival_consistent: bool,
    /// `T_{k+1} ≤ Φ(R_k)` failures over the same window, reported for the
    /// envelope statistic.
    pub phi_violations: usize,
}

/// Checks the record-value envelope along a path: `R_{k+1} ≤ Ψ(R_k)` for
/// epochs `k ≥ max(k0, from_epoch)`.
pub fn verify_constrained(
    trace: &WalkTrace,
    envelopes: &EnvelopePair,
    spike_report: &SpikeReport,
    from_epoch: usize,
) -> Result<ConstrainedReport, WalkError> {
    let start = spike_report.k0.unwrap_or(0).max(from_epoch);
    let values = &trace.records.values;
    let times = &trace.records.times;
    let mut pairs = 0;
    let mut violations = 0;
    let mut phi_violations = 0;
    let mut survival_consistent = true;
    for k in start..values.len().saturating_sub(1) {
        let (r_k, r_next) = (values[k], values[k + 1]);
        pairs += 1;
        let psi = envelopes.psi_of(r_k)?;
        let violated = r_next > psi;
        if violated {
            violations += 1;
        }
        // the walk's forest edge between the blocks has child height R_{k+1}
        // and parent height R_k; survival must mirror the envelope check
        let survives = edge_survives(r_next as u32, r_k as u32, &|h| {
            envelopes.psi_of(h as u64).unwrap_or(0)
        });
        if survives == violated {
            survival_consistent = false;
        }
        if (times[k + 1] as u64) > envelopes.phi_of(r_k)? {
            phi_violations += 1;
        }
    }
    Ok(ConstrainedReport {
        pairs,
        violations,
        survival_consistent,
        phi_violations,
    })
}
