//! Seeded Monte Carlo checks of the record-value chain facts.
//!
//! Every run draws its own ChaCha stream from a master seed, so reports are
//! reproducible and runs can be merged in any order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::law::{LawSampler, StepLaw};
use super::trace::analyze_records;
use super::RecordsError;

pub(crate) fn run_rng(master_seed: u64, stream: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(master_seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OccupationRow {
    pub j: u64,
    pub rho: f64,
    pub rho_sq: f64,
    /// Empirical P(Z_j ≥ 2).
    pub empirical: f64,
    pub stderr: f64,
    pub within_3se: bool,
    /// Empirical mean of Z_j against the geometric mean ρ/(1−ρ).
    pub mean_z: f64,
    pub expected_mean_z: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OccupationReport {
    pub runs: u64,
    pub j_max: u64,
    pub rows: Vec<OccupationRow>,
    /// Sample correlations of (Z_j, Z_{j'}) for adjacent pairs; the
    /// occupation times are independent, so these hover near zero.
    pub adjacent_correlations: Vec<(u64, u64, f64)>,
    /// Values excluded because the tail ratio is 1 there (absorbing top of a
    /// truncation): Z_j is unbounded and the geometric comparison is void.
    pub excluded: Vec<u64>,
}

impl OccupationReport {
    pub fn all_within_3se(&self) -> bool {
        self.rows.iter().all(|r| r.within_3se)
    }
}

/// Simulates i.i.d. runs and compares the occupation times `Z_j` of the
/// record chain against the geometric law with parameter `1 − ρ_j`,
/// for `j ≤ j_max`. Each run is continued until the record value exceeds
/// `j_max` (so every tracked `Z_j` is final) or `horizon` steps elapse.
pub fn occupation_law_check(
    law: &StepLaw,
    runs: u64,
    horizon: usize,
    j_max: u64,
    master_seed: u64,
) -> Result<OccupationReport, RecordsError> {
    let sampler = law.sampler();

    let mut excluded = Vec::new();
    let mut tracked = Vec::new();
    for j in 0..=j_max {
        let rho = law.rho(j)?;
        if rho >= 1.0 - 1e-12 {
            excluded.push(j);
        } else {
            tracked.push((j, rho));
        }
    }

    // Z-counts per run, in run order for determinism.
    let per_run: Vec<Vec<u32>> = (0..runs)
        .into_par_iter()
        .map(|run| {
            let mut rng = run_rng(master_seed, run);
            simulate_occupations(&sampler, j_max, horizon, &mut rng)
        })
        .collect();

    let n = runs as f64;
    let mut rows = Vec::new();
    for &(j, rho) in &tracked {
        let col = per_run.iter().map(|z| z[j as usize]);
        let ge2 = col.clone().filter(|&z| z >= 2).count() as f64 / n;
        let mean_z = col.map(|z| z as f64).sum::<f64>() / n;
        let p = rho * rho;
        let stderr = (p * (1.0 - p) / n).sqrt();
        rows.push(OccupationRow {
            j,
            rho,
            rho_sq: p,
            empirical: ge2,
            stderr,
            within_3se: (ge2 - p).abs() <= 3.0 * stderr.max(f64::EPSILON),
            mean_z,
            expected_mean_z: rho / (1.0 - rho),
        });
    }

    let mut adjacent_correlations = Vec::new();
    for pair in tracked.windows(2) {
        let (j, _) = pair[0];
        let (k, _) = pair[1];
        let xs: Vec<f64> = per_run.iter().map(|z| z[j as usize] as f64).collect();
        let ys: Vec<f64> = per_run.iter().map(|z| z[k as usize] as f64).collect();
        adjacent_correlations.push((j, k, correlation(&xs, &ys)));
    }

    Ok(OccupationReport {
        runs,
        j_max,
        rows,
        adjacent_correlations,
        excluded,
    })
}

/// Z_j for j ≤ j_max in one run; the run stops once the record value passes
/// j_max, at which point all tracked occupation counts are final.
fn simulate_occupations(
    sampler: &LawSampler,
    j_max: u64,
    horizon: usize,
    rng: &mut ChaCha12Rng,
) -> Vec<u32> {
    let mut z = vec![0u32; (j_max + 1) as usize];
    let mut max: Option<u64> = None;
    for _ in 0..horizon {
        let x = sampler.sample(rng);
        if max.map_or(true, |m| x >= m) {
            max = Some(x);
            if x > j_max {
                break;
            }
            z[x as usize] += 1;
        }
    }
    z
}

fn correlation(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        cov += (x - mx) * (y - my);
        vx += (x - mx) * (x - mx);
        vy += (y - my) * (y - my);
    }
    if vx <= 0.0 || vy <= 0.0 {
        return 0.0;
    }
    cov / (vx * vy).sqrt()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VervaatCell {
    pub i: u64,
    pub j: u64,
    pub expected: f64,
    pub empirical: f64,
    pub stderr: f64,
    pub row_visits: u64,
    pub within_3se: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VervaatCheck {
    pub transitions: u64,
    /// Cells with enough visits for the normal approximation to make sense.
    pub cells: Vec<VervaatCell>,
    pub all_within_3se: bool,
}

/// Simulates record-value chains and compares empirical transition
/// frequencies against the theoretical matrix, cell by cell, on cells with
/// at least `min_visits` source-row visits.
pub fn vervaat_chain_check(
    law: &StepLaw,
    total_transitions: u64,
    run_length: usize,
    min_visits: u64,
    master_seed: u64,
) -> Result<VervaatCheck, RecordsError> {
    let sampler = law.sampler();
    let chunk = 64u64;

    let mut counts: std::collections::HashMap<(u64, u64), u64> = std::collections::HashMap::new();
    let mut row_totals: std::collections::HashMap<u64, u64> = std::collections::HashMap::new();
    let mut transitions = 0u64;
    let mut stream = 0u64;
    while transitions < total_transitions {
        let batch: Vec<Vec<(u64, u64)>> = (stream..stream + chunk)
            .into_par_iter()
            .map(|s| {
                let mut rng = run_rng(master_seed, s);
                let xs: Vec<u64> = (0..run_length).map(|_| sampler.sample(&mut rng)).collect();
                let trace = analyze_records(&xs).expect("non-empty by construction");
                trace
                    .values
                    .windows(2)
                    .map(|w| (w[0], w[1]))
                    .collect::<Vec<_>>()
            })
            .collect();
        for pairs in batch {
            for (i, j) in pairs {
                *counts.entry((i, j)).or_insert(0) += 1;
                *row_totals.entry(i).or_insert(0) += 1;
                transitions += 1;
            }
        }
        stream += chunk;
    }

    let mut cells = Vec::new();
    let mut keys: Vec<(u64, u64)> = counts.keys().copied().collect();
    keys.sort_unstable();
    for (i, j) in keys {
        let visits = row_totals[&i];
        if visits < min_visits {
            continue;
        }
        let expected = law.vervaat_transition(i, j)?;
        if expected * (visits as f64) < 10.0 {
            continue; // too rare for a 3-SE normal comparison
        }
        let empirical = counts[&(i, j)] as f64 / visits as f64;
        let stderr = (expected * (1.0 - expected) / visits as f64).sqrt();
        cells.push(VervaatCell {
            i,
            j,
            expected,
            empirical,
            stderr,
            row_visits: visits,
            within_3se: (empirical - expected).abs() <= 3.0 * stderr.max(f64::EPSILON),
        });
    }

    let all = cells.iter().all(|c| c.within_3se);
    Ok(VervaatCheck {
        transitions,
        cells,
        all_within_3se: all,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MixedPopulationReport {
    pub runs: u64,
    /// Per run, the index (1-based epoch number) of the last record epoch
    /// carrying a flagged increment; 0 when no epoch is flagged.
    pub last_flagged_epoch: Vec<u32>,
    pub mean_last_flagged: f64,
    pub max_last_flagged: u32,
    /// Fraction of runs with no flagged record epoch at all.
    pub fraction_clean: f64,
    /// Partial sum of the α series over the tabulated range; a divergent
    /// series voids the tightness claim.
    pub alpha_partial_sum: f64,
    pub alpha_series_warning: bool,
}

/// Mixed-population check: steps carry a `{0,1}` flag, flagged with
/// probability `alpha(j)` given the value `j`. When the projection satisfies
/// record simplicity and `Σ alpha_j < ∞`, the record epochs are eventually
/// all unflagged; the report shows the distribution of the last flagged
/// record epoch across runs.
pub fn mixed_population_check(
    law: &StepLaw,
    alpha: &(dyn Fn(u64) -> f64 + Sync),
    runs: u64,
    horizon: usize,
    master_seed: u64,
) -> Result<MixedPopulationReport, RecordsError> {
    let sampler = law.sampler();
    let last_flagged_epoch: Vec<u32> = (0..runs)
        .into_par_iter()
        .map(|run| {
            let mut rng = run_rng(master_seed, run);
            let mut max: Option<u64> = None;
            let mut epoch = 0u32;
            let mut last_flagged = 0u32;
            for _ in 0..horizon {
                let x = sampler.sample(&mut rng);
                let threshold = alpha(x).clamp(0.0, 1.0);
                let flagged = rng.gen::<f64>() < threshold;
                if max.map_or(true, |m| x >= m) {
                    max = Some(x);
                    epoch += 1;
                    if flagged {
                        last_flagged = epoch;
                    }
                }
            }
            last_flagged
        })
        .collect();

    let clean = last_flagged_epoch.iter().filter(|&&e| e == 0).count();
    let mean = last_flagged_epoch.iter().map(|&e| e as f64).sum::<f64>() / runs as f64;
    let max = last_flagged_epoch.iter().copied().max().unwrap_or(0);

    let alpha_partial_sum: f64 = (0..law.table_len() as u64).map(|j| alpha(j).clamp(0.0, 1.0)).sum();
    // Crude divergence heuristic: compare the last tabulated α against the
    // increments of a convergent reference. The caller sees the partial sum
    // either way.
    let tail_alpha = alpha(law.table_len() as u64 - 1).clamp(0.0, 1.0);
    let alpha_series_warning = tail_alpha * law.table_len() as f64 > 2.0;

    Ok(MixedPopulationReport {
        runs,
        last_flagged_epoch,
        mean_last_flagged: mean,
        max_last_flagged: max,
        fraction_clean: clean as f64 / runs as f64,
        alpha_partial_sum,
        alpha_series_warning,
    })
}
