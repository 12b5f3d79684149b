//! Envelope functions bounding record times and record values.
//!
//! From the law's distribution function two auxiliary scales are derived:
//! `φ(n) = min{ j : F_j ≥ (1/n²)^{1/n} }` (a level the running maximum has
//! almost surely reached by time `n`) and `ψ(n) = min{ j : F_j ≥ 1 − 1/n² }`
//! (a level it almost surely has not exceeded). Inverting `φ` gives
//! `Φ(r) = 1 + max{ n : φ(n) ≤ r }`, an eventual bound on the next record
//! time after a record of value `r`; composing, `Ψ(r) = ψ(Φ(r))` bounds the
//! next record value. The exponent 2 in `1/n²` is the summability exponent
//! and is configurable.

use serde::{Deserialize, Serialize};

use super::law::StepLaw;
use super::RecordsError;

/// Monotone lookup tables for `Φ` and `Ψ`, indexed by record value `r`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnvelopePair {
    pub big_phi: Vec<u64>,
    pub big_psi: Vec<u64>,
    /// Borel–Cantelli exponent used for both thresholds (default 2).
    pub exponent: f64,
}

impl EnvelopePair {
    pub fn horizon(&self) -> u64 {
        self.big_phi.len() as u64 - 1
    }

    pub fn phi_of(&self, r: u64) -> Result<u64, RecordsError> {
        self.big_phi
            .get(r as usize)
            .copied()
            .ok_or(RecordsError::Horizon {
                horizon: self.horizon(),
                requested: r,
            })
    }

    pub fn psi_of(&self, r: u64) -> Result<u64, RecordsError> {
        self.big_psi
            .get(r as usize)
            .copied()
            .ok_or(RecordsError::Horizon {
                horizon: self.horizon(),
                requested: r,
            })
    }
}

/// First `j` with `F_j ≥ threshold`, or `None` when the law cannot reach it
/// within a sane search range.
pub fn quantile(law: &StepLaw, threshold: f64) -> Option<u64> {
    if threshold <= 0.0 {
        return Some(0);
    }
    if threshold >= 1.0 {
        return None; // infinite analytic tails never reach mass 1 exactly
    }
    let mut hi = 1u64;
    while law.cdf(hi) < threshold {
        hi *= 2;
        if hi > 1 << 50 {
            return None;
        }
    }
    let mut lo = 0u64;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if law.cdf(mid) < threshold {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}

/// `φ(n) = min{ j : F_j ≥ exp(−e·ln n / n) }`. Undefined at `n = 1`
/// (threshold 1 is never attained by an infinitely supported law).
pub fn phi(law: &StepLaw, n: u64, exponent: f64) -> Option<u64> {
    let threshold = (-(exponent * (n as f64).ln()) / n as f64).exp();
    quantile(law, threshold)
}

/// `ψ(n) = min{ j : F_j ≥ 1 − 1/n^e }`, evaluated on tail masses directly so
/// precision survives thresholds within an ulp of 1.
fn psi(law: &StepLaw, n: u64, exponent: f64) -> Result<u64, RecordsError> {
    let epsilon = (n as f64).powf(-exponent);
    if epsilon >= 1.0 {
        return Ok(0); // n = 1: threshold 0 is met at j = 0
    }
    if epsilon <= 0.0 {
        return Err(RecordsError::Horizon {
            horizon: 1 << 50,
            requested: n,
        });
    }
    let mut hi = 1u64;
    while law.tail_mass(hi + 1) > epsilon {
        hi = hi.saturating_mul(2);
        if hi >= 1 << 62 {
            return Err(RecordsError::Horizon {
                horizon: 1 << 62,
                requested: n,
            });
        }
    }
    let mut lo = 0u64;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if law.tail_mass(mid + 1) > epsilon {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Largest `n ≥ 2` with `φ(n) ≤ r`, i.e. with
/// `exponent·ln n / n ≥ −ln F_r`; the left side peaks at `n = 3` and
/// decreases beyond, so this is a bisection. Returns 1 when no `n` works.
fn max_n_with_phi_le(law: &StepLaw, r: u64, exponent: f64) -> u64 {
    let f_r = law.cdf(r);
    if f_r <= 0.0 {
        return 1;
    }
    let c = -f_r.ln(); // ≥ 0, and > 0 for analytic tails
    let score = |n: u64| exponent * (n as f64).ln() / n as f64;
    if score(3) < c {
        // even the peak misses: only n = 2 remains as a candidate
        return if score(2) >= c { 2 } else { 1 };
    }
    // Gallop past the crossing point, then bisect on the decreasing side.
    let mut hi = 6u64;
    while score(hi) >= c {
        hi = hi.saturating_mul(2);
        if hi >= 1 << 62 {
            return hi; // effectively unbounded at f64 resolution
        }
    }
    let mut lo = 3u64; // score(lo) ≥ c invariant
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if score(mid) >= c {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Builds `Φ` and `Ψ` tables for record values `0..=r_max`.
pub fn build_envelopes(law: &StepLaw, r_max: u64) -> Result<EnvelopePair, RecordsError> {
    build_envelopes_with_exponent(law, r_max, 2.0)
}

pub fn build_envelopes_with_exponent(
    law: &StepLaw,
    r_max: u64,
    exponent: f64,
) -> Result<EnvelopePair, RecordsError> {
    if !law.has_analytic_tail() {
        return Err(RecordsError::NoAnalyticTail("build_envelopes"));
    }

    let mut big_phi = Vec::with_capacity((r_max + 1) as usize);
    let mut big_psi = Vec::with_capacity((r_max + 1) as usize);
    for r in 0..=r_max {
        let phi_r = max_n_with_phi_le(law, r, exponent) + 1;
        // Clamp to keep Ψ(r) ≥ r; a larger envelope is still an envelope.
        let psi_r = psi(law, phi_r, exponent)?.max(r);
        big_phi.push(phi_r);
        big_psi.push(psi_r);
    }

    // Monotone by construction (F_r is non-decreasing in r); keep it checked.
    debug_assert!(big_phi.windows(2).all(|w| w[0] <= w[1]));
    debug_assert!(big_psi.windows(2).all(|w| w[0] <= w[1]));

    Ok(EnvelopePair {
        big_phi,
        big_psi,
        exponent,
    })
}
