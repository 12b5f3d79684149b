//! Step laws on the non-negative integers.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::RecordsError;

/// What lies beyond the tabulated weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Tail {
    /// Nothing: the table is the entire (finitely supported) law.
    Finite,
    /// An unspecified remainder: the table is a truncation of an unknown law.
    Unknown,
    /// `p_j ∝ (j+1)^{-s}` with `s > 1`, continued analytically past the table.
    Power { s: f64 },
    /// `p_j = (1−q) q^j` with `0 < q < 1`.
    Geometric { q: f64 },
}

/// A probability law on `{0, 1, 2, …}`: tabulated weights plus an optional
/// analytic tail family that extends the distribution function and the tail
/// ratios beyond the table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StepLaw {
    weights: Vec<f64>,
    tail: Tail,
}

const MASS_TOLERANCE: f64 = 1e-12;

/// `Σ_{m ≥ a} m^{-s}` by direct summation plus an Euler–Maclaurin remainder.
/// Accurate to full double precision for `s ≥ 1.5`, `a ≥ 1`.
fn zeta_tail(s: f64, a: u64) -> f64 {
    const DIRECT_TERMS: u64 = 64;
    let mut sum = 0.0;
    for m in a..a + DIRECT_TERMS {
        sum += (m as f64).powf(-s);
    }
    let big_a = (a + DIRECT_TERMS) as f64;
    sum += big_a.powf(1.0 - s) / (s - 1.0);
    sum += 0.5 * big_a.powf(-s);
    sum += s / 12.0 * big_a.powf(-s - 1.0);
    sum -= s * (s + 1.0) * (s + 2.0) / 720.0 * big_a.powf(-s - 3.0);
    sum
}

impl StepLaw {
    /// A complete finitely supported law; weights are normalized.
    pub fn finite(weights: Vec<f64>) -> Result<Self, RecordsError> {
        if weights.is_empty() || weights.iter().any(|&w| w < 0.0 || !w.is_finite()) {
            return Err(RecordsError::InvalidLaw(
                "weights must be non-negative and non-empty".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(RecordsError::InvalidLaw("total mass is zero".into()));
        }
        let weights = weights.iter().map(|w| w / total).collect();
        Ok(StepLaw {
            weights,
            tail: Tail::Finite,
        })
    }

    /// A truncated view of an unknown law; the weights must sum to at most 1.
    pub fn truncated(weights: Vec<f64>) -> Result<Self, RecordsError> {
        if weights.iter().any(|&w| w < 0.0 || !w.is_finite()) {
            return Err(RecordsError::InvalidLaw("weights must be non-negative".into()));
        }
        let total: f64 = weights.iter().sum();
        if total > 1.0 + MASS_TOLERANCE {
            return Err(RecordsError::InvalidLaw(format!(
                "truncated weights sum to {total} > 1"
            )));
        }
        Ok(StepLaw {
            weights,
            tail: Tail::Unknown,
        })
    }

    /// `p_j = (j+1)^{-s} / ζ(s)`, tabulated up to `truncation`.
    pub fn power(s: f64, truncation: usize) -> Result<Self, RecordsError> {
        if !(s > 1.0) || !s.is_finite() {
            return Err(RecordsError::InvalidLaw(format!(
                "power exponent must exceed 1, got {s}"
            )));
        }
        let zeta = zeta_tail(s, 1);
        let weights = (0..=truncation)
            .map(|j| ((j + 1) as f64).powf(-s) / zeta)
            .collect();
        Ok(StepLaw {
            weights,
            tail: Tail::Power { s },
        })
    }

    /// `p_j = (1−q) q^j`, tabulated up to `truncation`.
    pub fn geometric(q: f64, truncation: usize) -> Result<Self, RecordsError> {
        if !(0.0 < q && q < 1.0) {
            return Err(RecordsError::InvalidLaw(format!(
                "geometric parameter must lie in (0,1), got {q}"
            )));
        }
        let weights = (0..=truncation).map(|j| (1.0 - q) * q.powi(j as i32)).collect();
        Ok(StepLaw {
            weights,
            tail: Tail::Geometric { q },
        })
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    pub fn table_len(&self) -> usize {
        self.weights.len()
    }

    pub fn has_analytic_tail(&self) -> bool {
        matches!(self.tail, Tail::Power { .. } | Tail::Geometric { .. })
    }

    /// `p_j`, defined for every `j` when the tail is analytic.
    pub fn weight(&self, j: u64) -> f64 {
        if (j as usize) < self.weights.len() {
            return self.weights[j as usize];
        }
        match self.tail {
            Tail::Finite | Tail::Unknown => 0.0,
            Tail::Power { s } => ((j + 1) as f64).powf(-s) / zeta_tail(s, 1),
            Tail::Geometric { q } => (1.0 - q) * q.powi(j as i32),
        }
    }

    /// `Σ_{i ≥ j} p_i`. For `Tail::Unknown` this includes the unknown
    /// remainder `1 − Σ table`, i.e. it assumes the law is genuinely a law.
    pub fn tail_mass(&self, j: u64) -> f64 {
        match self.tail {
            Tail::Power { s } => zeta_tail(s, j + 1) / zeta_tail(s, 1),
            Tail::Geometric { q } => q.powi(j as i32),
            Tail::Finite | Tail::Unknown => {
                let table: f64 = self
                    .weights
                    .iter()
                    .skip(j as usize)
                    .sum();
                match self.tail {
                    Tail::Unknown => {
                        let total: f64 = self.weights.iter().sum();
                        table + (1.0 - total)
                    }
                    _ => table,
                }
            }
        }
    }

    /// Distribution function `F_j = p_0 + … + p_j`.
    pub fn cdf(&self, j: u64) -> f64 {
        1.0 - self.tail_mass(j + 1)
    }

    /// Tail ratio `ρ_j = p_j / (p_j + p_{j+1} + …)`.
    pub fn rho(&self, j: u64) -> Result<f64, RecordsError> {
        let tail = self.tail_mass(j);
        if tail <= 0.0 {
            return Err(RecordsError::ZeroTail { index: j });
        }
        Ok((self.weight(j) / tail).min(1.0))
    }

    /// Record-value chain transition probability, `i → j`.
    ///
    /// Computed as `p_j / tail(i)` for `i ≤ j` and cross-checked in tests
    /// against the product form `(1−ρ_i)…(1−ρ_{j−1}) ρ_j`.
    pub fn vervaat_transition(&self, i: u64, j: u64) -> Result<f64, RecordsError> {
        if i > j {
            return Ok(0.0);
        }
        let tail = self.tail_mass(i);
        if tail <= 0.0 {
            return Err(RecordsError::ZeroTail { index: i });
        }
        Ok(self.weight(j) / tail)
    }

    /// The same transition probability via the tail-ratio product; used as
    /// the independent second route.
    pub fn vervaat_transition_rho_form(&self, i: u64, j: u64) -> Result<f64, RecordsError> {
        if i > j {
            return Ok(0.0);
        }
        let mut product = 1.0;
        for k in i..j {
            product *= 1.0 - self.rho(k)?;
        }
        Ok(product * self.rho(j)?)
    }

    /// Decides eventual record simplicity: the law must be infinitely
    /// supported and `Σ ρ_j²` must converge. Analytic families are decided
    /// from the family; a bare truncation cannot witness convergence and
    /// comes back undecided.
    pub fn simplicity_criterion(&self) -> SimplicityReport {
        let partial: f64 = (0..self.weights.len() as u64)
            .map(|j| self.rho(j).map(|r| r * r).unwrap_or(0.0))
            .sum();
        let (verdict, reason) = match self.tail {
            Tail::Power { s } => (
                Simplicity::Holds,
                format!("rho_j ~ {:.3}/(j+1), sum of squares converges", s - 1.0),
            ),
            Tail::Geometric { q } => (
                Simplicity::Fails,
                format!("constant tail ratio rho = {}, sum of squares diverges", 1.0 - q),
            ),
            Tail::Finite => (
                Simplicity::Fails,
                "finitely supported law".to_string(),
            ),
            Tail::Unknown => (
                Simplicity::Undecided,
                "truncated table; tail behaviour unknown".to_string(),
            ),
        };
        SimplicityReport {
            verdict,
            rho_square_partial_sum: partial,
            reason,
        }
    }

    /// Inverse-CDF sampler with a precomputed cumulative table.
    pub fn sampler(&self) -> LawSampler {
        let mut cum = Vec::with_capacity(self.weights.len());
        let mut acc = 0.0;
        for &w in &self.weights {
            acc += w;
            cum.push(acc);
        }
        LawSampler {
            law: self.clone(),
            cum,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Simplicity {
    Holds,
    Fails,
    Undecided,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimplicityReport {
    pub verdict: Simplicity,
    /// `Σ ρ_j²` over the tabulated range, as a diagnostic.
    pub rho_square_partial_sum: f64,
    pub reason: String,
}

/// Draws from a [`StepLaw`] by inverse CDF: binary search in the tabulated
/// cumulative weights, galloping on the closed-form distribution function
/// past the table for analytic tails.
#[derive(Debug, Clone)]
pub struct LawSampler {
    law: StepLaw,
    cum: Vec<f64>,
}

impl LawSampler {
    pub fn law(&self) -> &StepLaw {
        &self.law
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let u: f64 = rng.gen();
        // First j with cum[j] > u.
        match self
            .cum
            .binary_search_by(|c| c.partial_cmp(&u).expect("cdf values are finite"))
        {
            Ok(idx) => idx as u64 + 1, // exact hit: strict inequality fails at idx
            Err(idx) if idx < self.cum.len() => idx as u64,
            Err(_) => self.sample_past_table(u),
        }
    }

    fn sample_past_table(&self, u: f64) -> u64 {
        let start = self.cum.len() as u64;
        if !self.law.has_analytic_tail() {
            return start.saturating_sub(1); // complete table: numerical slack only
        }
        // Gallop for an upper bracket, then bisect on F.
        let mut lo = start;
        let mut hi = start.max(1) * 2;
        while self.law.cdf(hi) < u {
            lo = hi + 1;
            hi *= 2;
        }
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.law.cdf(mid) < u {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_tail_matches_direct_sum() {
        // Differences of tails are finite sums, so they make an exact oracle
        // (a direct reference sum would itself carry truncation error).
        for (s, a) in [(3.0, 1u64), (3.0, 17), (2.2, 5), (6.0, 1)] {
            let span = 10_000u64;
            let direct: f64 = (a..a + span).map(|m| (m as f64).powf(-s)).sum();
            let via_tails = zeta_tail(s, a) - zeta_tail(s, a + span);
            assert!(
                (direct - via_tails).abs() < 1e-12,
                "s={s} a={a}: {direct} vs {via_tails}"
            );
        }
    }

    #[test]
    fn geometric_rho_is_constant() {
        let law = StepLaw::geometric(0.5, 40).unwrap();
        for j in 0..60 {
            assert!((law.rho(j).unwrap() - 0.5).abs() < 1e-12);
        }
        // p_j = 2^{-(j+1)}
        assert!((law.weight(3) - 1.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_law_rho_zero_is_one() {
        let law = StepLaw::finite(vec![1.0]).unwrap();
        assert!((law.rho(0).unwrap() - 1.0).abs() < 1e-15);
        assert!(law.rho(1).is_err());
    }

    #[test]
    fn power_rho_asymptotics() {
        // For p_j ∝ (j+1)^{-3}, ρ_j ≈ 2/(j+1) for large j. Oracle: numeric
        // tail summation is built into tail_mass, so compare against the
        // asymptotic form at a loose tolerance.
        let law = StepLaw::power(3.0, 64).unwrap();
        for j in [50u64, 200, 1000] {
            let rho = law.rho(j).unwrap();
            let asymptotic = 2.0 / (j as f64 + 1.0);
            assert!(
                (rho / asymptotic - 1.0).abs() < 0.05,
                "j={j}: {rho} vs {asymptotic}"
            );
        }
    }

    #[test]
    fn law_mass_sums_to_one() {
        for law in [
            StepLaw::power(3.0, 64).unwrap(),
            StepLaw::geometric(0.5, 64).unwrap(),
            StepLaw::finite(vec![0.5, 0.5]).unwrap(),
        ] {
            assert!((law.tail_mass(0) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn simplicity_verdicts() {
        assert_eq!(
            StepLaw::power(3.0, 64).unwrap().simplicity_criterion().verdict,
            Simplicity::Holds
        );
        assert_eq!(
            StepLaw::geometric(0.5, 64)
                .unwrap()
                .simplicity_criterion()
                .verdict,
            Simplicity::Fails
        );
        assert_eq!(
            StepLaw::finite(vec![0.5, 0.5])
                .unwrap()
                .simplicity_criterion()
                .verdict,
            Simplicity::Fails
        );
        assert_eq!(
            StepLaw::truncated(vec![0.25, 0.25])
                .unwrap()
                .simplicity_criterion()
                .verdict,
            Simplicity::Undecided
        );
    }

    #[test]
    fn vervaat_examples() {
        let law = StepLaw::geometric(0.5, 64).unwrap();
        // diagonal entry is rho
        assert!((law.vervaat_transition(3, 3).unwrap() - 0.5).abs() < 1e-12);
        // below the diagonal: zero
        assert_eq!(law.vervaat_transition(2, 1).unwrap(), 0.0);
        // 0 -> 2 for geometric(1/2): (1/2)^3
        assert!((law.vervaat_transition(0, 2).unwrap() - 0.125).abs() < 1e-12);
    }

    #[test]
    fn vervaat_two_routes_agree() {
        let law = StepLaw::power(3.0, 64).unwrap();
        for i in 0..30u64 {
            for j in 0..40u64 {
                let direct = law.vervaat_transition(i, j).unwrap();
                let product = law.vervaat_transition_rho_form(i, j).unwrap();
                assert!(
                    (direct - product).abs() < 1e-12,
                    "({i},{j}): {direct} vs {product}"
                );
            }
        }
    }

    #[test]
    fn vervaat_rows_sum_to_one_with_tail_remainder() {
        // Row i summed to J plus the closed-form remainder tail(J+1)/tail(i).
        for law in [
            StepLaw::power(3.0, 64).unwrap(),
            StepLaw::geometric(0.3, 64).unwrap(),
        ] {
            for i in 0..25u64 {
                let big_j = 200u64;
                let mut sum = 0.0;
                for j in i..=big_j {
                    sum += law.vervaat_transition(i, j).unwrap();
                }
                sum += law.tail_mass(big_j + 1) / law.tail_mass(i);
                assert!((sum - 1.0).abs() < 1e-12, "row {i} sums to {sum}");
            }
        }
    }

    #[test]
    fn sampler_matches_law_frequencies() {
        use rand::SeedableRng;
        let law = StepLaw::power(3.0, 8).unwrap(); // tiny table forces galloping
        let sampler = law.sampler();
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(42);
        let n = 200_000;
        let mut counts = std::collections::HashMap::new();
        for _ in 0..n {
            *counts.entry(sampler.sample(&mut rng)).or_insert(0u64) += 1;
        }
        for j in [0u64, 1, 5, 12, 30] {
            let p = law.weight(j);
            let emp = *counts.get(&j).unwrap_or(&0) as f64 / n as f64;
            let se = (p * (1.0 - p) / n as f64).sqrt();
            assert!(
                (emp - p).abs() < 4.0 * se + 1e-9,
                "j={j}: emp {emp} vs p {p}"
            );
        }
    }
}
