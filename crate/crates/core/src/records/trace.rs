//! Exact weak-record analysis of a finite integer sequence.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::RecordsError;

/// Record structure of a sequence: weak record times (1-based), the
/// associated record values, running-maximum multiplicities, and occupation
/// counts per value.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecordTrace {
    /// Weak record times `T_k`, 1-based; `T_1 = 1` always.
    pub times: Vec<usize>,
    /// Record values `R_k = X_{T_k}`, non-decreasing.
    pub values: Vec<u64>,
    /// `K_n = #{ i ≤ n : X_i = M_n }` for every step `n` (index 0 = time 1).
    pub multiplicities: Vec<u32>,
    /// `Z_j`: number of record epochs with value `j`, over visited values.
    pub occupation: BTreeMap<u64, u32>,
}

impl RecordTrace {
    /// A record value is simple when it is occupied exactly once.
    pub fn is_simple_value(&self, value: u64) -> bool {
        self.occupation.get(&value).copied() == Some(1)
    }

    /// Simplicity of the k-th record epoch.
    pub fn is_simple_epoch(&self, k: usize) -> bool {
        self.is_simple_value(self.values[k])
    }

    /// Distinct record values in the order they were first attained.
    pub fn distinct_values(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for &v in &self.values {
            if out.last() != Some(&v) {
                out.push(v);
            }
        }
        out
    }

    /// Number of record epochs.
    pub fn epochs(&self) -> usize {
        self.times.len()
    }
}

/// Computes the weak-record structure of `xs`: `T_1 = 1` and
/// `T_{k+1} = min{ n > T_k : X_n ≥ X_{T_k} }`.
pub fn analyze_records(xs: &[u64]) -> Result<RecordTrace, RecordsError> {
    if xs.is_empty() {
        return Err(RecordsError::EmptySequence);
    }
    let mut times = Vec::new();
    let mut values = Vec::new();
    let mut multiplicities = Vec::with_capacity(xs.len());
    let mut occupation = BTreeMap::new();

    let mut max = xs[0];
    let mut multiplicity = 0u32;
    for (i, &x) in xs.iter().enumerate() {
        if x > max {
            max = x;
            multiplicity = 1;
        } else if x == max {
            multiplicity += 1;
        }
        if x >= max {
            // weak record epoch (x == max after the update above)
            times.push(i + 1);
            values.push(x);
            *occupation.entry(x).or_insert(0) += 1;
        }
        multiplicities.push(multiplicity);
    }

    Ok(RecordTrace {
        times,
        values,
        multiplicities,
        occupation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn constant_sequence_records_everywhere() {
        let t = analyze_records(&[0, 0, 0]).unwrap();
        assert_eq!(t.times, vec![1, 2, 3]);
        assert_eq!(t.values, vec![0, 0, 0]);
        assert_eq!(t.occupation.get(&0), Some(&3));
    }

    #[test]
    fn hand_traced_example() {
        let t = analyze_records(&[1, 0, 2, 2, 3]).unwrap();
        assert_eq!(t.times, vec![1, 3, 4, 5]);
        assert_eq!(t.values, vec![1, 2, 2, 3]);
        assert!(!t.is_simple_value(2));
        assert!(t.is_simple_value(1));
        assert!(t.is_simple_value(3));
        assert_eq!(t.multiplicities, vec![1, 1, 1, 2, 1]);
    }

    #[test]
    fn strictly_increasing_all_simple() {
        let xs: Vec<u64> = (0..50).collect();
        let t = analyze_records(&xs).unwrap();
        assert_eq!(t.times.len(), 50);
        assert!(t.values.iter().all(|&v| t.is_simple_value(v)));
    }

    #[test]
    fn empty_sequence_is_an_error() {
        assert!(analyze_records(&[]).is_err());
    }

    #[test]
    fn multiplicity_matches_quadratic_recount() {
        // K_n recomputed naively as #{ i ≤ n : X_i = max(X_1..X_n) }.
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..1_000 {
            let len = rng.gen_range(1..40);
            let xs: Vec<u64> = (0..len).map(|_| rng.gen_range(0..6)).collect();
            let t = analyze_records(&xs).unwrap();
            for n in 1..=len {
                let m = *xs[..n].iter().max().unwrap();
                let k = xs[..n].iter().filter(|&&x| x == m).count() as u32;
                assert_eq!(t.multiplicities[n - 1], k, "xs={xs:?} n={n}");
            }
            // record times satisfy the defining recursion
            assert_eq!(t.times[0], 1);
            for w in t.times.windows(2) {
                let (prev, next) = (w[0], w[1]);
                let threshold = xs[prev - 1];
                let expected = (prev..len)
                    .find(|&n| xs[n] >= threshold)
                    .map(|n| n + 1)
                    .unwrap();
                assert_eq!(next, expected);
            }
            // occupation sums to the number of epochs
            let total: u32 = t.occupation.values().sum();
            assert_eq!(total as usize, t.epochs());
        }
    }
}
