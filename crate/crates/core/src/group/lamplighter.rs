//! Canonical forms in the lamplighter group `Z_m ≀ Z`.
//!
//! An element is a finitely supported lamp configuration over the integer
//! line together with a cursor position. The wreath product law
//! `(f, k) · (g, l) = (f + shift_k(g), k + l)` keeps configurations canonical
//! as long as zero lamps are dropped; the `BTreeMap` keeps the support sorted
//! so equal elements hash equal.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LampConfig {
    /// position -> lamp value in `1..m`; zero values are never stored.
    lamps: BTreeMap<BigInt, u32>,
    cursor: BigInt,
}

impl LampConfig {
    pub fn identity() -> Self {
        LampConfig::default()
    }

    pub fn shift(offset: impl Into<BigInt>) -> Self {
        LampConfig {
            lamps: BTreeMap::new(),
            cursor: offset.into(),
        }
    }

    pub fn lamp(position: impl Into<BigInt>, value: u32) -> Self {
        let mut lamps = BTreeMap::new();
        if value != 0 {
            lamps.insert(position.into(), value);
        }
        LampConfig {
            lamps,
            cursor: BigInt::zero(),
        }
    }

    /// Canonicalizes a raw (configuration, cursor) pair modulo `m`.
    pub fn from_parts(
        lamps: impl IntoIterator<Item = (BigInt, u32)>,
        cursor: BigInt,
        modulus: u32,
    ) -> Self {
        let mut canonical = BTreeMap::new();
        for (pos, value) in lamps {
            let v = value % modulus;
            if v != 0 {
                let slot = canonical.entry(pos).or_insert(0);
                *slot = (*slot + v) % modulus;
            }
        }
        canonical.retain(|_, v| *v != 0);
        LampConfig {
            lamps: canonical,
            cursor,
        }
    }

    pub fn lamps(&self) -> &BTreeMap<BigInt, u32> {
        &self.lamps
    }

    pub fn cursor(&self) -> &BigInt {
        &self.cursor
    }

    pub fn is_identity(&self) -> bool {
        self.lamps.is_empty() && self.cursor.is_zero()
    }

    pub(crate) fn values_below(&self, modulus: u32) -> bool {
        self.lamps.values().all(|&v| v > 0 && v < modulus)
    }

    pub fn multiply(&self, other: &LampConfig, modulus: u32) -> LampConfig {
        let mut product = self.clone();
        product.append(other, modulus);
        product
    }

    /// In-place right multiplication; touches only the lamps the other
    /// factor carries.
    pub fn append(&mut self, other: &LampConfig, modulus: u32) {
        for (pos, &value) in &other.lamps {
            let shifted = pos + &self.cursor;
            let slot = self.lamps.entry(shifted).or_insert(0);
            *slot = (*slot + value) % modulus;
            if *slot == 0 {
                let shifted = pos + &self.cursor;
                self.lamps.remove(&shifted);
            }
        }
        self.cursor += &other.cursor;
    }

    pub fn inverse(&self, modulus: u32) -> LampConfig {
        let mut lamps = BTreeMap::new();
        for (pos, &value) in &self.lamps {
            lamps.insert(pos - &self.cursor, modulus - value);
        }
        LampConfig {
            lamps,
            cursor: -&self.cursor,
        }
    }

    /// Exact word length with respect to the generators `t^{±1}` (cursor
    /// moves) and `lamp^{±1}` at the cursor. Lamp presses cost
    /// `min(v, m - v)` per lamp; travel is the shortest walk from 0 that
    /// covers the support and ends at the cursor.
    pub fn standard_length(&self, modulus: u32) -> BigUint {
        let mut presses = BigUint::zero();
        for &v in self.lamps.values() {
            presses += BigUint::from(v.min(modulus - v));
        }

        let zero = BigInt::zero();
        let mut lo = zero.clone().min(self.cursor.clone());
        let mut hi = zero.clone().max(self.cursor.clone());
        if let (Some(min), Some(max)) = (self.lamps.keys().next(), self.lamps.keys().next_back()) {
            lo = lo.min(min.clone());
            hi = hi.max(max.clone());
        }
        // Sweep right first or left first, whichever is shorter.
        let span = &hi - &lo;
        let right_first = (&hi - &self.cursor) + (&zero - &lo);
        let left_first = (&self.cursor - &lo) + (&hi - &zero);
        let travel = span + right_first.min(left_first);
        presses
            + travel
                .to_biguint()
                .expect("travel distance is non-negative")
    }
}

impl fmt::Display for LampConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "e");
        }
        let mut parts = Vec::new();
        if !self.cursor.is_zero() {
            if self.cursor == BigInt::from(1) {
                parts.push("t".to_string());
            } else {
                parts.push(format!("t^{}", self.cursor));
            }
        }
        for (pos, value) in &self.lamps {
            if *value == 1 {
                parts.push(format!("l{pos}"));
            } else {
                parts.push(format!("l{pos}^{value}"));
            }
        }
        write!(f, "{}", parts.join(" "))
    }
}
