//! Alternating normal form in a free product of finite cyclic groups.
//!
//! A word is a sequence of syllables `(factor, exponent)` with exponents in
//! `1..order(factor)` and distinct adjacent factors. Merging adjacent
//! syllables of the same factor modulo its order is the only relation.

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

const FACTOR_LETTERS: [char; 6] = ['x', 'y', 'z', 'w', 'v', 'u'];

pub(crate) fn factor_letter(factor: usize) -> Option<char> {
    FACTOR_LETTERS.get(factor).copied()
}

pub(crate) fn letter_factor(letter: char) -> Option<usize> {
    FACTOR_LETTERS.iter().position(|&c| c == letter)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ProductWord {
    /// (factor index, exponent in `1..order`)
    syllables: Vec<(usize, u32)>,
}

impl ProductWord {
    pub fn identity() -> Self {
        ProductWord::default()
    }

    pub fn generator(factor: usize, exponent: u32) -> Self {
        if exponent == 0 {
            return ProductWord::identity();
        }
        ProductWord {
            syllables: vec![(factor, exponent)],
        }
    }

    pub fn from_syllables(
        syllables: impl IntoIterator<Item = (usize, u32)>,
        orders: &[u32],
    ) -> Self {
        let mut word = ProductWord::identity();
        for (factor, exponent) in syllables {
            word.push_syllable(factor, exponent, orders);
        }
        word
    }

    pub fn syllables(&self) -> &[(usize, u32)] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    pub(crate) fn valid_for(&self, orders: &[u32]) -> bool {
        self.syllables
            .iter()
            .all(|&(f, e)| f < orders.len() && e > 0 && e < orders[f])
    }

    fn push_syllable(&mut self, factor: usize, exponent: u32, orders: &[u32]) {
        let order = orders[factor];
        let exponent = exponent % order;
        if exponent == 0 {
            return;
        }
        if let Some(last) = self.syllables.last_mut() {
            if last.0 == factor {
                last.1 = (last.1 + exponent) % order;
                if last.1 == 0 {
                    self.syllables.pop();
                }
                return;
            }
        }
        self.syllables.push((factor, exponent));
    }

    pub fn multiply(&self, other: &ProductWord, orders: &[u32]) -> ProductWord {
        let mut result = self.clone();
        result.append(other, orders);
        result
    }

    /// In-place right multiplication.
    pub fn append(&mut self, other: &ProductWord, orders: &[u32]) {
        for &(factor, exponent) in &other.syllables {
            self.push_syllable(factor, exponent, orders);
        }
    }

    pub fn inverse(&self, orders: &[u32]) -> ProductWord {
        ProductWord {
            syllables: self
                .syllables
                .iter()
                .rev()
                .map(|&(f, e)| (f, orders[f] - e))
                .collect(),
        }
    }

    /// Word length in the per-factor generators: each syllable `x^e` costs
    /// `min(e, order - e)` steps.
    pub fn standard_length(&self, orders: &[u32]) -> BigUint {
        let mut total = BigUint::zero();
        for &(f, e) in &self.syllables {
            total += BigUint::from(e.min(orders[f] - e));
        }
        total
    }
}

impl fmt::Display for ProductWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return write!(f, "e");
        }
        let mut first = true;
        for &(factor, exponent) in &self.syllables {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            let letter = factor_letter(factor).unwrap_or('?');
            if exponent == 1 {
                write!(f, "{letter}")?;
            } else {
                write!(f, "{letter}^{exponent}")?;
            }
        }
        Ok(())
    }
}
