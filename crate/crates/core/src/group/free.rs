//! Reduced words in a free group, run-length encoded.
//!
//! A word is a sequence of syllables `(generator, exponent)` with non-zero
//! exponents and distinct adjacent generators. Exponents are big integers:
//! the spiking towers used by the walk presets involve generator powers far
//! beyond machine range, while the syllable count stays small.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syllable {
    pub generator: usize,
    pub exponent: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FreeWord {
    syllables: Vec<Syllable>,
}

impl FreeWord {
    pub fn identity() -> Self {
        FreeWord::default()
    }

    pub fn generator(generator: usize, exponent: impl Into<BigInt>) -> Self {
        let exponent = exponent.into();
        if exponent.is_zero() {
            return FreeWord::identity();
        }
        FreeWord {
            syllables: vec![Syllable {
                generator,
                exponent,
            }],
        }
    }

    /// Builds a word from raw syllables, merging and dropping as needed.
    pub fn from_syllables<I>(syllables: I) -> Self
    where
        I: IntoIterator<Item = (usize, BigInt)>,
    {
        let mut word = FreeWord::identity();
        for (generator, exponent) in syllables {
            word.push_syllable(generator, exponent);
        }
        word
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn max_generator(&self) -> usize {
        self.syllables
            .iter()
            .map(|s| s.generator + 1)
            .max()
            .unwrap_or(0)
    }

    /// Appends one syllable on the right, keeping the word reduced.
    fn push_syllable(&mut self, generator: usize, exponent: BigInt) {
        if exponent.is_zero() {
            return;
        }
        if let Some(last) = self.syllables.last_mut() {
            if last.generator == generator {
                last.exponent += exponent;
                if last.exponent.is_zero() {
                    self.syllables.pop();
                }
                return;
            }
        }
        self.syllables.push(Syllable {
            generator,
            exponent,
        });
    }

    pub fn multiply(&self, other: &FreeWord) -> FreeWord {
        let mut product = self.clone();
        product.append(other);
        product
    }

    /// In-place right multiplication. Cancellation only happens at the
    /// junction, so this is amortized O(cancelled + appended) — the walk
    /// simulators extend positions step by step through it.
    pub fn append(&mut self, other: &FreeWord) {
        let mut right_start = 0;
        while let (Some(last), Some(first)) =
            (self.syllables.last_mut(), other.syllables.get(right_start))
        {
            if last.generator != first.generator {
                break;
            }
            last.exponent += &first.exponent;
            right_start += 1;
            if last.exponent.is_zero() {
                self.syllables.pop();
            } else {
                break;
            }
        }
        self.syllables
            .extend_from_slice(&other.syllables[right_start..]);
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord {
            syllables: self
                .syllables
                .iter()
                .rev()
                .map(|s| Syllable {
                    generator: s.generator,
                    exponent: -&s.exponent,
                })
                .collect(),
        }
    }

    /// Word length in the free basis: the sum of absolute exponents.
    pub fn standard_length(&self) -> BigUint {
        let mut total = BigUint::zero();
        for s in &self.syllables {
            total += s.exponent.abs().to_biguint().expect("abs is non-negative");
        }
        total
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return write!(f, "e");
        }
        let mut first = true;
        for s in &self.syllables {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            let letter = (b'a' + (s.generator as u8)) as char;
            if s.exponent == BigInt::from(1) {
                write!(f, "{letter}")?;
            } else {
                write!(f, "{letter}^{}", s.exponent)?;
            }
        }
        Ok(())
    }
}
