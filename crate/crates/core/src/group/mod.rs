//! Concrete group models with canonical element forms.
//!
//! Three families are supported, all of them ICC:
//! free groups of rank ≥ 2, lamplighter groups `Z_m ≀ Z` with `m ≥ 2`, and
//! free products of at least two finite cyclic groups other than `Z_2 ∗ Z_2`.
//! Elements are immutable canonical forms: equal elements compare and hash
//! equal, so hash sets of elements implement subset membership directly.

mod free;
mod free_product;
mod lamplighter;
mod metric;
mod parse;

use std::fmt;

use num_bigint::BigUint;
use thiserror::Error;

pub use free::FreeWord;
pub use free_product::ProductWord;
pub use lamplighter::LampConfig;
pub use metric::{ball, bounded_length, Ball, GeneratingSet, Length, DEFAULT_BALL_BUDGET};
pub use parse::parse_element;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("element does not belong to model {model}")]
    ModelMismatch { model: String },
    #[error("ball enumeration exceeded budget of {budget} elements (radius {radius})")]
    BallCapacity { budget: usize, radius: u64 },
    #[error("integer overflow in element arithmetic")]
    Overflow,
}

/// A concrete countable group in which all computations take place.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum GroupModel {
    /// Free group of the given rank with basis `a, b, c, …`.
    Free { rank: usize },
    /// Wreath product `Z_m ≀ Z`: finitely many lamps over the integer line.
    Lamplighter { modulus: u32 },
    /// Free product of finite cyclic groups of the given orders.
    FreeProduct { orders: Vec<u32> },
}

impl GroupModel {
    pub fn free(rank: usize) -> Result<Self, GroupError> {
        if rank < 2 {
            return Err(GroupError::InvalidModel(format!(
                "free group must have rank >= 2, got {rank}"
            )));
        }
        if rank > 26 {
            return Err(GroupError::InvalidModel(format!(
                "free group rank is capped at 26 by the letter syntax, got {rank}"
            )));
        }
        Ok(GroupModel::Free { rank })
    }

    pub fn lamplighter(modulus: u32) -> Result<Self, GroupError> {
        if modulus < 2 {
            return Err(GroupError::InvalidModel(format!(
                "lamplighter modulus must be >= 2, got {modulus}"
            )));
        }
        Ok(GroupModel::Lamplighter { modulus })
    }

    /// Free product of finite cyclic groups. `Z_2 ∗ Z_2` is rejected: it is
    /// the infinite dihedral group, whose conjugacy classes of translations
    /// are finite, so it is not ICC.
    pub fn free_product(orders: Vec<u32>) -> Result<Self, GroupError> {
        if orders.len() < 2 {
            return Err(GroupError::InvalidModel(
                "free product needs at least two factors".into(),
            ));
        }
        if orders.iter().any(|&o| o < 2) {
            return Err(GroupError::InvalidModel(
                "free product factor orders must be >= 2".into(),
            ));
        }
        if orders == [2, 2] {
            return Err(GroupError::InvalidModel(
                "Z_2 * Z_2 is virtually abelian, not ICC".into(),
            ));
        }
        if orders.len() > 6 {
            return Err(GroupError::InvalidModel(
                "free products with more than 6 factors are not supported by the text syntax"
                    .into(),
            ));
        }
        Ok(GroupModel::FreeProduct { orders })
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            GroupModel::Free { .. } => GroupElement::Free(FreeWord::identity()),
            GroupModel::Lamplighter { .. } => GroupElement::Lamplighter(LampConfig::identity()),
            GroupModel::FreeProduct { .. } => GroupElement::FreeProduct(ProductWord::identity()),
        }
    }

    pub fn is_identity(&self, g: &GroupElement) -> bool {
        *g == self.identity()
    }

    fn check_element(&self, g: &GroupElement) -> Result<(), GroupError> {
        let ok = match (self, g) {
            (GroupModel::Free { rank }, GroupElement::Free(w)) => w.max_generator() <= *rank,
            (GroupModel::Lamplighter { modulus }, GroupElement::Lamplighter(c)) => {
                c.values_below(*modulus)
            }
            (GroupModel::FreeProduct { orders }, GroupElement::FreeProduct(w)) => {
                w.valid_for(orders)
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(GroupError::ModelMismatch {
                model: self.to_string(),
            })
        }
    }

    /// Canonical product `g · h`.
    pub fn multiply(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check_element(g)?;
        self.check_element(h)?;
        Ok(match (g, h) {
            (GroupElement::Free(x), GroupElement::Free(y)) => GroupElement::Free(x.multiply(y)),
            (GroupElement::Lamplighter(x), GroupElement::Lamplighter(y)) => {
                let m = match self {
                    GroupModel::Lamplighter { modulus } => *modulus,
                    _ => unreachable!(),
                };
                GroupElement::Lamplighter(x.multiply(y, m))
            }
            (GroupElement::FreeProduct(x), GroupElement::FreeProduct(y)) => {
                let orders = match self {
                    GroupModel::FreeProduct { orders } => orders,
                    _ => unreachable!(),
                };
                GroupElement::FreeProduct(x.multiply(y, orders))
            }
            _ => unreachable!("check_element rules out mixed variants"),
        })
    }

    /// In-place right multiplication `acc ← acc · h`, the streaming form the
    /// walk simulator uses to extend positions without re-copying them.
    pub fn multiply_in_place(
        &self,
        acc: &mut GroupElement,
        h: &GroupElement,
    ) -> Result<(), GroupError> {
        self.check_element(acc)?;
        self.check_element(h)?;
        match (acc, h) {
            (GroupElement::Free(x), GroupElement::Free(y)) => x.append(y),
            (GroupElement::Lamplighter(x), GroupElement::Lamplighter(y)) => {
                let m = match self {
                    GroupModel::Lamplighter { modulus } => *modulus,
                    _ => unreachable!(),
                };
                x.append(y, m);
            }
            (GroupElement::FreeProduct(x), GroupElement::FreeProduct(y)) => {
                let orders = match self {
                    GroupModel::FreeProduct { orders } => orders,
                    _ => unreachable!(),
                };
                x.append(y, orders);
            }
            _ => unreachable!("check_element rules out mixed variants"),
        }
        Ok(())
    }

    pub fn inverse(&self, g: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check_element(g)?;
        Ok(match g {
            GroupElement::Free(w) => GroupElement::Free(w.inverse()),
            GroupElement::Lamplighter(c) => {
                let m = match self {
                    GroupModel::Lamplighter { modulus } => *modulus,
                    _ => unreachable!(),
                };
                GroupElement::Lamplighter(c.inverse(m))
            }
            GroupElement::FreeProduct(w) => {
                let orders = match self {
                    GroupModel::FreeProduct { orders } => orders,
                    _ => unreachable!(),
                };
                GroupElement::FreeProduct(w.inverse(orders))
            }
        })
    }

    /// Word length with respect to the standard generating set of the model
    /// (free basis; `t` and one lamp; one generator per cyclic factor).
    /// Computed by closed formula, exact for arbitrarily long elements.
    pub fn standard_length(&self, g: &GroupElement) -> Result<BigUint, GroupError> {
        self.check_element(g)?;
        Ok(match g {
            GroupElement::Free(w) => w.standard_length(),
            GroupElement::Lamplighter(c) => {
                let m = match self {
                    GroupModel::Lamplighter { modulus } => *modulus,
                    _ => unreachable!(),
                };
                c.standard_length(m)
            }
            GroupElement::FreeProduct(w) => {
                let orders = match self {
                    GroupModel::FreeProduct { orders } => orders,
                    _ => unreachable!(),
                };
                w.standard_length(orders)
            }
        })
    }

    /// The standard symmetric generating set of the model.
    pub fn standard_generators(&self) -> Vec<GroupElement> {
        match self {
            GroupModel::Free { rank } => {
                let mut gens = Vec::new();
                for g in 0..*rank {
                    gens.push(GroupElement::Free(FreeWord::generator(g, 1)));
                    gens.push(GroupElement::Free(FreeWord::generator(g, -1)));
                }
                gens
            }
            GroupModel::Lamplighter { modulus } => {
                let mut gens = vec![
                    GroupElement::Lamplighter(LampConfig::shift(1)),
                    GroupElement::Lamplighter(LampConfig::shift(-1)),
                    GroupElement::Lamplighter(LampConfig::lamp(0, 1)),
                ];
                if *modulus > 2 {
                    gens.push(GroupElement::Lamplighter(LampConfig::lamp(0, modulus - 1)));
                }
                gens
            }
            GroupModel::FreeProduct { orders } => {
                let mut gens = Vec::new();
                for (f, &o) in orders.iter().enumerate() {
                    gens.push(GroupElement::FreeProduct(ProductWord::generator(f, 1)));
                    if o > 2 {
                        gens.push(GroupElement::FreeProduct(ProductWord::generator(f, o - 1)));
                    }
                }
                gens
            }
        }
    }

    pub fn parse(&self, text: &str) -> Result<GroupElement, GroupError> {
        parse_element(self, text)
    }

    pub fn display(&self, g: &GroupElement) -> String {
        g.to_string()
    }
}

impl fmt::Display for GroupModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupModel::Free { rank } => write!(f, "free({rank})"),
            GroupModel::Lamplighter { modulus } => write!(f, "lamplighter({modulus})"),
            GroupModel::FreeProduct { orders } => {
                let parts: Vec<String> = orders.iter().map(|o| format!("Z{o}")).collect();
                write!(f, "{}", parts.join("*"))
            }
        }
    }
}

/// Canonical form of a group element. The variant must match the model; all
/// operations go through [`GroupModel`], which knows the parameters
/// (lamp modulus, factor orders) that the canonical forms do not carry.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Free(FreeWord),
    Lamplighter(LampConfig),
    FreeProduct(ProductWord),
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Free(w) => w.fmt(f),
            GroupElement::Lamplighter(c) => c.fmt(f),
            GroupElement::FreeProduct(w) => w.fmt(f),
        }
    }
}

#[cfg(test)]
mod tests;
