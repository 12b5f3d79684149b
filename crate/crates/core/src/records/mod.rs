//! Weak-record statistics of i.i.d. sequences on the non-negative integers.
//!
//! A step law assigns probabilities to `0, 1, 2, …`. Records are weak: every
//! epoch whose value ties or exceeds the running maximum is a record epoch.
//! The record values form a Markov chain whose transition matrix is expressed
//! through the tail ratios `ρ_j = p_j / (p_j + p_{j+1} + …)`; the number of
//! record epochs spent at a value `j` is geometric with parameter `1 − ρ_j`,
//! and these occupation times are independent across `j`. Everything here is
//! either an exact computation with the law or a seeded Monte Carlo check of
//! those facts.

mod envelope;
mod law;
mod mc;
mod trace;

pub use envelope::{build_envelopes, build_envelopes_with_exponent, phi, quantile, EnvelopePair};
pub use law::{LawSampler, Simplicity, SimplicityReport, StepLaw, Tail};
pub use mc::{
    mixed_population_check, occupation_law_check, vervaat_chain_check, MixedPopulationReport,
    OccupationReport, OccupationRow, VervaatCheck,
};
pub use trace::{analyze_records, RecordTrace};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum RecordsError {
    #[error("invalid step law: {0}")]
    InvalidLaw(String),
    #[error("tail mass at {index} is zero; rho is undefined")]
    ZeroTail { index: u64 },
    #[error("law has no analytic tail; {0} needs one")]
    NoAnalyticTail(&'static str),
    #[error("envelope horizon {horizon} too small for requested record value {requested}")]
    Horizon { horizon: u64, requested: u64 },
    #[error("empty sequence")]
    EmptySequence,
}
