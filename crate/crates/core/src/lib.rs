//! Rooted forests on finitely generated groups, and random walks whose sample
//! paths climb to the boundaries of those forests.
//!
//! The crate is organized around a pipeline:
//!
//! 1. [`group`] — concrete group models (free groups, lamplighters, free
//!    products of finite cyclic groups) with canonical forms, word metrics and
//!    ball enumeration;
//! 2. [`switch`] — decision procedures and search for switching and
//!    superswitching elements;
//! 3. [`ladder`] — scales (gauge + spiking + filling data), spike
//!    decompositions, ladder validation and construction;
//! 4. [`forest`] — despiking forests on finite balls, constrained subforests,
//!    Markov ray generation and DOT/JSON export;
//! 5. [`records`] — weak-record statistics of i.i.d. sequences on the
//!    non-negative integers (record chain, occupation times, envelopes);
//! 6. [`walk`] — step distributions adapted to a scale, reproducible path
//!    simulation, and per-path verification of the spike/record structure,
//!    trunk property, constrained convergence and stabilizer freeness;
//! 7. [`experiment`] — config-driven experiment runner behind the CLI.

pub mod experiment;
pub mod forest;
pub mod group;
pub mod ladder;
pub mod preset;
pub mod records;
pub mod switch;
pub mod walk;

pub use group::{GeneratingSet, GroupElement, GroupError, GroupModel};
pub use ladder::{Classification, Scale, SpikeDecomposition};

