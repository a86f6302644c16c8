//! Budget models for single-photon boson sampling hardware.
//!
//! The crate answers one recurring engineering question: how lossy may each
//! component of a photonic sampling machine be before the experiment stops
//! producing enough valid samples per day to rule out efficient classical
//! simulation. It is organised in four layers:
//!
//! - [`lossmodel`]: decibel/efficiency algebra, lost-photon sampling
//!   probabilities, the classical-simulability bound, and effective
//!   post-selection efficiencies.
//! - [`architectures`]: optical depth, input rate and loss models for
//!   Clements, Rectangular and hybrid interferometers in spatial and
//!   time-bin encodings, including the time-bin column programs.
//! - [`solver`]: tolerated-loss surfaces, MZI insertion-loss frontiers and
//!   source-efficiency requirement curves built from the two layers above.
//! - [`oracle`]: brute-force ground truth (permanents, exhaustive Fock
//!   enumeration, mesh expansion) validating the closed forms at small scale.

pub mod architectures;
pub mod binom;
pub mod lossmodel;
pub mod oracle;
pub mod solver;

pub use lossmodel::{Efficiency, ExperimentConfig, LossDb, PhotonCounts};

use thiserror::Error;

/// Errors shared across the budget models.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An efficiency of exactly zero has no finite decibel representation.
    #[error("efficiency 0 corresponds to infinite loss")]
    InfiniteLoss,
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("infeasible configuration: {0}")]
    Infeasible(String),
    /// The classical-simulation error bound diverges (perfect
    /// indistinguishability with no photon loss).
    #[error("classical simulation error bound diverges (x2 = 1 with no loss)")]
    DivergentBound,
    #[error("exhaustive regime exceeded: {0}")]
    RegimeExceeded(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
