//! Cycle expansions of the band-`k` zeta determinants, their zeros
//! (Ruelle resonances) and the residues of the weighted zeta function.

mod expansion;
mod partial_sum;
mod residue;
mod roots;
mod weights;

use thiserror::Error;

pub use expansion::{build_expansion, CycleExpansion, Evaluation, PrimeCycle, PseudoCycle};
pub use partial_sum::{partial_sum_zeta, SpectralDeterminant};
pub use residue::{residue, residue_coefficients};
pub use roots::{convert, find_resonances, refine_zero, KRegion, Resonance, SearchOptions};
pub use weights::{CycleWeightSpec, Representation};

use crate::billiard::HyperbolicityStats;

#[derive(Debug, Error)]
pub enum ZetaError {
    #[error("orbit set is missing {} prime word(s) up to the truncation order, first {first}", missing.len())]
    MissingOrbits { first: String, missing: Vec<String> },
    #[error("no weight given for prime {prime}")]
    MissingWeight { prime: String },
    #[error("zero is not simple: |dD/dλ| = {derivative:e}")]
    NonSimpleZero { derivative: f64 },
    #[error("invalid search region: {0}")]
    InvalidRegion(String),
}

/// Real part of λ above which the higher bands contribute holomorphically, so
/// band-0 zeros are the resonances there: `h_top − 3/2·β_min`.
pub fn band0_validity(stats: &HyperbolicityStats) -> f64 {
    band0_threshold(stats.h_top, stats.beta_min)
}

pub fn band0_threshold(h_top: f64, beta_min: f64) -> f64 {
    h_top - 1.5 * beta_min
}
