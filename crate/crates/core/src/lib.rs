//! Ruelle resonances and invariant Ruelle distributions of the symmetric
//! 3-disk billiard, computed from periodic orbits through cycle expansions
//! of weighted zeta functions.
//!
//! The pipeline runs `billiard` (periodic orbits) → `zeta` (cycle expansions,
//! zeros and residues) → `ruelle_map` (Gaussian-smoothed distributions on the
//! bounce section), with `spectra_io` handling persistence and comparison
//! against externally computed quantum resonances.

pub mod billiard;
pub mod cli;
pub mod ruelle_map;
pub mod spectra_io;
pub mod zeta;
