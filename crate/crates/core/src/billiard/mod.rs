//! Symmetric 3-disk geometry, symbolic words, periodic orbits and their
//! stabilities in the fundamental domain.

mod geometry;
mod orbit;
mod record;
mod section;
mod stats;
mod words;

use thiserror::Error;

pub use geometry::{DiskSystem, Symmetry};
pub use orbit::{birkhoff_coords, find_orbit, monodromy, solve_all, PeriodicOrbit, Unfolding};
pub use record::OrbitRecord;
pub use section::{birkhoff_point, wrap_angle, SectionMap, SectionPoint};
pub use stats::{hyperbolicity_stats, HyperbolicityStats};
pub use words::{enumerate_words, Word};

#[derive(Debug, Error)]
pub enum BilliardError {
    #[error("disks overlap: d/r = {d_over_r} must exceed 2")]
    NonPhysicalGeometry { d_over_r: f64 },
    #[error("invalid word {word:?}: {reason}")]
    InvalidWord { word: String, reason: &'static str },
    #[error("orbit {word} is inadmissible: flight {flight} is blocked or leaves through a disk")]
    InadmissibleOrbit { word: String, flight: usize },
    #[error("orbit {word} did not converge")]
    NoConvergence { word: String },
    #[error("orbit {word} is not hyperbolic (trace {trace})")]
    DegenerateMonodromy { word: String, trace: f64 },
    #[error("empty orbit set")]
    EmptyOrbitSet,
}
