use serde::{Deserialize, Serialize};

use super::section::SectionPoint;
use super::{PeriodicOrbit, Word};

/// The per-prime data the zeta machinery needs, as persisted in the orbit
/// database.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub word: Word,
    #[serde(rename = "L")]
    pub length: f64,
    /// Signed expanding eigenvalue of the monodromy.
    pub lambda: f64,
    pub n_reflections: usize,
    pub n0: usize,
    pub n1: usize,
    pub residual: f64,
    pub section: Vec<SectionPoint>,
}

impl OrbitRecord {
    pub fn stability_ratio(&self) -> f64 {
        self.lambda.abs().ln() / self.length
    }

    pub fn log_abs_lambda(&self) -> f64 {
        self.lambda.abs().ln()
    }
}

impl From<&PeriodicOrbit> for OrbitRecord {
    fn from(o: &PeriodicOrbit) -> Self {
        Self {
            word: o.word.clone(),
            length: o.length,
            lambda: o.stability,
            n_reflections: o.n_reflections(),
            n0: o.word.n0(),
            n1: o.word.n1(),
            residual: o.residual,
            section: o.section.clone(),
        }
    }
}
