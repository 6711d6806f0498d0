use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::billiard::OrbitRecord;

/// One-dimensional representations of C3v used for the symmetry reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Representation {
    A1,
    A2,
}

impl Representation {
    /// Character of the group element of a prime cycle. Symbol `0` carries a
    /// mirror reflection, symbol `1` a rotation.
    pub fn character(self, n0: usize) -> f64 {
        match self {
            Representation::A1 => 1.0,
            Representation::A2 if n0 % 2 == 1 => -1.0,
            Representation::A2 => 1.0,
        }
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Representation::A1 => "A1",
            Representation::A2 => "A2",
        })
    }
}

impl FromStr for Representation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A1" | "a1" => Ok(Representation::A1),
            "A2" | "a2" => Ok(Representation::A2),
            other => Err(format!(
                "unknown representation {other:?}, expected A1 or A2"
            )),
        }
    }
}

/// Selects the cycle weight
/// `t_p(λ) = s_p · e^{−λ L_p} · |Λ_p|^{−1/2} · Λ_p^{−k}`,
/// where `s_p` collects the reflection-bundle sign `(−1)^{n_p}` (when
/// `maslov` is on) and the representation character.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CycleWeightSpec {
    pub representation: Representation,
    pub maslov: bool,
    pub band: u32,
}

impl CycleWeightSpec {
    pub fn new(representation: Representation, maslov: bool, band: u32) -> Self {
        Self {
            representation,
            maslov,
            band,
        }
    }

    pub fn with_band(self, band: u32) -> Self {
        Self { band, ..self }
    }

    /// `s_p`, the sign that does not depend on the band.
    pub fn twist(&self, orbit: &OrbitRecord) -> f64 {
        let maslov = if self.maslov && orbit.n_reflections % 2 == 1 {
            -1.0
        } else {
            1.0
        };
        maslov * self.representation.character(orbit.n0)
    }

    /// Sign of `t_p` including `sign(Λ_p)^k`.
    pub fn sign(&self, orbit: &OrbitRecord) -> f64 {
        let lambda_sign = if orbit.lambda < 0.0 && self.band % 2 == 1 {
            -1.0
        } else {
            1.0
        };
        self.twist(orbit) * lambda_sign
    }

    /// `log(|Λ_p|^{−1/2−k})`.
    pub fn log_amplitude(&self, orbit: &OrbitRecord) -> f64 {
        -(0.5 + self.band as f64) * orbit.log_abs_lambda()
    }

    pub fn weight(&self, orbit: &OrbitRecord, lambda: Complex64) -> Complex64 {
        self.sign(orbit) * (-lambda * orbit.length + self.log_amplitude(orbit)).exp()
    }
}

impl Default for CycleWeightSpec {
    fn default() -> Self {
        Self::new(Representation::A2, true, 0)
    }
}
