use num_complex::Complex64;

use super::{build_expansion, CycleExpansion, CycleWeightSpec, ZetaError};
use crate::billiard::OrbitRecord;

/// Direct trace sum of the weighted zeta function over all closed orbits
/// (primes and their repetitions) no longer than `l_max`:
///
/// `Σ_{p,r} s_p^r e^{−rλL_p} |Λ_p|^{r/2} / |det(1 − P_p^r)| · A_p`,
///
/// with `|det(1 − P^r)| = |Λ|^r (1 − Λ^{−r})²`. Only `spec.representation`
/// and `spec.maslov` are used; the band index is summed out.
pub fn partial_sum_zeta<F>(
    orbits: &[OrbitRecord],
    spec: CycleWeightSpec,
    lambda: Complex64,
    weight: F,
    l_max: f64,
) -> Complex64
where
    F: Fn(&OrbitRecord) -> f64,
{
    let mut total = Complex64::new(0.0, 0.0);
    for orbit in orbits {
        let a = weight(orbit);
        if a == 0.0 {
            continue;
        }
        let s = spec.twist(orbit);
        let log_abs = orbit.log_abs_lambda();
        let mut r = 1;
        while r as f64 * orbit.length <= l_max {
            let rf = r as f64;
            let sign = if r % 2 == 1 { s } else { 1.0 };
            let inv = orbit.lambda.powi(-r);
            let det = (1.0 - inv) * (1.0 - inv);
            total += sign * a / det * (-lambda * rf * orbit.length - 0.5 * rf * log_abs).exp();
            r += 1;
        }
    }
    total
}

/// `D(λ) = Π_{k ≤ kmax} (1/ζ_k(λ))^{k+1}` through its band expansions.
#[derive(Debug, Clone)]
pub struct SpectralDeterminant {
    bands: Vec<CycleExpansion>,
}

impl SpectralDeterminant {
    /// Expansions for bands `0..=kmax` sharing the representation and sign
    /// convention of `spec`.
    pub fn new(
        orbits: &[OrbitRecord],
        spec: CycleWeightSpec,
        order: usize,
        kmax: u32,
    ) -> Result<Self, ZetaError> {
        let bands = (0..=kmax)
            .map(|k| build_expansion(orbits, spec.with_band(k), order))
            .collect::<Result<_, _>>()?;
        Ok(Self { bands })
    }

    pub fn bands(&self) -> &[CycleExpansion] {
        &self.bands
    }

    /// `−∂_ε log D` at `ε = 0`; `weight` is looked up per prime.
    pub fn weighted_log_derivative<F>(
        &self,
        lambda: Complex64,
        weight: F,
    ) -> Result<Complex64, ZetaError>
    where
        F: Fn(&OrbitRecord) -> f64,
    {
        let mut total = Complex64::new(0.0, 0.0);
        for (k, band) in self.bands.iter().enumerate() {
            let weights = band.weights_from(|o| Some(weight(o)))?;
            let d_eps = band.weight_derivative(lambda, &weights)?;
            total -= (k + 1) as f64 * d_eps / band.eval(lambda).value;
        }
        Ok(total)
    }
}
