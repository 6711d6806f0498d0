//! Hyperbolicity and pinching statistics of a prime-orbit set.

use super::{BilliardError, OrbitRecord};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicityStats {
    /// Entropy estimate `log(#{γ : L_γ < L}) / L`.
    pub h_top: f64,
    /// Smallest `log|Λ_p| / L_p` over the primes.
    pub beta_min: f64,
    /// Largest `log|Λ_p| / L_p` over the primes.
    pub beta_max: f64,
    pub ratio_mean: f64,
    /// Peak-to-peak spread of `log|Λ_p| / L_p` relative to its mean.
    pub ratio_spread: f64,
    /// Length up to which the closed-orbit count is complete.
    pub count_length: f64,
    /// Number of closed orbits (primes and repetitions) below `count_length`.
    pub orbit_count: usize,
    pub prime_count: usize,
}

/// Statistics over a complete set of primes up to some word length.
///
/// The count length is `(N + 1)·min_p(L_p / n_p)`: every flight joins two
/// distinct disks and is at least `d − 2r` long, a bound attained by the
/// cycle `0`, so no word longer than `N` is shorter than this.
pub fn hyperbolicity_stats(orbits: &[OrbitRecord]) -> Result<HyperbolicityStats, BilliardError> {
    if orbits.is_empty() {
        return Err(BilliardError::EmptyOrbitSet);
    }
    let max_len = orbits.iter().map(|o| o.n_reflections).max().unwrap_or(0);
    let min_step = orbits
        .iter()
        .map(|o| o.length / o.n_reflections as f64)
        .fold(f64::INFINITY, f64::min);
    let count_length = (max_len + 1) as f64 * min_step;
    let orbit_count: usize = orbits
        .iter()
        .map(|o| {
            // Repetitions r ≥ 1 with r·L_p < count_length.
            let mut r = 0;
            while (r + 1) as f64 * o.length < count_length {
                r += 1;
            }
            r
        })
        .sum();

    let ratios: Vec<f64> = orbits.iter().map(OrbitRecord::stability_ratio).collect();
    let beta_min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let beta_max = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ratio_mean = ratios.iter().sum::<f64>() / ratios.len() as f64;

    Ok(HyperbolicityStats {
        h_top: (orbit_count as f64).ln() / count_length,
        beta_min,
        beta_max,
        ratio_mean,
        ratio_spread: (beta_max - beta_min) / ratio_mean,
        count_length,
        orbit_count,
        prime_count: orbits.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::billiard::{find_orbit, DiskSystem};

    #[test]
    fn fundamental_cycles_at_six() {
        let sys = DiskSystem::new(6.0).unwrap();
        let orbits: Vec<OrbitRecord> = ["0", "1"]
            .iter()
            .map(|w| OrbitRecord::from(&find_orbit(&sys, &w.parse().unwrap()).unwrap()))
            .collect();
        let stats = hyperbolicity_stats(&orbits).unwrap();
        let r0 = (5.0 + 2.0 * 6f64.sqrt()).ln() / 4.0;
        let l1 = 6.0 - 3f64.sqrt();
        let trace1 = 2.0 + 2.0 * l1 / std::f64::consts::FRAC_PI_6.cos();
        let lam1 = 0.5 * (trace1 + (trace1 * trace1 - 4.0).sqrt());
        let r1 = lam1.ln() / l1;
        assert!((stats.beta_min - r0).abs() < 1e-12);
        assert!((stats.beta_max - r1).abs() < 1e-12);
        assert!((r0 - 0.57311).abs() < 1e-5 && (r1 - 0.57772).abs() < 1e-5);
        // Count length 2·4 = 8: only "0" (length 4) and "1" (4.27) lie below.
        assert_eq!(stats.orbit_count, 2);
        assert!((stats.h_top - 2f64.ln() / 8.0).abs() < 1e-12);
    }

    #[test]
    fn empty_set_is_an_error() {
        assert!(matches!(
            hyperbolicity_stats(&[]),
            Err(BilliardError::EmptyOrbitSet)
        ));
    }
}
