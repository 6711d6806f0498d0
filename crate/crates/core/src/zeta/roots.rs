use num_complex::Complex64;
use rayon::prelude::*;

use super::{CycleExpansion, ZetaError};

const DEDUP_RADIUS: f64 = 1e-8;
const RESIDUAL_TOL: f64 = 1e-10;
const STEP_TOL: f64 = 1e-12;

/// `k = iλ` and `E = k²`.
pub fn convert(lambda: Complex64) -> (Complex64, Complex64) {
    let k = Complex64::i() * lambda;
    (k, k * k)
}

/// A zero of a truncated `1/ζ_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resonance {
    pub lambda: Complex64,
    pub k: Complex64,
    pub energy: Complex64,
    /// `|1/ζ_k(λ)|` at the stored λ.
    pub residual: f64,
    pub order: usize,
    pub band: u32,
    /// Band 0 and `Re λ` at or above the validity threshold.
    pub reliable: bool,
}

impl Resonance {
    pub fn from_lambda(
        lambda: Complex64,
        residual: f64,
        order: usize,
        band: u32,
        threshold: f64,
    ) -> Self {
        let (k, energy) = convert(lambda);
        Self {
            lambda,
            k,
            energy,
            residual,
            order,
            band,
            reliable: band == 0 && lambda.re >= threshold,
        }
    }
}

/// Closed rectangle in the `k`-plane, restricted to `Re k ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KRegion {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl KRegion {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self, ZetaError> {
        let all = [re_min, re_max, im_min, im_max];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(ZetaError::InvalidRegion(format!(
                "bounds must be finite, got {all:?}"
            )));
        }
        if re_min > re_max || im_min > im_max {
            return Err(ZetaError::InvalidRegion(format!("empty rectangle {all:?}")));
        }
        Ok(Self {
            re_min: re_min.max(0.0),
            re_max,
            im_min,
            im_max,
        })
    }

    pub fn contains(&self, k: Complex64) -> bool {
        (self.re_min..=self.re_max).contains(&k.re) && (self.im_min..=self.im_max).contains(&k.im)
    }

    fn is_void(&self) -> bool {
        self.re_max < self.re_min
    }

    fn widened(&self, margin: f64) -> Self {
        Self {
            re_min: self.re_min - margin,
            re_max: self.re_max + margin,
            im_min: self.im_min - margin,
            im_max: self.im_max + margin,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    /// Seed grid spacing in `k`. `None` uses a quarter of `2π/⟨L⟩`.
    pub seed_spacing: Option<f64>,
    /// `Re λ` at or above which band-0 zeros are flagged reliable.
    pub reliability_threshold: f64,
    pub max_iter: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            seed_spacing: None,
            reliability_threshold: f64::NEG_INFINITY,
            max_iter: 50,
        }
    }
}

/// Newton iteration on `1/ζ(λ(k))` from `k0`. Returns the converged `λ` and
/// residual, or `None` if the iteration stalls, diverges or leaves `bounds`.
fn newton(
    expansion: &CycleExpansion,
    k0: Complex64,
    max_iter: usize,
    bounds: Option<&KRegion>,
) -> Option<(Complex64, f64)> {
    let mut k = k0;
    for _ in 0..max_iter {
        let e = expansion.eval(-Complex64::i() * k);
        // dλ/dk = −i.
        let dk = -Complex64::i() * e.d_lambda;
        if dk.norm() == 0.0 {
            return None;
        }
        let step = e.value / dk;
        k -= step;
        if !k.re.is_finite() || !k.im.is_finite() || bounds.is_some_and(|b| !b.contains(k)) {
            return None;
        }
        if step.norm() <= STEP_TOL * k.norm().max(1.0) {
            break;
        }
    }
    let lambda = -Complex64::i() * k;
    let residual = expansion.eval(lambda).value.norm();
    (residual < RESIDUAL_TOL).then_some((lambda, residual))
}

/// Polishes a zero starting from `k0`.
pub fn refine_zero(expansion: &CycleExpansion, k0: Complex64, threshold: f64) -> Option<Resonance> {
    let spec = expansion.spec();
    newton(expansion, k0, 50, None).map(|(lambda, residual)| {
        Resonance::from_lambda(lambda, residual, expansion.order(), spec.band, threshold)
    })
}

/// Zeros of the expansion inside `region`, found by Newton iteration from a
/// rectangular seed grid, deduplicated and sorted by `Re k`.
pub fn find_resonances(
    expansion: &CycleExpansion,
    region: &KRegion,
    options: &SearchOptions,
) -> Vec<Resonance> {
    let Some(mean_length) = expansion.mean_length() else {
        return Vec::new();
    };
    if region.is_void() {
        return Vec::new();
    }
    let spacing = options
        .seed_spacing
        .unwrap_or(0.25 * 2.0 * std::f64::consts::PI / mean_length);
    let axis = |lo: f64, hi: f64| {
        let n = ((hi - lo) / spacing).ceil().max(0.0) as usize;
        (0..=n).map(move |i| {
            if n == 0 {
                0.5 * (lo + hi)
            } else {
                lo + (hi - lo) * i as f64 / n as f64
            }
        })
    };
    let seeds: Vec<Complex64> = axis(region.im_min, region.im_max)
        .flat_map(|im| axis(region.re_min, region.re_max).map(move |re| Complex64::new(re, im)))
        .collect();
    let bounds = region.widened(4.0 * spacing);
    let mut found: Vec<(Complex64, f64)> = seeds
        .par_iter()
        .filter_map(|&k0| newton(expansion, k0, options.max_iter, Some(&bounds)))
        .filter(|(lambda, _)| region.contains(Complex64::i() * lambda))
        .collect();
    found.sort_by(|a, b| {
        let (ka, kb) = (Complex64::i() * a.0, Complex64::i() * b.0);
        ka.re.total_cmp(&kb.re).then(ka.im.total_cmp(&kb.im))
    });
    let mut unique: Vec<(Complex64, f64)> = Vec::new();
    for (lambda, residual) in found {
        // Near-duplicates may be separated in the sort by a zero with close Re k.
        if unique
            .iter()
            .rev()
            .take_while(|u| (lambda.im - u.0.im).abs() <= DEDUP_RADIUS)
            .any(|u| (u.0 - lambda).norm() <= DEDUP_RADIUS)
        {
            continue;
        }
        unique.push((lambda, residual));
    }
    let band = expansion.spec().band;
    unique
        .into_iter()
        .map(|(lambda, residual)| {
            Resonance::from_lambda(
                lambda,
                residual,
                expansion.order(),
                band,
                options.reliability_threshold,
            )
        })
        .collect()
}
