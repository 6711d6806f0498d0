//! Gaussian-smoothed invariant Ruelle distributions on the bounce section.
//!
//! A resonance `λ₀` defines the linear functional `a ↦ Res_{λ₀} Z_a`, where
//! each prime carries the weight `A_p = Σ_i a(q_i, p_i)` summed over its
//! bounces. Evaluating that functional on a family of Gaussians centered on
//! the nodes of a grid gives a smooth picture of the distribution.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::billiard::{wrap_angle, OrbitRecord, SectionMap, SectionPoint};
use crate::zeta::{residue_coefficients, CycleExpansion, Representation, Resonance, ZetaError};

/// Gaussian tails beyond this many widths are below the smallest subnormal.
const CUTOFF_WIDTHS: f64 = 40.0;

#[derive(Debug, Error)]
pub enum RuelleError {
    #[error("σ = 1/Re k is undefined for Re k = {re_k}")]
    NonPositiveFrequency { re_k: f64 },
    #[error("invalid probe: {0}")]
    InvalidProbe(String),
    #[error("invalid grid {nq}x{np}")]
    InvalidGrid { nq: usize, np: usize },
    #[error(transparent)]
    Zeta(#[from] ZetaError),
}

/// A real function on the reduced section.
pub trait Observable: Sync {
    fn eval(&self, point: SectionPoint) -> f64;
}

/// `φ(q, p) = (2πσ²)^{−1} exp(−(wrap(q − q₀)² + (p − p₀)²) / 2σ²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianProbe {
    center: SectionPoint,
    sigma: f64,
}

impl GaussianProbe {
    pub fn new(q0: f64, p0: f64, sigma: f64) -> Result<Self, RuelleError> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(RuelleError::InvalidProbe(format!(
                "width must be positive, got {sigma}"
            )));
        }
        if !(-PI..=PI).contains(&q0) || !(-1.0..=1.0).contains(&p0) {
            return Err(RuelleError::InvalidProbe(format!(
                "center ({q0}, {p0}) outside [−π, π]×[−1, 1]"
            )));
        }
        Ok(Self {
            center: SectionPoint::new(q0, p0),
            sigma,
        })
    }

    pub fn center(&self) -> SectionPoint {
        self.center
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
}

impl Observable for GaussianProbe {
    fn eval(&self, point: SectionPoint) -> f64 {
        let dq = wrap_angle(point.q - self.center.q);
        let dp = point.p - self.center.p;
        let cutoff = CUTOFF_WIDTHS * self.sigma;
        if dq.abs() > cutoff || dp.abs() > cutoff {
            return 0.0;
        }
        let s2 = self.sigma * self.sigma;
        (-(dq * dq + dp * dp) / (2.0 * s2)).exp() / (2.0 * PI * s2)
    }
}

/// `a ∘ F`, with `F` the billiard return map. Escaping points give 0.
pub struct Pullback<'a, O> {
    pub observable: &'a O,
    pub map: &'a SectionMap,
}

impl<O: Observable> Observable for Pullback<'_, O> {
    fn eval(&self, point: SectionPoint) -> f64 {
        self.map
            .apply(point)
            .map_or(0.0, |next| self.observable.eval(next))
    }
}

/// `Σ_i a(q_i, p_i)` over the bounces of one prime.
pub fn orbit_integral<O: Observable + ?Sized>(orbit: &OrbitRecord, observable: &O) -> f64 {
    orbit.section.iter().map(|&s| observable.eval(s)).sum()
}

pub fn probe_weight(orbit: &OrbitRecord, probe: &GaussianProbe) -> f64 {
    orbit_integral(orbit, probe)
}

/// The smoothing width `1/Re k` used for the map of a resonance.
pub fn default_sigma(resonance: &Resonance) -> Result<f64, RuelleError> {
    let re_k = resonance.k.re;
    if re_k.is_nan() || re_k <= 0.0 {
        return Err(RuelleError::NonPositiveFrequency { re_k });
    }
    Ok(1.0 / re_k)
}

/// Cell-centered lattice over `[−π, π] × [−1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub nq: usize,
    pub np: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { nq: 400, np: 200 }
    }
}

impl GridSpec {
    pub fn new(nq: usize, np: usize) -> Result<Self, RuelleError> {
        if nq == 0 || np == 0 || nq.checked_mul(np).is_none() {
            return Err(RuelleError::InvalidGrid { nq, np });
        }
        Ok(Self { nq, np })
    }

    pub fn len(&self) -> usize {
        self.nq * self.np
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dq(&self) -> f64 {
        2.0 * PI / self.nq as f64
    }

    pub fn dp(&self) -> f64 {
        2.0 / self.np as f64
    }

    /// Node `(i, j)` with `q` index `i` and `p` index `j`.
    pub fn node(&self, i: usize, j: usize) -> SectionPoint {
        SectionPoint::new(
            -PI + (i as f64 + 0.5) * self.dq(),
            -1.0 + (j as f64 + 0.5) * self.dp(),
        )
    }

    /// All nodes, row-major in `p` with `q` varying fastest.
    pub fn nodes(&self) -> Vec<SectionPoint> {
        (0..self.np)
            .flat_map(|j| (0..self.nq).map(move |i| self.node(i, j)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidueMap {
    pub resonance: Resonance,
    pub sigma: f64,
    pub grid: GridSpec,
    /// Row-major as in [`GridSpec::nodes`].
    pub values: Vec<Complex64>,
    pub d_over_r: f64,
    pub representation: Representation,
    pub order: usize,
}

/// Residue functional of a resonance as coefficients on the prime bounces.
#[derive(Debug, Clone)]
pub struct ResidueFunctional<'a> {
    expansion: &'a CycleExpansion,
    coefficients: Vec<Complex64>,
}

impl<'a> ResidueFunctional<'a> {
    pub fn new(expansion: &'a CycleExpansion, lambda0: Complex64) -> Result<Self, RuelleError> {
        Ok(Self {
            expansion,
            coefficients: residue_coefficients(expansion, lambda0)?,
        })
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// `Σ_p c_p A_p(a)`.
    pub fn apply<O: Observable + ?Sized>(&self, observable: &O) -> Complex64 {
        self.expansion
            .primes()
            .iter()
            .zip(&self.coefficients)
            .map(|(p, &c)| c * orbit_integral(&p.record, observable))
            .sum()
    }

    /// Value at every node of `t(x) = Σ_p c_p Σ_i φ_σ(x − x_{p,i})`.
    pub fn smoothed(
        &self,
        nodes: &[SectionPoint],
        sigma: f64,
    ) -> Result<Vec<Complex64>, RuelleError> {
        GaussianProbe::new(0.0, 0.0, sigma)?;
        let bounces: Vec<(SectionPoint, Complex64)> = self
            .expansion
            .primes()
            .iter()
            .zip(&self.coefficients)
            .flat_map(|(p, &c)| p.record.section.iter().map(move |&s| (s, c)))
            .collect();
        Ok(nodes
            .par_iter()
            .map(|&x| {
                let probe = GaussianProbe { center: x, sigma };
                bounces.iter().map(|&(s, c)| c * probe.eval(s)).sum()
            })
            .collect())
    }
}

/// Evaluates the smoothed distribution of `resonance` on `grid`.
pub fn residue_map(
    expansion: &CycleExpansion,
    resonance: &Resonance,
    grid: GridSpec,
    sigma: f64,
    d_over_r: f64,
) -> Result<ResidueMap, RuelleError> {
    GridSpec::new(grid.nq, grid.np)?;
    let functional = ResidueFunctional::new(expansion, resonance.lambda)?;
    let values = functional.smoothed(&grid.nodes(), sigma)?;
    Ok(ResidueMap {
        resonance: *resonance,
        sigma,
        grid,
        values,
        d_over_r,
        representation: expansion.spec().representation,
        order: expansion.order(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::billiard::{solve_all, DiskSystem};
    use crate::zeta::{
        build_expansion, find_resonances, residue, CycleWeightSpec, KRegion, SearchOptions,
    };

    fn records(n: usize) -> Vec<OrbitRecord> {
        solve_all(&DiskSystem::new(6.0).unwrap(), n)
            .unwrap()
            .iter()
            .map(OrbitRecord::from)
            .collect()
    }

    fn setup() -> (CycleExpansion, Resonance) {
        let exp = build_expansion(&records(5), CycleWeightSpec::default(), 5).unwrap();
        let region = KRegion::new(20.0, 25.0, -0.6, 0.0).unwrap();
        let z = find_resonances(&exp, &region, &SearchOptions::default())[0];
        (exp, z)
    }

    #[test]
    fn probe_peak_value() {
        let o = &records(1)[0];
        let probe = GaussianProbe::new(o.section[0].q, o.section[0].p, 0.1).unwrap();
        let expected = 1.0 / (2.0 * PI * 0.01);
        assert!((probe_weight(o, &probe) - expected).abs() < 1e-12 * expected);
    }

    #[test]
    fn distant_probe_vanishes() {
        let o = &records(1)[0];
        let probe = GaussianProbe::new(2.5, 0.9, 0.05).unwrap();
        assert!(probe_weight(o, &probe) < 1e-12);
    }

    #[test]
    fn q_wraps_around() {
        let o = &records(1)[1];
        let a = GaussianProbe::new(PI, 0.3, 0.5).unwrap();
        let b = GaussianProbe::new(-PI, 0.3, 0.5).unwrap();
        assert_eq!(probe_weight(o, &a), probe_weight(o, &b));
    }

    #[test]
    fn probe_validation() {
        assert!(GaussianProbe::new(0.0, 0.0, 0.0).is_err());
        assert!(GaussianProbe::new(4.0, 0.0, 0.1).is_err());
        assert!(GaussianProbe::new(0.0, 1.5, 0.1).is_err());
    }

    #[test]
    fn cutoff_matches_untruncated_gaussian() {
        let probe = GaussianProbe::new(0.0, 0.0, 1e-3).unwrap();
        for d in [0.039f64, 0.0399, 0.04, 0.041, 0.1] {
            let full = (-(d * d) / (2.0 * 1e-6)).exp() / (2.0 * PI * 1e-6);
            assert_eq!(probe.eval(SectionPoint::new(d, 0.0)), full, "{d}");
        }
    }

    #[test]
    fn default_sigma_rule() {
        let make = |k: Complex64| Resonance::from_lambda(-Complex64::i() * k, 0.0, 8, 0, 0.0);
        let s = default_sigma(&make(Complex64::new(10000.983, -0.207))).unwrap();
        assert!((s - 9.999e-5).abs() < 1e-8);
        assert_eq!(default_sigma(&make(Complex64::new(1.0, 0.0))).unwrap(), 1.0);
        assert!(matches!(
            default_sigma(&make(Complex64::new(-5.0, 0.0))),
            Err(RuelleError::NonPositiveFrequency { .. })
        ));
    }

    #[test]
    fn single_node_map_equals_direct_residue() {
        let (exp, z) = setup();
        let map = residue_map(&exp, &z, GridSpec::new(1, 1).unwrap(), 0.7, 6.0).unwrap();
        let probe = GaussianProbe::new(0.0, 0.0, 0.7).unwrap();
        let weights: Vec<f64> = exp
            .primes()
            .iter()
            .map(|p| probe_weight(&p.record, &probe))
            .collect();
        let direct = residue(&exp, z.lambda, &weights).unwrap();
        assert!((map.values[0] - direct).norm() <= 1e-12 * direct.norm());
    }

    #[test]
    fn map_matches_per_node_residues() {
        let (exp, z) = setup();
        let grid = GridSpec::new(7, 5).unwrap();
        let map = residue_map(&exp, &z, grid, 0.3, 6.0).unwrap();
        for (node, value) in grid.nodes().iter().zip(&map.values) {
            let probe = GaussianProbe::new(node.q, node.p, 0.3).unwrap();
            let weights: Vec<f64> = exp
                .primes()
                .iter()
                .map(|p| probe_weight(&p.record, &probe))
                .collect();
            let direct = residue(&exp, z.lambda, &weights).unwrap();
            assert!((value - direct).norm() <= 1e-12 * direct.norm().max(1e-300));
        }
    }

    #[test]
    fn pullback_by_return_map_leaves_weights_unchanged() {
        let map = SectionMap::new(DiskSystem::new(6.0).unwrap());
        let probe = GaussianProbe::new(0.4, 0.2, 0.3).unwrap();
        let pulled = Pullback {
            observable: &probe,
            map: &map,
        };
        for o in records(5) {
            let a = orbit_integral(&o, &probe);
            let b = orbit_integral(&o, &pulled);
            assert!((a - b).abs() <= 1e-9 * a.abs().max(1e-300), "{}", o.word);
        }
    }

    #[test]
    fn symmetric_bounces_of_01_carry_equal_weight() {
        let o = records(2)
            .into_iter()
            .find(|o| o.word.to_string() == "01")
            .unwrap();
        let w: Vec<f64> = o
            .section
            .iter()
            .map(|s| probe_weight(&o, &GaussianProbe::new(s.q, s.p, 0.05).unwrap()))
            .collect();
        assert!((w[0] - w[1]).abs() < 1e-9 * w[0]);
    }

    #[test]
    fn grid_layout_is_row_major() {
        let g = GridSpec::new(4, 2).unwrap();
        let nodes = g.nodes();
        assert_eq!(nodes.len(), 8);
        assert!(nodes[0].q < nodes[1].q && nodes[0].p == nodes[1].p);
        assert!(nodes[4].p > nodes[0].p);
        assert!(GridSpec::new(0, 3).is_err());
    }
}
