//! Periodic orbits of the reduced billiard, found as stationary points of the
//! total chord length over the unfolded disk sequence of a word.

use nalgebra::{DMatrix, DVector, Matrix2, Vector2};
use rayon::prelude::*;

use super::geometry::{DiskSystem, Symmetry};
use super::section::{birkhoff_point, SectionPoint};
use super::words::{enumerate_words, Word};
use super::BilliardError;

const GRADIENT_TOL: f64 = 1e-12;
const REFLECTION_TOL: f64 = 1e-10;
const DESCENT_SWEEPS: usize = 4;
const NEWTON_ITERATIONS: usize = 60;

/// Full-plane disk sequence of a word together with the symmetry closing it.
///
/// `disks[0] = 0`, `disks[1] = 1` and `disks[i + 1]` is fixed by symbol `i`
/// (1-based) at bounce `i`. The closing element maps `(disks[0], disks[1])` to
/// `(disks[n], disks[n + 1])`, so bounce `i + n` is the image of bounce `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Unfolding {
    pub disks: Vec<usize>,
    pub closing: Symmetry,
}

impl Unfolding {
    pub fn of(word: &Word) -> Self {
        let n = word.len();
        let mut disks = Vec::with_capacity(n + 2);
        disks.extend([0usize, 1]);
        for &symbol in word.symbols() {
            let prev = disks[disks.len() - 2];
            let cur = disks[disks.len() - 1];
            disks.push(if symbol == 0 { prev } else { 3 - prev - cur });
        }
        let closing = Symmetry::mapping((0, 1), (disks[n], disks[n + 1]));
        Self { disks, closing }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicOrbit {
    pub word: Word,
    pub unfolding: Unfolding,
    /// Polar angle of each bounce point about its disk center, bounces `1..=n`.
    pub boundary_angles: Vec<f64>,
    /// Bounce points in the plane, bounces `1..=n`.
    pub bounce_points: Vec<Vector2<f64>>,
    /// Signed angle between the outgoing direction and the outward normal.
    pub incidence_angles: Vec<f64>,
    /// `flight_lengths[i]` is the free flight ending at bounce `i + 1`.
    pub flight_lengths: Vec<f64>,
    pub length: f64,
    pub monodromy: Matrix2<f64>,
    pub stability: f64,
    pub section: Vec<SectionPoint>,
    /// Euclidean norm of the length-functional gradient at the solution.
    pub residual: f64,
    /// Largest violation of the reflection law over all bounces, in radians.
    pub reflection_error: f64,
}

impl PeriodicOrbit {
    pub fn n_reflections(&self) -> usize {
        self.word.len()
    }

    /// Lyapunov-type ratio `log|Λ| / L`.
    pub fn stability_ratio(&self) -> f64 {
        self.stability.abs().ln() / self.length
    }
}

struct LengthFunctional<'a> {
    system: &'a DiskSystem,
    unfolding: &'a Unfolding,
}

/// Bounce point with its first and second derivative along the boundary.
struct Node {
    point: Vector2<f64>,
    tangent: Vector2<f64>,
    curvature: Vector2<f64>,
    var: usize,
}

impl LengthFunctional<'_> {
    fn n(&self) -> usize {
        self.unfolding.disks.len() - 2
    }

    /// Nodes `0..=n`, where node 0 is the closing image of bounce `n`.
    fn nodes(&self, alphas: &[f64]) -> Vec<Node> {
        let n = self.n();
        let mut nodes = Vec::with_capacity(n + 1);
        let back = self.unfolding.closing.inverse();
        for i in 0..=n {
            let (bounce, var) = if i == 0 { (n, n - 1) } else { (i, i - 1) };
            let disk = self.unfolding.disks[bounce];
            let (s, c) = alphas[var].sin_cos();
            let radial = Vector2::new(c, s);
            let mut point = self.system.center(disk) + radial;
            let mut tangent = Vector2::new(-s, c);
            let mut curvature = -radial;
            if i == 0 {
                point = back.apply(&point);
                tangent = back.apply(&tangent);
                curvature = back.apply(&curvature);
            }
            nodes.push(Node {
                point,
                tangent,
                curvature,
                var,
            });
        }
        nodes
    }

    fn value(&self, alphas: &[f64]) -> f64 {
        let nodes = self.nodes(alphas);
        nodes
            .windows(2)
            .map(|w| (w[1].point - w[0].point).norm())
            .sum()
    }

    fn gradient(&self, alphas: &[f64]) -> DVector<f64> {
        let nodes = self.nodes(alphas);
        let mut g = DVector::zeros(self.n());
        for w in nodes.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            let u = (b.point - a.point).normalize();
            g[b.var] += u.dot(&b.tangent);
            g[a.var] -= u.dot(&a.tangent);
        }
        g
    }

    fn gradient_hessian(&self, alphas: &[f64]) -> (DVector<f64>, DMatrix<f64>) {
        let nodes = self.nodes(alphas);
        let n = self.n();
        let mut g = DVector::zeros(n);
        let mut h = DMatrix::zeros(n, n);
        for w in nodes.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            let d = b.point - a.point;
            let len = d.norm();
            let u = d / len;
            let proj = (Matrix2::identity() - u * u.transpose()) / len;
            g[b.var] += u.dot(&b.tangent);
            g[a.var] -= u.dot(&a.tangent);
            let hbb = b.tangent.dot(&(proj * b.tangent)) + u.dot(&b.curvature);
            let haa = a.tangent.dot(&(proj * a.tangent)) - u.dot(&a.curvature);
            let hab = -a.tangent.dot(&(proj * b.tangent));
            h[(b.var, b.var)] += hbb;
            h[(a.var, a.var)] += haa;
            h[(a.var, b.var)] += hab;
            h[(b.var, a.var)] += hab;
        }
        (g, h)
    }
}

/// Starting angles: each bounce faces the bisector of the directions towards
/// the previous and next disk centers.
fn initial_angles(system: &DiskSystem, unfolding: &Unfolding) -> Vec<f64> {
    let d = &unfolding.disks;
    (1..d.len() - 1)
        .map(|i| {
            let c = system.center(d[i]);
            let dir = (system.center(d[i - 1]) - c).normalize()
                + (system.center(d[i + 1]) - c).normalize();
            dir.y.atan2(dir.x)
        })
        .collect()
}

fn minimize(
    functional: &LengthFunctional<'_>,
    mut alphas: Vec<f64>,
) -> Result<(Vec<f64>, f64), ()> {
    let n = alphas.len();
    // Gauss-Seidel sweeps of one-dimensional Newton steps.
    for _ in 0..DESCENT_SWEEPS {
        for j in 0..n {
            let (g, h) = functional.gradient_hessian(&alphas);
            let step = if h[(j, j)] > 0.0 {
                -g[j] / h[(j, j)]
            } else {
                -g[j]
            };
            alphas[j] += step.clamp(-0.5, 0.5);
        }
    }
    for _ in 0..NEWTON_ITERATIONS {
        let (g, h) = functional.gradient_hessian(&alphas);
        let gnorm = g.norm();
        if !gnorm.is_finite() {
            return Err(());
        }
        if gnorm < GRADIENT_TOL * 1e-1 {
            break;
        }
        let step = match h.clone().cholesky() {
            Some(chol) => chol.solve(&(-&g)),
            None => -&g,
        };
        if gnorm < 1e-6 {
            for (a, s) in alphas.iter_mut().zip(step.iter()) {
                *a += s;
            }
            continue;
        }
        // Backtracking on the length itself while far from the minimum.
        let current = functional.value(&alphas);
        let mut t = 1.0;
        loop {
            let trial: Vec<f64> = alphas
                .iter()
                .zip(step.iter())
                .map(|(a, s)| a + t * s)
                .collect();
            if functional.value(&trial) < current || t < 1e-8 {
                alphas = trial;
                break;
            }
            t *= 0.5;
        }
    }
    let residual = functional.gradient(&alphas).norm();
    if residual < GRADIENT_TOL {
        Ok((alphas, residual))
    } else {
        Err(())
    }
}

/// Solves the periodic orbit of `word`.
pub fn find_orbit(system: &DiskSystem, word: &Word) -> Result<PeriodicOrbit, BilliardError> {
    let unfolding = Unfolding::of(word);
    let functional = LengthFunctional {
        system,
        unfolding: &unfolding,
    };
    let start = initial_angles(system, &unfolding);
    let (alphas, residual) =
        minimize(&functional, start).map_err(|_| BilliardError::NoConvergence {
            word: word.to_string(),
        })?;

    let n = word.len();
    let nodes = functional.nodes(&alphas);
    let mut points: Vec<Vector2<f64>> = nodes.iter().map(|nd| nd.point).collect();
    // Node n + 1: closing image of bounce 1.
    points.push(unfolding.closing.apply(&points[1]));
    let mut disks = unfolding.disks.clone();
    disks[0] = unfolding.closing.inverse().apply_disk(disks[n]);

    for i in 0..=n {
        let (a, b) = (&points[i], &points[i + 1]);
        let u = (b - a).normalize();
        let leaves = u.dot(&(a - system.center(disks[i]))) > 0.0;
        let arrives = u.dot(&(b - system.center(disks[i + 1]))) < 0.0;
        let blocked =
            (0..3).any(|k| k != disks[i] && k != disks[i + 1] && system.segment_hits_disk(a, b, k));
        if !leaves || !arrives || blocked {
            return Err(BilliardError::InadmissibleOrbit {
                word: word.to_string(),
                flight: i,
            });
        }
    }

    let flight_lengths: Vec<f64> = (0..n).map(|i| (points[i + 1] - points[i]).norm()).collect();
    let length = flight_lengths.iter().sum();

    let mut incidence_angles = Vec::with_capacity(n);
    let mut reflection_error: f64 = 0.0;
    for i in 1..=n {
        let normal = points[i] - system.center(disks[i]);
        let incoming = (points[i] - points[i - 1]).normalize();
        let outgoing = (points[i + 1] - points[i]).normalize();
        let phi_in = signed_angle(&normal, &(-incoming));
        let phi_out = signed_angle(&normal, &outgoing);
        reflection_error = reflection_error.max((phi_in + phi_out).abs());
        incidence_angles.push(phi_out);
    }
    if reflection_error > REFLECTION_TOL {
        return Err(BilliardError::NoConvergence {
            word: word.to_string(),
        });
    }

    let monodromy = monodromy_product(
        system,
        &flight_lengths,
        &incidence_angles,
        &unfolding.closing,
    );
    let stability = expanding_eigenvalue(&monodromy, word)?;

    let mut orbit = PeriodicOrbit {
        word: word.clone(),
        unfolding,
        boundary_angles: alphas,
        bounce_points: points[1..=n].to_vec(),
        incidence_angles,
        flight_lengths,
        length,
        monodromy,
        stability,
        section: Vec::new(),
        residual,
        reflection_error,
    };
    orbit.section = birkhoff_coords(system, &orbit);
    Ok(orbit)
}

/// Reduced Birkhoff coordinates of every bounce, in trajectory order.
pub fn birkhoff_coords(system: &DiskSystem, orbit: &PeriodicOrbit) -> Vec<SectionPoint> {
    let n = orbit.bounce_points.len();
    let disks = &orbit.unfolding.disks;
    let closing = &orbit.unfolding.closing;
    (0..n)
        .map(|i| {
            let here = orbit.bounce_points[i];
            let next = if i + 1 < n {
                orbit.bounce_points[i + 1]
            } else {
                closing.apply(&orbit.bounce_points[0])
            };
            birkhoff_point(
                system,
                (disks[i], disks[i + 1]),
                &here,
                &(next - here).normalize(),
            )
        })
        .collect()
}

fn signed_angle(from: &Vector2<f64>, to: &Vector2<f64>) -> f64 {
    let cross = from.x * to.y - from.y * to.x;
    cross.atan2(from.dot(to))
}

/// Transverse linearization around one period: flights `[[1, ℓ], [0, 1]]`,
/// reflections `−[[1, 0], [2κ/cos φ, 1]]`, then the closing symmetry, which
/// acts as `det(g)·I` on the transverse frame.
fn monodromy_product(
    system: &DiskSystem,
    flights: &[f64],
    incidence: &[f64],
    closing: &Symmetry,
) -> Matrix2<f64> {
    let kappa = 1.0 / system.radius();
    let mut m = Matrix2::identity();
    for (&ell, &phi) in flights.iter().zip(incidence) {
        let flight = Matrix2::new(1.0, ell, 0.0, 1.0);
        let reflection = -Matrix2::new(1.0, 0.0, 2.0 * kappa / phi.cos(), 1.0);
        m = reflection * flight * m;
    }
    m * closing.determinant()
}

fn expanding_eigenvalue(m: &Matrix2<f64>, word: &Word) -> Result<f64, BilliardError> {
    let trace = m.trace();
    if trace.abs() <= 2.0 {
        return Err(BilliardError::DegenerateMonodromy {
            word: word.to_string(),
            trace,
        });
    }
    // Eigenvalues of a unit-determinant matrix: (tr ± sqrt(tr² − 4)) / 2.
    let root = (trace * trace - 4.0).sqrt();
    Ok(0.5 * (trace + trace.signum() * root))
}

/// Monodromy matrix and signed expanding eigenvalue of a solved orbit.
pub fn monodromy(
    system: &DiskSystem,
    orbit: &PeriodicOrbit,
) -> Result<(Matrix2<f64>, f64), BilliardError> {
    let m = monodromy_product(
        system,
        &orbit.flight_lengths,
        &orbit.incidence_angles,
        &orbit.unfolding.closing,
    );
    let lambda = expanding_eigenvalue(&m, &orbit.word)?;
    Ok((m, lambda))
}

/// Solves every prime word up to `max_len`, in enumeration order.
pub fn solve_all(system: &DiskSystem, max_len: usize) -> Result<Vec<PeriodicOrbit>, BilliardError> {
    enumerate_words(max_len)
        .par_iter()
        .map(|w| find_orbit(system, w))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orbit(ratio: f64, word: &str) -> PeriodicOrbit {
        find_orbit(&DiskSystem::new(ratio).unwrap(), &word.parse().unwrap()).unwrap()
    }

    #[test]
    fn two_disk_cycle_closed_form() {
        let o = orbit(6.0, "0");
        assert!((o.length - 4.0).abs() < 1e-12);
        assert!(o.incidence_angles[0].abs() < 1e-12);
        assert!((o.monodromy.trace() - 10.0).abs() < 1e-12);
        let expected = 5.0 + 2.0 * 6f64.sqrt();
        assert!((o.stability / expected - 1.0).abs() < 1e-12);
    }

    #[test]
    fn triangle_cycle_closed_form() {
        let o = orbit(6.0, "1");
        let ell = 6.0 - 3f64.sqrt();
        assert!((o.length - ell).abs() < 1e-12);
        assert!((o.incidence_angles[0].abs() - std::f64::consts::FRAC_PI_6).abs() < 1e-12);
        let trace = 2.0 + 2.0 * ell / (std::f64::consts::FRAC_PI_6).cos();
        assert!((o.monodromy.trace() + trace).abs() < 1e-10);
        assert!(o.stability < 0.0);
        assert!((o.stability.abs() - 11.7715).abs() < 1e-4);
    }

    #[test]
    fn orbits_satisfy_invariants() {
        for ratio in [3.0, 6.0] {
            let sys = DiskSystem::new(ratio).unwrap();
            for o in solve_all(&sys, 7).unwrap() {
                // Cancellation in the determinant scales with the squared norm.
                let scale = o.monodromy.norm_squared().max(1.0);
                assert!(
                    (o.monodromy.determinant() - 1.0).abs() < 1e-13 * scale,
                    "{}",
                    o.word
                );
                assert!(o.stability.abs() > 1.0);
                assert!(o.residual < 1e-12);
                assert!(o.reflection_error < 1e-10);
                assert!((o.flight_lengths.iter().sum::<f64>() - o.length).abs() < 1e-12);
                assert_eq!(o.section.len(), o.word.len());
                let (m, lambda) = monodromy(&sys, &o).unwrap();
                assert_eq!(m, o.monodromy);
                assert_eq!(lambda, o.stability);
            }
        }
    }

    #[test]
    fn stability_sign_follows_symbol_one_count() {
        let sys = DiskSystem::new(6.0).unwrap();
        for o in solve_all(&sys, 6).unwrap() {
            let expected = if o.word.n1() % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(o.stability.signum(), expected, "{}", o.word);
        }
    }

    #[test]
    fn chords_of_admissible_orbit_miss_third_disk() {
        let sys = DiskSystem::new(2.2).unwrap();
        let o = find_orbit(&sys, &"01".parse().unwrap()).unwrap();
        assert!(o.stability.abs() > 1.0);
    }

    #[test]
    fn unfolding_of_basic_words() {
        let u = Unfolding::of(&"0".parse().unwrap());
        assert_eq!(u.disks, [0, 1, 0]);
        assert!(u.closing.is_reflection());
        let u = Unfolding::of(&"1".parse().unwrap());
        assert_eq!(u.disks, [0, 1, 2]);
        assert!(!u.closing.is_reflection());
    }
}
