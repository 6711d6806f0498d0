//! Geometry of the symmetric 3-disk billiard and its C3v symmetry group.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Vector2};

use super::BilliardError;

/// Three unit disks centered on an equilateral triangle.
///
/// Lengths are measured in units of the disk radius, so `radius() == 1` and
/// the center-to-center distance equals `d_over_r`. Disk `j` sits at polar
/// angle `π/2 + 2πj/3` around the origin, which is the centroid of the
/// triangle and the fixed point of the symmetry group.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskSystem {
    d_over_r: f64,
    centers: [Vector2<f64>; 3],
}

impl DiskSystem {
    pub fn new(d_over_r: f64) -> Result<Self, BilliardError> {
        if !d_over_r.is_finite() || d_over_r <= 2.0 {
            return Err(BilliardError::NonPhysicalGeometry { d_over_r });
        }
        let circumradius = d_over_r / 3f64.sqrt();
        let centers = [0, 1, 2].map(|j| {
            let angle = disk_polar_angle(j);
            Vector2::new(circumradius * angle.cos(), circumradius * angle.sin())
        });
        Ok(Self { d_over_r, centers })
    }

    pub fn d_over_r(&self) -> f64 {
        self.d_over_r
    }

    pub fn radius(&self) -> f64 {
        1.0
    }

    /// Center-to-center distance; equals `d_over_r` because `r = 1`.
    pub fn separation(&self) -> f64 {
        self.d_over_r
    }

    pub fn centers(&self) -> &[Vector2<f64>; 3] {
        &self.centers
    }

    pub fn center(&self, disk: usize) -> Vector2<f64> {
        self.centers[disk]
    }

    /// Point on the boundary of `disk` at polar angle `alpha` about its center.
    pub fn boundary_point(&self, disk: usize, alpha: f64) -> Vector2<f64> {
        self.centers[disk] + Vector2::new(alpha.cos(), alpha.sin())
    }

    /// Polar angle (about the center of disk 0) of the Birkhoff base point,
    /// the boundary point of disk 0 facing disk 1.
    pub fn base_angle(&self) -> f64 {
        let dir = self.centers[1] - self.centers[0];
        dir.y.atan2(dir.x)
    }

    /// Whether the open segment `a -> b` passes through the interior of `disk`.
    pub fn segment_hits_disk(&self, a: &Vector2<f64>, b: &Vector2<f64>, disk: usize) -> bool {
        let c = self.centers[disk];
        let ab = b - a;
        let len2 = ab.norm_squared();
        let t = if len2 > 0.0 {
            ((c - a).dot(&ab) / len2).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let closest = a + ab * t;
        // Endpoints lying on the boundary are allowed.
        (closest - c).norm() < self.radius() - 1e-12
    }

    /// First intersection of the ray `origin + t·dir` (t > 0, unit `dir`) with
    /// the boundary of `disk`, approached from outside.
    pub fn ray_hit(&self, origin: &Vector2<f64>, dir: &Vector2<f64>, disk: usize) -> Option<f64> {
        let oc = origin - self.centers[disk];
        let b = oc.dot(dir);
        let c = oc.norm_squared() - 1.0;
        let disc = b * b - c;
        if disc < 0.0 {
            return None;
        }
        let t = -b - disc.sqrt();
        (t > 1e-9).then_some(t)
    }
}

fn disk_polar_angle(disk: usize) -> f64 {
    PI / 2.0 + 2.0 * PI * disk as f64 / 3.0
}

/// An element of C3v, stored both as the permutation it induces on the disks
/// and as the orthogonal 2×2 matrix acting on the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Symmetry {
    perm: [usize; 3],
    matrix: Matrix2<f64>,
}

impl Symmetry {
    pub fn identity() -> Self {
        Self::from_perm([0, 1, 2])
    }

    /// Group element with `disk j -> perm[j]`. `perm` must be a permutation.
    pub fn from_perm(perm: [usize; 3]) -> Self {
        let matrix = if is_even(perm) {
            // Cyclic shift j -> j + m is the rotation by 2πm/3.
            let angle = 2.0 * PI * perm[0] as f64 / 3.0;
            let (s, c) = angle.sin_cos();
            Matrix2::new(c, -s, s, c)
        } else {
            // A transposition fixes exactly one disk, whose axis is the mirror.
            let fixed = (0..3)
                .find(|&j| perm[j] == j)
                .expect("odd permutation of 3 has a fixed point");
            let (s, c) = (2.0 * disk_polar_angle(fixed)).sin_cos();
            Matrix2::new(c, s, s, -c)
        };
        Self { perm, matrix }
    }

    /// The unique element mapping the ordered pair of distinct disks
    /// `(from.0, from.1)` onto `(to.0, to.1)`.
    pub fn mapping(from: (usize, usize), to: (usize, usize)) -> Self {
        debug_assert!(from.0 != from.1 && to.0 != to.1);
        let mut perm = [0usize; 3];
        perm[from.0] = to.0;
        perm[from.1] = to.1;
        perm[3 - from.0 - from.1] = 3 - to.0 - to.1;
        Self::from_perm(perm)
    }

    pub fn perm(&self) -> [usize; 3] {
        self.perm
    }

    pub fn matrix(&self) -> &Matrix2<f64> {
        &self.matrix
    }

    pub fn apply(&self, v: &Vector2<f64>) -> Vector2<f64> {
        self.matrix * v
    }

    pub fn apply_disk(&self, disk: usize) -> usize {
        self.perm[disk]
    }

    pub fn inverse(&self) -> Self {
        let mut perm = [0usize; 3];
        for (j, &k) in self.perm.iter().enumerate() {
            perm[k] = j;
        }
        Self {
            perm,
            matrix: self.matrix.transpose(),
        }
    }

    /// +1 for rotations, −1 for mirror reflections.
    pub fn determinant(&self) -> f64 {
        if is_even(self.perm) {
            1.0
        } else {
            -1.0
        }
    }

    pub fn is_reflection(&self) -> bool {
        !is_even(self.perm)
    }
}

fn is_even(perm: [usize; 3]) -> bool {
    let mut inversions = 0;
    for i in 0..3 {
        for j in i + 1..3 {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 0
}
