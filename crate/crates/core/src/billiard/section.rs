//! Birkhoff coordinates on the reduced bounce section.
//!
//! Every bounce is carried by the unique group element that maps it to a
//! bounce on disk 0 arriving from disk 1. On disk 0, `q` is the polar angle
//! (arclength in units of `r`) measured counter-clockwise from the point
//! facing disk 1, wrapped into `[−π, π]`, and `p` is the component of the
//! outgoing unit velocity along the counter-clockwise tangent.

use std::f64::consts::PI;

use nalgebra::Vector2;
use serde::{Deserialize, Serialize};

use super::geometry::{DiskSystem, Symmetry};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct SectionPoint {
    pub q: f64,
    pub p: f64,
}

impl SectionPoint {
    pub fn new(q: f64, p: f64) -> Self {
        Self { q, p }
    }
}

impl From<[f64; 2]> for SectionPoint {
    fn from([q, p]: [f64; 2]) -> Self {
        Self { q, p }
    }
}

impl From<SectionPoint> for [f64; 2] {
    fn from(s: SectionPoint) -> Self {
        [s.q, s.p]
    }
}

/// Wraps an angle into `[−π, π)`.
pub fn wrap_angle(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    // rem_euclid can round up to exactly 2π.
    if y >= PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Reduced Birkhoff coordinates of a bounce on disk `pair.1` arriving from
/// disk `pair.0`, with outgoing unit direction `outgoing`.
pub fn birkhoff_point(
    system: &DiskSystem,
    pair: (usize, usize),
    position: &Vector2<f64>,
    outgoing: &Vector2<f64>,
) -> SectionPoint {
    let h = Symmetry::mapping(pair, (1, 0));
    let y = h.apply(position) - system.center(0);
    let v = h.apply(outgoing);
    let theta = y.y.atan2(y.x);
    let q = wrap_angle(theta - system.base_angle());
    let tangent = Vector2::new(-theta.sin(), theta.cos());
    let p = v.dot(&tangent).clamp(-1.0, 1.0);
    SectionPoint { q, p }
}

/// The billiard return map on the reduced section.
#[derive(Debug, Clone)]
pub struct SectionMap {
    system: DiskSystem,
}

impl SectionMap {
    pub fn new(system: DiskSystem) -> Self {
        Self { system }
    }

    pub fn system(&self) -> &DiskSystem {
        &self.system
    }

    /// Position and outgoing velocity of a reduced section point.
    pub fn phase_point(&self, point: SectionPoint) -> (Vector2<f64>, Vector2<f64>) {
        let theta = self.system.base_angle() + point.q;
        let normal = Vector2::new(theta.cos(), theta.sin());
        let tangent = Vector2::new(-theta.sin(), theta.cos());
        let position = self.system.center(0) + normal;
        let normal_part = (1.0 - point.p * point.p).max(0.0).sqrt();
        (position, tangent * point.p + normal * normal_part)
    }

    /// Next bounce, or `None` when the trajectory escapes to infinity.
    pub fn apply(&self, point: SectionPoint) -> Option<SectionPoint> {
        self.step(point).map(|(next, _)| next)
    }

    /// Next bounce together with the symbol of the step.
    pub fn step(&self, point: SectionPoint) -> Option<(SectionPoint, u8)> {
        let (position, velocity) = self.phase_point(point);
        let (t, disk) = [1usize, 2]
            .into_iter()
            .filter_map(|k| self.system.ray_hit(&position, &velocity, k).map(|t| (t, k)))
            .min_by(|a, b| a.0.total_cmp(&b.0))?;
        let hit = position + velocity * t;
        let normal = hit - self.system.center(disk);
        let reflected = velocity - normal * (2.0 * velocity.dot(&normal));
        let symbol = if disk == 1 { 0 } else { 1 };
        Some((
            birkhoff_point(&self.system, (0, disk), &hit, &reflected),
            symbol,
        ))
    }

    /// `n`-fold iterate.
    pub fn iterate(&self, mut point: SectionPoint, n: usize) -> Option<SectionPoint> {
        for _ in 0..n {
            point = self.apply(point)?;
        }
        Some(point)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::billiard::{find_orbit, solve_all};

    #[test]
    fn wrap_stays_in_range() {
        for x in [-10.0, -PI, -1.0, 0.0, 3.0, PI, 7.5, 100.0] {
            let w = wrap_angle(x);
            assert!((-PI..PI).contains(&w), "{x} -> {w}");
            assert!(
                ((x - w) / (2.0 * PI)).fract().abs() < 1e-12
                    || ((x - w) / (2.0 * PI)).fract().abs() > 1.0 - 1e-12
            );
        }
    }

    #[test]
    fn two_disk_cycle_sits_at_origin() {
        let sys = DiskSystem::new(6.0).unwrap();
        let o = find_orbit(&sys, &"0".parse().unwrap()).unwrap();
        assert_eq!(o.section.len(), 1);
        assert!(o.section[0].q.abs() < 1e-12 && o.section[0].p.abs() < 1e-12);
    }

    #[test]
    fn triangle_cycle_has_half_tangential_speed() {
        let sys = DiskSystem::new(6.0).unwrap();
        let o = find_orbit(&sys, &"1".parse().unwrap()).unwrap();
        let s = o.section[0];
        assert!((s.p - 0.5).abs() < 1e-12, "{s:?}");
        assert!((s.q - PI / 6.0).abs() < 1e-12, "{s:?}");
    }

    #[test]
    fn section_points_are_in_range_and_cycle_under_the_map() {
        let sys = DiskSystem::new(6.0).unwrap();
        let map = SectionMap::new(sys.clone());
        for o in solve_all(&sys, 6).unwrap() {
            for (i, s) in o.section.iter().enumerate() {
                assert!(s.q.abs() <= PI && s.p.abs() <= 1.0);
                let (next, symbol) = map.step(*s).unwrap();
                let expected = o.section[(i + 1) % o.section.len()];
                assert!(
                    (next.q - expected.q).abs() < 1e-9 && (next.p - expected.p).abs() < 1e-9,
                    "{}",
                    o.word
                );
                assert_eq!(symbol, o.word.symbols()[i], "{}", o.word);
            }
        }
    }

    #[test]
    fn escaping_trajectory_returns_none() {
        let map = SectionMap::new(DiskSystem::new(6.0).unwrap());
        // Back side of disk 0, moving away from the other disks.
        assert!(map.apply(SectionPoint::new(PI - 0.1, 0.0)).is_none());
    }

    #[test]
    fn section_point_serializes_as_pair() {
        let json = serde_json::to_string(&SectionPoint::new(0.25, -0.5)).unwrap();
        assert_eq!(json, "[0.25,-0.5]");
    }
}
