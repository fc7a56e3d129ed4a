use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ApproxError, Result};

/// Compact set on which uniform chordal error is measured.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainSpec {
    ClosedDisc { center: Complex64, radius: f64 },
    Circle { center: Complex64, radius: f64 },
    ClosedAnnulus { center: Complex64, r_inner: f64, r_outer: f64 },
    /// Star-shaped about `center`; `rho[k]` is the boundary distance at angle
    /// `2πk/len`, linearly interpolated in between.
    StarlikeCompact { center: Complex64, rho: Vec<f64> },
    /// Polyline through the given points.
    Arc { points: Vec<Complex64> },
    DisjointUnion(Vec<DomainSpec>),
}

impl DomainSpec {
    pub fn unit_disc() -> Self {
        DomainSpec::ClosedDisc { center: Complex64::new(0.0, 0.0), radius: 1.0 }
    }

    pub fn unit_circle() -> Self {
        DomainSpec::Circle { center: Complex64::new(0.0, 0.0), radius: 1.0 }
    }

    pub fn annulus(r_inner: f64, r_outer: f64) -> Self {
        DomainSpec::ClosedAnnulus { center: Complex64::new(0.0, 0.0), r_inner, r_outer }
    }

    /// The square `[−h, h]²` as a star-shaped compact about the origin.
    pub fn square(half_side: f64, samples: usize) -> Self {
        let rho = (0..samples)
            .map(|k| {
                let t = TAU * k as f64 / samples as f64;
                half_side / t.cos().abs().max(t.sin().abs())
            })
            .collect();
        DomainSpec::StarlikeCompact { center: Complex64::new(0.0, 0.0), rho }
    }

    /// Straight segment from `a` to `b` through `count` equispaced points.
    pub fn segment(a: Complex64, b: Complex64, count: usize) -> Self {
        let count = count.max(2);
        let points = (0..count).map(|k| a + (b - a) * (k as f64 / (count - 1) as f64)).collect();
        DomainSpec::Arc { points }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(ApproxError::InvalidInput(msg));
        let finite = |z: &Complex64| z.re.is_finite() && z.im.is_finite();
        match self {
            DomainSpec::ClosedDisc { center, radius } | DomainSpec::Circle { center, radius } => {
                if !(*radius > 0.0 && radius.is_finite()) || !finite(center) {
                    return bad(format!("radius must be positive and finite, got {radius}"));
                }
            }
            DomainSpec::ClosedAnnulus { center, r_inner, r_outer } => {
                if !(*r_inner > 0.0 && r_inner < r_outer && r_outer.is_finite()) || !finite(center) {
                    return bad(format!("annulus needs 0 < r_inner < r_outer, got {r_inner}, {r_outer}"));
                }
            }
            DomainSpec::StarlikeCompact { center, rho } => {
                if rho.len() < 3 || !finite(center) {
                    return bad("starlike compact needs at least 3 radial samples".into());
                }
                if !rho.iter().all(|r| *r > 0.0 && r.is_finite()) {
                    return bad("radial samples must be strictly positive".into());
                }
            }
            DomainSpec::Arc { points } => {
                if points.len() < 2 || !points.iter().all(finite) {
                    return bad("an arc needs at least two finite points".into());
                }
            }
            DomainSpec::DisjointUnion(parts) => {
                if parts.is_empty() {
                    return bad("empty disjoint union".into());
                }
                for p in parts {
                    p.validate()?;
                }
                let prims = self.components();
                for i in 0..prims.len() {
                    for j in i + 1..prims.len() {
                        if prims[i].overlaps(prims[j]) {
                            return bad(format!("components {i} and {j} of the union overlap"));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Primitive (non-union) components, flattened in order.
    pub fn components(&self) -> Vec<&DomainSpec> {
        match self {
            DomainSpec::DisjointUnion(parts) => parts.iter().flat_map(|p| p.components()).collect(),
            other => vec![other],
        }
    }

    /// Whether the set has interior points.
    pub fn is_solid(&self) -> bool {
        matches!(
            self,
            DomainSpec::ClosedDisc { .. } | DomainSpec::ClosedAnnulus { .. } | DomainSpec::StarlikeCompact { .. }
        )
    }

    /// Boundary distance of a star-shaped compact in direction `phi`.
    pub(crate) fn star_radius(rho: &[f64], phi: f64) -> f64 {
        let n = rho.len();
        let s = phi.rem_euclid(TAU) / TAU * n as f64;
        let k = (s.floor() as usize).min(n - 1);
        let t = s - k as f64;
        rho[k] * (1.0 - t) + rho[(k + 1) % n] * t
    }

    /// Point membership with a relative tolerance `tol` on the boundary.
    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        match self {
            DomainSpec::ClosedDisc { center, radius } => (z - center).norm() <= radius * (1.0 + tol),
            DomainSpec::Circle { center, radius } => ((z - center).norm() - radius).abs() <= radius * tol,
            DomainSpec::ClosedAnnulus { center, r_inner, r_outer } => {
                let d = (z - center).norm();
                d >= r_inner * (1.0 - tol) && d <= r_outer * (1.0 + tol)
            }
            DomainSpec::StarlikeCompact { center, rho } => {
                let w = z - center;
                w.norm() <= Self::star_radius(rho, w.arg()) * (1.0 + tol)
            }
            DomainSpec::Arc { points } => {
                let scale = points.iter().map(|p| p.norm()).fold(1.0, f64::max);
                points.windows(2).any(|s| segment_distance(z, s[0], s[1]) <= tol * scale)
            }
            DomainSpec::DisjointUnion(parts) => parts.iter().any(|p| p.contains(z, tol)),
        }
    }

    /// Where a point sits relative to a solid domain: `Some(true)` strictly
    /// inside, `Some(false)` on the boundary, `None` outside.
    pub(crate) fn locate(&self, z: Complex64, tol: f64) -> Option<bool> {
        let (dist, inner, outer) = match self {
            DomainSpec::ClosedDisc { center, radius } => ((z - center).norm(), None, *radius),
            DomainSpec::ClosedAnnulus { center, r_inner, r_outer } => ((z - center).norm(), Some(*r_inner), *r_outer),
            DomainSpec::StarlikeCompact { center, rho } => {
                let w = z - center;
                (w.norm(), None, Self::star_radius(rho, w.arg()))
            }
            _ => return if self.contains(z, tol) { Some(false) } else { None },
        };
        let on = |r: f64| (dist - r).abs() <= tol * r.max(1.0);
        if on(outer) || inner.is_some_and(on) {
            return Some(false);
        }
        let inside = dist < outer && inner.is_none_or(|r| dist > r);
        inside.then_some(true)
    }

    /// Points on the topological boundary (the whole set for curves).
    pub fn boundary_samples(&self, n: usize) -> Vec<Complex64> {
        let circle = |c: Complex64, r: f64| -> Vec<Complex64> {
            (0..n).map(|k| c + Complex64::from_polar(r, TAU * k as f64 / n as f64)).collect()
        };
        match self {
            DomainSpec::ClosedDisc { center, radius } | DomainSpec::Circle { center, radius } => circle(*center, *radius),
            DomainSpec::ClosedAnnulus { center, r_inner, r_outer } => {
                let mut pts = circle(*center, *r_outer);
                pts.extend(circle(*center, *r_inner));
                pts
            }
            DomainSpec::StarlikeCompact { center, rho } => (0..n)
                .map(|k| {
                    let phi = TAU * k as f64 / n as f64;
                    center + Complex64::from_polar(Self::star_radius(rho, phi), phi)
                })
                .collect(),
            DomainSpec::Arc { .. } => (0..n).map(|k| self.arc_point(k as f64 / (n - 1).max(1) as f64)).collect(),
            DomainSpec::DisjointUnion(parts) => parts.iter().flat_map(|p| p.boundary_samples(n)).collect(),
        }
    }

    /// Point on an arc at parameter `v ∈ [0, 1]` (uniform in the vertex index).
    pub(crate) fn arc_point(&self, v: f64) -> Complex64 {
        let DomainSpec::Arc { points } = self else {
            panic!("arc_point called on a non-arc domain");
        };
        let s = v.clamp(0.0, 1.0) * (points.len() - 1) as f64;
        let k = (s.floor() as usize).min(points.len() - 2);
        let t = s - k as f64;
        points[k] * (1.0 - t) + points[k + 1] * t
    }

    /// Area centroid of a star-shaped compact.
    pub(crate) fn star_centroid(center: Complex64, rho: &[f64]) -> Complex64 {
        let n = (rho.len() * 16).max(1024);
        let mut area = 0.0;
        let mut moment = Complex64::new(0.0, 0.0);
        for k in 0..n {
            let phi = TAU * (k as f64 + 0.5) / n as f64;
            let r = Self::star_radius(rho, phi);
            area += r * r / 2.0;
            moment += Complex64::from_polar(r * r * r / 3.0, phi);
        }
        center + moment / area
    }

    fn overlaps(&self, other: &DomainSpec) -> bool {
        let n = 256;
        let a = self.boundary_samples(n);
        let b = other.boundary_samples(n);
        if a.iter().any(|&z| other.contains(z, 1e-9)) || b.iter().any(|&z| self.contains(z, 1e-9)) {
            return true;
        }
        min_separation(&a, &b) == 0.0
    }
}

fn segment_distance(z: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let t = ((z - a) * ab.conj()).re / len2;
    (z - (a + ab * t.clamp(0.0, 1.0))).norm()
}

/// Smallest distance between two point clouds.
pub(crate) fn min_separation(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| (x - y).norm()))
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn validation() {
        assert!(DomainSpec::unit_disc().validate().is_ok());
        assert!(DomainSpec::ClosedDisc { center: c(0.0, 0.0), radius: 0.0 }.validate().is_err());
        assert!(DomainSpec::annulus(0.5, 0.5).validate().is_err());
        assert!(DomainSpec::annulus(0.5, 1.0).validate().is_ok());
        let star = DomainSpec::StarlikeCompact { center: c(0.0, 0.0), rho: vec![1.0, 0.0, 1.0] };
        assert!(star.validate().is_err());
    }

    #[test]
    fn union_overlap_detection() {
        let disc = |x: f64| DomainSpec::ClosedDisc { center: c(x, 0.0), radius: 0.5 };
        assert!(DomainSpec::DisjointUnion(vec![disc(-2.0), disc(2.0)]).validate().is_ok());
        assert!(DomainSpec::DisjointUnion(vec![disc(0.0), disc(0.6)]).validate().is_err());
        let nested = DomainSpec::DisjointUnion(vec![
            DomainSpec::unit_disc(),
            DomainSpec::ClosedDisc { center: c(0.1, 0.0), radius: 0.2 },
        ]);
        assert!(nested.validate().is_err());
    }

    #[test]
    fn square_geometry() {
        let sq = DomainSpec::square(1.0, 64);
        assert!(sq.contains(c(0.99, 0.99), 1e-9));
        assert!(!sq.contains(c(1.05, 0.0), 1e-9));
        let DomainSpec::StarlikeCompact { center, rho } = &sq else { unreachable!() };
        assert!((DomainSpec::star_radius(rho, std::f64::consts::FRAC_PI_4) - 2f64.sqrt()).abs() < 1e-12);
        assert!(DomainSpec::star_centroid(*center, rho).norm() < 1e-12);
    }

    #[test]
    fn locate_points() {
        let d = DomainSpec::unit_disc();
        assert_eq!(d.locate(c(0.5, 0.0), 1e-12), Some(true));
        assert_eq!(d.locate(c(1.0, 0.0), 1e-12), Some(false));
        assert_eq!(d.locate(c(2.0, 0.0), 1e-12), None);
        let a = DomainSpec::annulus(0.5, 1.0);
        assert_eq!(a.locate(c(0.5, 0.0), 1e-12), Some(false));
        assert_eq!(a.locate(c(0.25, 0.0), 1e-12), None);
    }

    #[test]
    fn json_shape() {
        let d: DomainSpec = serde_json::from_str(r#"{"closed_disc":{"center":[0,0],"radius":1}}"#).unwrap();
        assert_eq!(d, DomainSpec::unit_disc());
    }
}
