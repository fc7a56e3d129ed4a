//! Grid estimates of the uniform chordal distance `max_{z∈K} χ(f(z), g(z))`.
//!
//! The value is a maximum over samples, hence a lower bound of the true
//! supremum. Refinement zooms in around the running argmax.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ApproxError, Result};
use crate::func::{DomainSpec, FunctionSpec};
use crate::sphere::chordal_dist;

/// Relative change below which the last refinement counts as converged.
pub const STABILITY_THRESHOLD: f64 = 1e-3;

/// Sampling scheme. Curves (circles, arcs) use `4 · angular_count` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub radial_count: usize,
    pub angular_count: usize,
    pub refinement_factor: usize,
    pub max_refinements: usize,
    /// Angular offset as a fraction of one angular cell.
    #[serde(default)]
    pub phase: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { radial_count: 64, angular_count: 256, refinement_factor: 4, max_refinements: 3, phase: 0.0 }
    }
}

impl GridSpec {
    pub fn new(radial_count: usize, angular_count: usize) -> Self {
        GridSpec { radial_count, angular_count, ..GridSpec::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.radial_count < 8 || self.angular_count < 8 {
            return Err(ApproxError::InvalidInput("grid counts must be at least 8".into()));
        }
        if !self.angular_count.is_multiple_of(2) {
            return Err(ApproxError::InvalidInput("angular count must be even".into()));
        }
        if self.refinement_factor < 2 {
            return Err(ApproxError::InvalidInput("refinement factor must be at least 2".into()));
        }
        if !(0.0..1.0).contains(&self.phase) {
            return Err(ApproxError::InvalidInput("grid phase must lie in [0, 1)".into()));
        }
        Ok(())
    }

    /// The verification grid: every count multiplied by the refinement factor.
    pub fn finer(&self) -> GridSpec {
        GridSpec {
            radial_count: self.radial_count * self.refinement_factor,
            angular_count: self.angular_count * self.refinement_factor,
            ..*self
        }
    }

    pub fn with_phase(self, phase: f64) -> GridSpec {
        GridSpec { phase, ..self }
    }

    pub fn curve_count(&self) -> usize {
        4 * self.angular_count
    }
}

/// A grid sample: the point plus its component index and parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplePoint {
    pub z: Complex64,
    pub component: usize,
    pub u: f64,
    pub v: f64,
}

/// Result of a grid supremum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupEstimate {
    pub value: f64,
    pub argmax_point: Complex64,
    pub grid_used: GridSpec,
    pub stable: bool,
}

pub(crate) fn point_at(prim: &DomainSpec, u: f64, v: f64) -> Complex64 {
    let angle = TAU * v;
    match prim {
        DomainSpec::ClosedDisc { center, radius } => center + Complex64::from_polar(u * radius, angle),
        DomainSpec::Circle { center, radius } => center + Complex64::from_polar(*radius, angle),
        DomainSpec::ClosedAnnulus { center, r_inner, r_outer } => {
            center + Complex64::from_polar(r_inner + u * (r_outer - r_inner), angle)
        }
        DomainSpec::StarlikeCompact { center, rho } => {
            center + Complex64::from_polar(u * DomainSpec::star_radius(rho, angle), angle)
        }
        DomainSpec::Arc { .. } => prim.arc_point(v),
        DomainSpec::DisjointUnion(_) => unreachable!("unions are flattened before sampling"),
    }
}

fn is_curve(prim: &DomainSpec) -> bool {
    matches!(prim, DomainSpec::Circle { .. } | DomainSpec::Arc { .. })
}

fn is_periodic(prim: &DomainSpec) -> bool {
    !matches!(prim, DomainSpec::Arc { .. })
}

/// Centre-collapsing parametrisations have a single point at `u = 0`.
fn collapses_at_origin(prim: &DomainSpec) -> bool {
    matches!(prim, DomainSpec::ClosedDisc { .. } | DomainSpec::StarlikeCompact { .. })
}

/// All grid samples of `d`, grid-major: component, then radial, then angular index.
pub fn grid_points(d: &DomainSpec, grid: &GridSpec) -> Vec<SamplePoint> {
    let mut out = Vec::new();
    for (component, prim) in d.components().into_iter().enumerate() {
        if is_curve(prim) {
            let n = grid.curve_count();
            if is_periodic(prim) {
                for k in 0..n {
                    let v = (k as f64 + grid.phase) / n as f64;
                    out.push(SamplePoint { z: point_at(prim, 1.0, v), component, u: 1.0, v });
                }
            } else {
                for k in 0..=n {
                    let v = k as f64 / n as f64;
                    out.push(SamplePoint { z: point_at(prim, 1.0, v), component, u: 1.0, v });
                }
            }
            continue;
        }
        for i in 0..=grid.radial_count {
            let u = i as f64 / grid.radial_count as f64;
            let angular = if i == 0 && collapses_at_origin(prim) { 1 } else { grid.angular_count };
            for k in 0..angular {
                let v = (k as f64 + grid.phase) / grid.angular_count as f64;
                out.push(SamplePoint { z: point_at(prim, u, v), component, u, v });
            }
        }
    }
    out
}

fn argmax(values: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &x) in values.iter().enumerate() {
        let x = if x.is_nan() { 1.0 } else { x };
        match best {
            Some(b) if values[b] >= x => {}
            _ => best = Some(i),
        }
    }
    best
}

/// Grid maximum of an arbitrary pointwise distance, with argmax refinement.
pub fn sup_over<F>(d: &DomainSpec, grid: &GridSpec, dist: F) -> SupEstimate
where
    F: Fn(&SamplePoint) -> f64 + Sync,
{
    let prims = d.components();
    let points = grid_points(d, grid);
    let values: Vec<f64> = points.par_iter().map(&dist).collect();
    let Some(best) = argmax(&values) else {
        return SupEstimate { value: 0.0, argmax_point: Complex64::new(0.0, 0.0), grid_used: *grid, stable: true };
    };
    let mut value = values[best];
    let mut at = points[best];
    let mut previous = value;
    let rf = grid.refinement_factor.max(2);
    for level in 0..grid.max_refinements {
        let prim = prims[at.component];
        let shrink = (rf as f64).powi(level as i32);
        let hv = if is_curve(prim) { 1.0 / grid.curve_count() as f64 } else { 1.0 / grid.angular_count as f64 } / shrink;
        let hu = if is_curve(prim) { 0.0 } else { 1.0 / grid.radial_count as f64 / shrink };
        let steps = rf as i64;
        let mut patch = Vec::new();
        for a in -steps..=steps {
            let u = (at.u + hu * a as f64 / steps as f64).clamp(0.0, 1.0);
            for b in -steps..=steps {
                let mut v = at.v + hv * b as f64 / steps as f64;
                v = if is_periodic(prim) { v.rem_euclid(1.0) } else { v.clamp(0.0, 1.0) };
                patch.push(SamplePoint { z: point_at(prim, u, v), component: at.component, u, v });
            }
            if hu == 0.0 {
                break;
            }
        }
        let local: Vec<f64> = patch.par_iter().map(&dist).collect();
        previous = value;
        if let Some(i) = argmax(&local) {
            if local[i] > value {
                value = local[i];
                at = patch[i];
            }
        }
    }
    let stable = if grid.max_refinements == 0 {
        value == 0.0
    } else {
        value == 0.0 || (value - previous) / value < STABILITY_THRESHOLD
    };
    SupEstimate { value: value.clamp(0.0, 1.0), argmax_point: at.z, grid_used: *grid, stable }
}

/// Maximum of precomputed errors at fixed sample points (nothing to refine).
pub fn sup_of_samples(points: &[Complex64], errors: &[f64], grid: GridSpec) -> SupEstimate {
    match argmax(errors) {
        Some(i) => SupEstimate { value: errors[i].clamp(0.0, 1.0), argmax_point: points[i], grid_used: grid, stable: true },
        None => SupEstimate { value: 0.0, argmax_point: Complex64::new(0.0, 0.0), grid_used: grid, stable: true },
    }
}

/// `max χ(f(z), g(z))` over the grid of `d`.
pub fn sup_chordal(f: &FunctionSpec, g: &FunctionSpec, d: &DomainSpec, grid: &GridSpec) -> SupEstimate {
    sup_over(d, grid, |p| chordal_dist(f.evaluate(p.z), g.evaluate(p.z)))
}

/// Pointwise χ profile over the grid, in grid-major order.
pub fn chordal_profile(f: &FunctionSpec, g: &FunctionSpec, d: &DomainSpec, grid: &GridSpec) -> Vec<(SamplePoint, f64)> {
    let points = grid_points(d, grid);
    let values: Vec<f64> = points.par_iter().map(|p| chordal_dist(f.evaluate(p.z), g.evaluate(p.z))).collect();
    points.into_iter().zip(values).collect()
}
