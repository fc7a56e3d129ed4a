//! Numeric counterexamples: sup bounds that fail for `∞`-valued limits,
//! a principal-value mean that misses `f(0)`, an area mean that does not,
//! and functions with prescribed boundary poles.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ApproxError, Result};
use crate::func::{classify_membership, DomainSpec, FunctionSpec, PoleTerm};
use crate::sphere::{chordal_dist, ExtendedComplex};
use crate::sup::{sup_chordal, GridSpec};

/// One computed quantity against its expected value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub quantity: String,
    pub computed: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(quantity: &str, computed: f64, expected: f64, tolerance: f64) -> Self {
        Check { quantity: quantity.into(), computed, expected, tolerance, pass: (computed - expected).abs() <= tolerance }
    }

    /// Passes when `computed < bound`.
    pub fn below(quantity: &str, computed: f64, bound: f64) -> Self {
        Check { quantity: quantity.into(), computed, expected: 0.0, tolerance: bound, pass: computed < bound }
    }
}

/// Report for one counterexample; the headline fields repeat the first check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub name: String,
    pub computed: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub notes: String,
}

impl CounterexampleReport {
    pub fn new(name: &str, checks: Vec<Check>, notes: String) -> Self {
        let head = checks.first().cloned().expect("at least one check");
        CounterexampleReport {
            name: name.into(),
            computed: head.computed,
            expected: head.expected,
            tolerance: head.tolerance,
            pass: checks.iter().all(|c| c.pass),
            checks,
            notes,
        }
    }
}

/// Grid sups of `χ(nz, ∞)` over the disc and over `r ≤ |z| ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupBound {
    pub global_sup: f64,
    pub annulus_sup: f64,
}

/// `f_n(z) = nz` against `g ≡ ∞`: the disc sup stays 1 while the sup over
/// the annulus `r ≤ |z| ≤ 1` is `1/√(1 + n²r²)`, so no constant bounds the
/// former by the latter.
pub fn sup_bound_counterexample(n: u32, r: f64) -> Result<SupBound> {
    if n == 0 {
        return Err(ApproxError::InvalidInput("n must be at least 1".into()));
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(ApproxError::InvalidInput(format!("r must lie in (0, 1), got {r}")));
    }
    let f_n = FunctionSpec::real_polynomial(&[0.0, n as f64]);
    let g = FunctionSpec::infinity();
    let grid = GridSpec::new(32, 64);
    let global_sup = sup_chordal(&f_n, &g, &DomainSpec::unit_disc(), &grid).value;
    let annulus_sup = sup_chordal(&f_n, &g, &DomainSpec::annulus(r, 1.0), &grid).value;
    Ok(SupBound { global_sup, annulus_sup })
}

/// Closed forms for [`sup_bound_counterexample`].
pub fn sup_bound_expected(n: u32, r: f64) -> SupBound {
    SupBound {
        global_sup: chordal_dist(ExtendedComplex::ZERO, ExtendedComplex::Infinity),
        annulus_sup: chordal_dist(ExtendedComplex::real(n as f64 * r), ExtendedComplex::Infinity),
    }
}

/// `1/(e^{iθ} − 1)` with the denominator written as `−2 sin²(θ/2) + i sin θ`
/// to avoid cancellation for small `θ`.
pub fn pv_integrand(theta: f64) -> Complex64 {
    let half = (theta / 2.0).sin();
    Complex64::new(1.0, 0.0) / Complex64::new(-2.0 * half * half, theta.sin())
}

/// `(1/2π) ∫_ε^{2π−ε} 1/(e^{iθ} − 1) dθ`.
///
/// Each half is integrated in the variable `s` with `θ = ε (π/ε)^s`, which
/// makes the integrand smooth; the two halves use mirrored nodes so the odd
/// imaginary part cancels.
pub fn truncated_mean(eps: f64, quad_points: usize) -> Complex64 {
    let intervals = (quad_points / 2).max(2) & !1;
    let log_span = (PI / eps).ln();
    let h = 1.0 / intervals as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..=intervals {
        let w = if k == 0 || k == intervals {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let theta = eps * (log_span * k as f64 * h).exp();
        let jac = theta * log_span;
        acc += (pv_integrand(theta) + pv_integrand(TAU - theta)) * (w * jac);
    }
    acc * (h / 3.0) / TAU
}

/// Principal-value mean over the unit circle of `1/(z − 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PvMean {
    pub value: f64,
    pub imag: f64,
    /// `(ε, truncated mean)` for `ε = 2^{−k}`, `k = 4 … 12`.
    pub estimates: Vec<(f64, Complex64)>,
    pub f_at_zero: f64,
}

/// Richardson extrapolation to `ε → 0` from the last three values of a
/// sequence with halving steps, assuming an expansion in powers of `ε`.
fn richardson3(a: Complex64, b: Complex64, c: Complex64) -> Complex64 {
    let first = 2.0 * b - a;
    let second = 2.0 * c - b;
    (4.0 * second - first) / 3.0
}

pub fn mean_value_pv(quad_points: usize) -> Result<PvMean> {
    if quad_points < 1024 {
        return Err(ApproxError::InvalidInput(format!("need at least 1024 quadrature points, got {quad_points}")));
    }
    let estimates: Vec<(f64, Complex64)> = (4..=12)
        .map(|k| {
            let eps = 0.5f64.powi(k);
            (eps, truncated_mean(eps, quad_points))
        })
        .collect();
    let n = estimates.len();
    let limit = richardson3(estimates[n - 3].1, estimates[n - 2].1, estimates[n - 1].1);
    let f0 = boundary_pole_function(&[Complex64::new(1.0, 0.0)], &[1])?
        .evaluate(Complex64::new(0.0, 0.0))
        .finite()
        .expect("finite at the origin")
        .re;
    Ok(PvMean { value: limit.re, imag: limit.im, estimates, f_at_zero: f0 })
}

/// Largest `|Re(1/(e^{iθ} − 1)) + 1/2|` over the given angles.
pub fn re_identity_deviation(angles: &[f64]) -> f64 {
    angles.iter().map(|&t| (pv_integrand(t).re + 0.5).abs()).fold(0.0, f64::max)
}

fn area_target(z: Complex64) -> Complex64 {
    let d = z - 1.0;
    Complex64::new(1.0, 0.0) / (d * d)
}

/// `∫_0^{2π} f(re^{iθ}) dθ` for `f = 1/(z − 1)²`, trapezoidal with doubling
/// until two levels agree to `1e−13` relative.
pub fn inner_circle_integral(r: f64) -> Complex64 {
    let trapezoid = |m: usize| -> Complex64 {
        let sum: Complex64 = (0..m).map(|k| area_target(Complex64::from_polar(r, TAU * k as f64 / m as f64))).sum();
        sum * (TAU / m as f64)
    };
    let mut m = 256;
    let mut prev = trapezoid(m);
    while m < 1 << 22 {
        m *= 2;
        let next = trapezoid(m);
        if (next - prev).norm() <= 1e-13 * next.norm().max(1.0) {
            return next;
        }
        prev = next;
    }
    prev
}

/// Iterated area mean `(1/π) ∫_0^1 ∫_0^{2π} f(re^{iθ}) dθ r dr` of `1/(z − 1)²`,
/// which is not integrable on the disc; the outer integral stops at `1 − δ`
/// and is extrapolated in `δ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AreaMean {
    pub value: f64,
    pub imag: f64,
    pub estimates: Vec<(f64, Complex64)>,
}

pub fn area_mean_iterated(radial_points: usize) -> Result<AreaMean> {
    if radial_points < 256 {
        return Err(ApproxError::InvalidInput(format!("need at least 256 radial points, got {radial_points}")));
    }
    let intervals = radial_points & !1;
    let truncated = |delta: f64| -> Complex64 {
        let top = 1.0 - delta;
        let h = top / intervals as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..=intervals {
            let w = if k == 0 || k == intervals {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            let r = k as f64 * h;
            acc += inner_circle_integral(r) * (w * r);
        }
        acc * (h / 3.0) / PI
    };
    let estimates: Vec<(f64, Complex64)> = (3..=5)
        .map(|k| {
            let delta = 0.5f64.powi(k);
            (delta, truncated(delta))
        })
        .collect();
    let limit = richardson3(estimates[0].1, estimates[1].1, estimates[2].1);
    Ok(AreaMean { value: limit.re, imag: limit.im, estimates })
}

/// `Σⱼ 1/(z − ζⱼ)^{mⱼ}` for distinct unimodular `ζⱼ`: finite on the open disc
/// and infinite on the closed disc exactly at the `ζⱼ`.
pub fn boundary_pole_function(points: &[Complex64], multiplicities: &[u32]) -> Result<FunctionSpec> {
    if points.is_empty() {
        return Err(ApproxError::InvalidInput("the pole set must be nonempty".into()));
    }
    if points.len() != multiplicities.len() {
        return Err(ApproxError::InvalidInput(format!(
            "{} points but {} multiplicities",
            points.len(),
            multiplicities.len()
        )));
    }
    for (i, z) in points.iter().enumerate() {
        if (z.norm() - 1.0).abs() > 1e-12 {
            return Err(ApproxError::InvalidInput(format!("point {z} is not on the unit circle")));
        }
        if points[..i].contains(z) {
            return Err(ApproxError::InvalidInput(format!("point {z} is repeated")));
        }
    }
    if multiplicities.contains(&0) {
        return Err(ApproxError::InvalidInput("multiplicities must be positive".into()));
    }
    let poles = points.iter().zip(multiplicities).map(|(&p, &m)| PoleTerm { p, m, c: Complex64::new(1.0, 0.0) }).collect();
    let f = FunctionSpec::partial_fractions(vec![], poles);
    debug_assert!(classify_membership(&f, &DomainSpec::unit_disc()).member);
    Ok(f)
}
