//! Uniform chordal approximation on closed discs.
//!
//! The construction: pick a dilation `r < 1` with `χ(f(z), f(rz)) < ε/2` on
//! the disc, then truncate the Taylor series of `f(r·)` so that the tail is
//! below `ε/2` in modulus. Since `χ(a, b) ≤ |a − b|` the truncation is also
//! `ε/2`-close in χ, and the triangle inequality gives `ε`.
//!
//! The tail is bounded with the Cauchy estimate `|aⱼ| ≤ M_ρ / ρʲ` on a circle
//! strictly between the dilated disc and the nearest pole; the geometric
//! sum is evaluated in closed form.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ApproxError, Result};
use crate::func::rational::RationalForm;
use crate::func::{classify_membership, DomainSpec, FunctionSpec};
use crate::sphere::{chordal_dist, ExtendedComplex};
use crate::sup::{sup_chordal, GridSpec, SupEstimate};

/// Largest truncation degree any pipeline returns.
pub const DEGREE_CAP: usize = 4096;

/// Number of steps of the dilation schedule `r_k = 1 − 2^{−k}` tried before giving up.
pub const MAX_DILATION_STEPS: usize = 24;

const QUADRATURE_START: usize = 512;
const QUADRATURE_MAX: usize = 1 << 20;
const QUADRATURE_AGREEMENT: f64 = 1e-10;

/// An approximant together with the evidence that it meets the target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproxResult {
    pub approximant: FunctionSpec,
    pub target_eps: f64,
    /// Error measured on the verification grid (finer than any construction grid).
    pub achieved_error: SupEstimate,
    pub dilation_r: Option<f64>,
    pub degree_n: usize,
    #[serde(default)]
    pub notes: String,
}

pub(crate) fn check_eps(eps: f64, allow_one: bool) -> Result<()> {
    let ok = eps > 0.0 && (eps < 1.0 || (allow_one && eps == 1.0));
    if ok {
        Ok(())
    } else {
        let range = if allow_one { "(0, 1]" } else { "(0, 1)" };
        Err(ApproxError::InvalidInput(format!("eps must lie in {range}, got {eps}")))
    }
}

fn disc_parts(d: &DomainSpec) -> Result<(Complex64, f64)> {
    match d {
        DomainSpec::ClosedDisc { center, radius } => {
            d.validate()?;
            Ok((*center, *radius))
        }
        other => Err(ApproxError::InvalidInput(format!("expected a closed disc, got {other:?}"))),
    }
}

/// Fails with `VerificationFailed` unless the estimate is below `eps`.
pub(crate) fn require_below(estimate: &SupEstimate, eps: f64) -> Result<()> {
    if estimate.value < eps {
        Ok(())
    } else {
        Err(ApproxError::VerificationFailed { achieved: estimate.value, eps })
    }
}

/// Smallest `N` with `M qᴺ⁺¹ / (1 − q) < tol`, or `None` past the cap.
pub(crate) fn truncation_degree(bound: f64, q: f64, tol: f64) -> Option<usize> {
    debug_assert!((0.0..1.0).contains(&q));
    if bound == 0.0 {
        return Some(0);
    }
    if !bound.is_finite() {
        return None;
    }
    let tail = |n: usize| bound * q.powi(n as i32 + 1) / (1.0 - q);
    if tail(0) < tol {
        return Some(0);
    }
    let estimate = ((tol * (1.0 - q) / bound).ln() / q.ln() - 1.0).ceil().max(0.0);
    if estimate > (DEGREE_CAP * 2) as f64 {
        return None;
    }
    let mut n = estimate as usize;
    while n > 0 && tail(n - 1) < tol {
        n -= 1;
    }
    while tail(n) >= tol {
        n += 1;
    }
    (n <= DEGREE_CAP).then_some(n)
}

/// Geometric tail `Σ_{j>N} M qʲ` in closed form.
pub fn cauchy_tail_bound(bound: f64, q: f64, n: usize) -> f64 {
    bound * q.powi(n as i32 + 1) / (1.0 - q)
}

/// Truncated Taylor expansion of `form` about `center`, accurate to `tol`
/// in modulus on the disc of the given radius.
///
/// Returns the coefficients and the Cauchy data `(M, q)` used for the tail.
pub(crate) fn truncated_taylor(
    form: &RationalForm,
    center: Complex64,
    radius: f64,
    cauchy_radius: f64,
    tol: f64,
) -> Result<(Vec<Complex64>, f64, f64)> {
    if form.poles.is_empty() {
        let n = form.poly_degree();
        return Ok((form.taylor(center, n + 1), 0.0, 0.0));
    }
    let bound = form.circle_max_bound(center, cauchy_radius);
    let q = radius / cauchy_radius;
    let n = truncation_degree(bound, q, tol).ok_or_else(|| ApproxError::DegreeCap {
        cap: DEGREE_CAP,
        reason: format!(
            "Cauchy tail with ratio {q:.6} and bound {bound:.3e} does not fall below {tol:.3e}; \
             a pole is too close to the dilation circle, try a larger eps"
        ),
    })?;
    Ok((form.taylor(center, n + 1), bound, q))
}

/// Dilation radius from the schedule `1 − 2^{−k}`: the first `r` whose grid
/// check `sup χ(f(z), f(c + r(z − c))) < eps/2` passes.
pub fn dilation_radius(f: &FunctionSpec, eps: f64, disc: &DomainSpec, grid: &GridSpec) -> Result<f64> {
    check_eps(eps, false)?;
    grid.validate()?;
    let (center, _) = disc_parts(disc)?;
    dilation_about(f, eps, disc, center, grid)
}

/// The same search for any domain, dilating toward `center`.
pub(crate) fn dilation_about(
    f: &FunctionSpec,
    eps: f64,
    domain: &DomainSpec,
    center: Complex64,
    grid: &GridSpec,
) -> Result<f64> {
    let mut last_sup = 1.0;
    for k in 1..=MAX_DILATION_STEPS {
        let r = 1.0 - 0.5f64.powi(k as i32);
        let dilated = f.dilate(center, r);
        last_sup = sup_chordal(f, &dilated, domain, grid).value;
        if last_sup < eps / 2.0 {
            return Ok(r);
        }
    }
    Err(ApproxError::DilationFailed { steps: MAX_DILATION_STEPS, last_sup, needed: eps / 2.0 })
}

/// Constant polynomial `n` with `χ(n, ∞) = 1/√(1+n²) < eps`.
pub fn infinity_approximant(eps: f64) -> Result<FunctionSpec> {
    check_eps(eps, true)?;
    Ok(FunctionSpec::real_polynomial(&[infinity_level(eps)]))
}

/// `n = ⌈√(1/eps² − 1)⌉ + 1`.
pub(crate) fn infinity_level(eps: f64) -> f64 {
    (1.0 / (eps * eps) - 1.0).max(0.0).sqrt().ceil() + 1.0
}

/// Closed-form error of the constant `n` against `∞`.
pub fn infinity_error(n: f64) -> f64 {
    chordal_dist(ExtendedComplex::real(n), ExtendedComplex::Infinity)
}

pub(crate) fn finish(
    target: &FunctionSpec,
    approximant: FunctionSpec,
    domain: &DomainSpec,
    eps: f64,
    grid: &GridSpec,
    dilation_r: Option<f64>,
    degree_n: usize,
    notes: String,
) -> Result<ApproxResult> {
    let achieved_error = sup_chordal(target, &approximant, domain, &grid.finer());
    require_below(&achieved_error, eps)?;
    Ok(ApproxResult { approximant, target_eps: eps, achieved_error, dilation_r, degree_n, notes })
}

/// Polynomial approximation on the closed unit disc.
pub fn approximate_poly(f: &FunctionSpec, eps: f64, grid: &GridSpec) -> Result<ApproxResult> {
    approximate_poly_on(f, &DomainSpec::unit_disc(), eps, grid)
}

/// Polynomial approximation on an arbitrary closed disc.
pub fn approximate_poly_on(f: &FunctionSpec, disc: &DomainSpec, eps: f64, grid: &GridSpec) -> Result<ApproxResult> {
    check_eps(eps, false)?;
    grid.validate()?;
    f.validate()?;
    let (center, radius) = disc_parts(disc)?;
    if f.is_constant_infinity() {
        let n = infinity_level(eps);
        let p = FunctionSpec::real_polynomial(&[n]);
        return finish(f, p, disc, eps, grid, None, 0, format!("constant-infinity fast path, n = {n}"));
    }
    let report = classify_membership(f, disc);
    if !report.member {
        return Err(ApproxError::NotMember(report.reasons.join("; ")));
    }
    if f.is_polynomial() {
        let p = match f {
            FunctionSpec::Polynomial(_) => f.clone(),
            other => RationalForm::from_spec(other).expect("finite").into_spec(),
        };
        let degree = p.degree();
        return finish(f, p, disc, eps, grid, None, degree, "target is already a polynomial".into());
    }
    let r = dilation_radius(f, eps, disc, grid)?;
    // g(u) = f(c + R r u) on |u| ≤ 1, with poles at |u| ≥ 1/r
    let g = RationalForm::from_spec(&f.affine_pullback(center, Complex64::new(radius * r, 0.0))).expect("finite");
    let cauchy_radius = (1.0 + 1.0 / r) / 2.0;
    let (coeffs, bound, q) = truncated_taylor(&g, Complex64::new(0.0, 0.0), 1.0, cauchy_radius, eps / 2.0)?;
    let n = coeffs.len() - 1;
    let mut scale = 1.0;
    let coeffs: Vec<Complex64> = coeffs
        .into_iter()
        .map(|b| {
            let v = b / scale;
            scale *= radius;
            v
        })
        .collect();
    let p = FunctionSpec::polynomial_about(center, coeffs);
    let notes = format!(
        "dilation r = {r}; Cauchy circle radius {:.6} (ratio {q:.6}, bound {bound:.4e}); tail bound {:.3e}",
        (1.0 + r) / 2.0,
        cauchy_tail_bound(bound, q, n),
    );
    finish(f, p, disc, eps, grid, Some(r), n, notes)
}

/// Approximation on the closed unit disc by polynomials in `1/(z − w)`, `|w| > 1`.
///
/// After dilation, `h(u) = f(r(w + 1/u))` is holomorphic near the image disc
/// of `|z| ≤ 1` under `u = 1/(z − w)`, and is expanded about that disc's centre.
pub fn approximate_single_pole(f: &FunctionSpec, w: Complex64, eps: f64, grid: &GridSpec) -> Result<ApproxResult> {
    check_eps(eps, false)?;
    grid.validate()?;
    f.validate()?;
    if !(w.norm() > 1.0) {
        return Err(ApproxError::InvalidInput(format!("the prescribed pole must satisfy |w| > 1, got |w| = {}", w.norm())));
    }
    let disc = DomainSpec::unit_disc();
    if f.is_constant_infinity() {
        let n = infinity_level(eps);
        let p = FunctionSpec::pole_rational(w, vec![Complex64::new(n, 0.0)]);
        return finish(f, p, &disc, eps, grid, None, 0, format!("constant-infinity fast path, n = {n}"));
    }
    let report = classify_membership(f, &disc);
    if !report.member {
        return Err(ApproxError::NotMember(report.reasons.join("; ")));
    }
    if let FunctionSpec::PoleRational(pr) = f {
        if pr.w == w {
            let degree = f.degree();
            return finish(f, f.clone(), &disc, eps, grid, None, degree, "target already has the prescribed pole".into());
        }
    }
    let r = dilation_radius(f, eps, &disc, grid)?;
    let h = RationalForm::from_spec(&f.dilate(Complex64::new(0.0, 0.0), r).inversion_pullback(w, Complex64::new(1.0, 0.0)))
        .expect("finite");
    let gap = w.norm_sqr() - 1.0;
    let image_center = -w.conj() / gap;
    let image_radius = 1.0 / gap;
    let nearest = h.pole_distance(image_center);
    if nearest <= image_radius {
        return Err(ApproxError::NotMember(
            "a pole of the dilated target maps into the image disc; the dilation did not separate it".into(),
        ));
    }
    let cauchy_radius = if nearest.is_finite() { (image_radius + nearest) / 2.0 } else { 2.0 * image_radius };
    let (q, bound, ratio) = truncated_taylor(&h, image_center, image_radius, cauchy_radius, eps / 2.0)?;
    let n = q.len() - 1;
    let p = FunctionSpec::pole_rational_about(w, image_center, q);
    let notes = format!(
        "dilation r = {r}; expansion in u = 1/(z - w) about {image_center} (image radius {image_radius:.6}, \
         ratio {ratio:.6}, bound {bound:.4e})"
    );
    finish(f, p, &disc, eps, grid, Some(r), n, notes)
}

/// Regular part at `z` of `f` near `w`, by trapezoidal quadrature of the Cauchy integral
/// `(1/2πi) ∮_{|ζ−w|=r2} f(ζ)/(ζ − z) dζ`.
pub fn cauchy_regular_part(f: &FunctionSpec, w: Complex64, r2: f64, z: Complex64) -> Result<Complex64> {
    if !(r2 > 0.0 && r2.is_finite()) {
        return Err(ApproxError::InvalidInput(format!("contour radius must be positive, got {r2}")));
    }
    if (z - w).norm() >= r2 {
        return Err(ApproxError::InvalidInput("evaluation point must lie inside the contour".into()));
    }
    let form = RationalForm::from_spec(f)
        .ok_or_else(|| ApproxError::InvalidInput("the constant infinity has no regular part".into()))?;
    let trapezoid = |n: usize| -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..n {
            let offset = Complex64::from_polar(r2, std::f64::consts::TAU * k as f64 / n as f64);
            let zeta = w + offset;
            let gap = form.pole_distance(zeta);
            let value = match f.evaluate(zeta) {
                ExtendedComplex::Finite(v) if gap >= 1e-12 => v,
                _ => return Err(ApproxError::SampleHitsPole { z: zeta, distance: gap }),
            };
            acc += value * offset / (zeta - z);
        }
        Ok(acc / n as f64)
    };
    let mut n = QUADRATURE_START;
    let mut previous = trapezoid(n)?;
    while n < QUADRATURE_MAX {
        n *= 2;
        let current = trapezoid(n)?;
        if (current - previous).norm() <= QUADRATURE_AGREEMENT * current.norm().max(1.0) {
            return Ok(current);
        }
        previous = current;
    }
    Ok(previous)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pole(x: f64) -> FunctionSpec {
        FunctionSpec::simple_pole(c(x, 0.0), 1, c(1.0, 0.0))
    }

    fn small_grid() -> GridSpec {
        GridSpec::new(32, 128)
    }

    #[test]
    fn constant_dilates_immediately() {
        let r = dilation_radius(&FunctionSpec::real_polynomial(&[3.0]), 0.1, &DomainSpec::unit_disc(), &small_grid()).unwrap();
        assert_eq!(r, 0.5);
    }

    #[test]
    fn boundary_pole_dilation_passes_grid_check() {
        let f = pole(1.0);
        let grid = small_grid();
        let r = dilation_radius(&f, 0.2, &DomainSpec::unit_disc(), &grid).unwrap();
        assert!(r > 0.0 && r < 1.0);
        let sup = sup_chordal(&f, &f.dilate(c(0.0, 0.0), r), &DomainSpec::unit_disc(), &grid).value;
        assert!(sup < 0.1);
    }

    #[test]
    fn zero_eps_rejected() {
        assert!(dilation_radius(&pole(1.0), 0.0, &DomainSpec::unit_disc(), &small_grid()).is_err());
    }

    #[test]
    fn polynomial_returned_unchanged() {
        let f = FunctionSpec::real_polynomial(&[1.0, 2.0, 3.0]);
        let res = approximate_poly(&f, 0.3, &small_grid()).unwrap();
        assert_eq!(res.approximant, f);
        assert_eq!(res.achieved_error.value, 0.0);
    }

    #[test]
    fn interior_pole_rejected() {
        let err = approximate_poly(&pole(0.5), 0.1, &small_grid()).unwrap_err();
        assert!(matches!(err, ApproxError::NotMember(_)));
    }

    #[test]
    fn boundary_pole_approximated() {
        let res = approximate_poly(&pole(1.0), 0.1, &small_grid()).unwrap();
        assert!(res.achieved_error.value < 0.1);
        assert!(matches!(res.approximant, FunctionSpec::Polynomial(_)));
    }

    #[test]
    fn tail_bound_soundness() {
        let res = approximate_poly(&pole(1.0), 0.2, &small_grid()).unwrap();
        let r = res.dilation_r.unwrap();
        let rho = (1.0 + r) / 2.0;
        // max over |z| = ρ of |1/(z − 1)| is 1/(1 − ρ)
        let bound = 1.0 / (1.0 - rho);
        let tail: f64 = ((res.degree_n + 1)..200_000).map(|j| bound * (r / rho).powi(j as i32)).sum();
        assert!(tail < 0.1, "tail {tail}");
    }

    #[test]
    fn infinity_levels() {
        assert_eq!(infinity_level(1.0), 1.0);
        assert_eq!(infinity_level(0.1), 11.0);
        assert_eq!(infinity_level(0.5), 3.0);
        assert!((infinity_error(11.0) - 1.0 / 122f64.sqrt()).abs() < 1e-15);
        assert!(infinity_approximant(0.0).is_err());
    }

    #[test]
    fn single_pole_shortcut_and_errors() {
        let w = c(2.0, 0.0);
        let f = FunctionSpec::pole_rational(w, vec![c(1.0, 0.0), c(0.5, 0.0)]);
        let res = approximate_single_pole(&f, w, 0.2, &small_grid()).unwrap();
        assert_eq!(res.approximant, f);
        assert_eq!(res.achieved_error.value, 0.0);
        assert!(approximate_single_pole(&pole(1.0), c(0.5, 0.0), 0.2, &small_grid()).is_err());
    }

    #[test]
    fn single_pole_approximation() {
        let res = approximate_single_pole(&pole(1.0), c(2.0, 0.0), 0.2, &small_grid()).unwrap();
        assert!(res.achieved_error.value < 0.2);
        let FunctionSpec::PoleRational(pr) = &res.approximant else { panic!("wrong family") };
        assert_eq!(pr.w, c(2.0, 0.0));
    }

    #[test]
    fn truncation_degree_is_minimal() {
        let n = truncation_degree(10.0, 0.9, 1e-3).unwrap();
        assert!(cauchy_tail_bound(10.0, 0.9, n) < 1e-3);
        assert!(cauchy_tail_bound(10.0, 0.9, n - 1) >= 1e-3);
        assert_eq!(truncation_degree(0.0, 0.5, 1e-3), Some(0));
        assert_eq!(truncation_degree(1.0, 0.999999, 1e-12), None);
    }

    #[test]
    fn regular_part_of_constant() {
        let v = cauchy_regular_part(&FunctionSpec::real_polynomial(&[4.0]), c(0.2, 0.0), 0.3, c(0.25, 0.05)).unwrap();
        assert!((v - c(4.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn regular_part_strips_principal_part() {
        let w = c(0.1, -0.2);
        let f = FunctionSpec::sum(vec![FunctionSpec::real_polynomial(&[2.5]), FunctionSpec::simple_pole(w, 1, c(1.0, 0.0))]);
        for &z in &[w, w + c(0.1, 0.0), w + c(0.0, -0.2)] {
            let v = cauchy_regular_part(&f, w, 0.4, z).unwrap();
            assert!((v - c(2.5, 0.0)).norm() < 1e-8);
        }
    }

    #[test]
    fn regular_part_is_constant_term() {
        let w = c(0.3, 0.0);
        let f = FunctionSpec::pole_rational(w, vec![c(0.7, -1.0), c(2.0, 0.0)]);
        let v = cauchy_regular_part(&f, w, 0.5, c(0.35, 0.1)).unwrap();
        assert!((v - c(0.7, -1.0)).norm() < 1e-8);
        assert!(cauchy_regular_part(&f, w, 0.5, c(1.0, 0.0)).is_err());
    }
}
