//! Approximation on closed annuli: Laurent splitting, Laurent-polynomial
//! approximation, sums of approximants, and the gate for plain polynomials.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::disc::{approximate_poly, approximate_poly_on, check_eps, finish, infinity_level, ApproxResult};
use crate::error::{ApproxError, Result};
use crate::func::rational::RationalForm;
use crate::func::{classify_membership, classify_membership_with, AnnulusMode, DomainSpec, FunctionSpec, MembershipReport};
use crate::sphere::chordal_dist;
use crate::sup::{sup_over, GridSpec, SupEstimate};

/// Absolute margin added to the sum of the part errors when judging a combination.
pub const COMBINE_SLACK: f64 = 0.1;

const MID_CIRCLE_GAP: f64 = 1e-12;
const MAX_SPLIT_HALVINGS: usize = 6;

fn annulus_parts(d: &DomainSpec) -> Result<(Complex64, f64, f64)> {
    match d {
        DomainSpec::ClosedAnnulus { center, r_inner, r_outer } => {
            d.validate()?;
            Ok((*center, *r_inner, *r_outer))
        }
        other => Err(ApproxError::InvalidInput(format!("expected a closed annulus, got {other:?}"))),
    }
}

/// Splits `f = regular + principal`: the regular part is holomorphic inside
/// the outer circle's side of the mid-circle, the principal part outside it
/// and vanishes at `∞`.
pub fn laurent_decompose(f: &FunctionSpec, annulus: &DomainSpec) -> Result<(FunctionSpec, FunctionSpec)> {
    let (center, r_inner, r_outer) = annulus_parts(annulus)?;
    let form = RationalForm::from_spec(f)
        .ok_or_else(|| ApproxError::InvalidInput("the constant infinity has no Laurent decomposition".into()))?;
    let mid = (r_inner + r_outer) / 2.0;
    let mut regular = RationalForm { polys: form.polys, poles: Vec::new() };
    let mut principal = RationalForm::default();
    for t in form.poles {
        let dist = (t.p - center).norm();
        if (dist - mid).abs() < MID_CIRCLE_GAP * mid.max(1.0) {
            return Err(ApproxError::SampleHitsPole { z: t.p, distance: (dist - mid).abs() });
        }
        if dist < mid {
            principal.poles.push(t);
        } else {
            regular.poles.push(t);
        }
    }
    Ok((regular.into_spec(), principal.into_spec()))
}

/// Laurent coefficients `aₙ`, `|n| ≤ max_index`, of `f` on the annulus, about its centre.
pub fn laurent_coeffs(f: &FunctionSpec, annulus: &DomainSpec, max_index: usize) -> Result<BTreeMap<i32, Complex64>> {
    let (center, _, _) = annulus_parts(annulus)?;
    let (regular, principal) = laurent_decompose(f, annulus)?;
    let reg = RationalForm::from_spec(&regular).expect("finite").taylor(center, max_index + 1);
    // principal(c + 1/u) vanishes at u = 0; its Taylor coefficients are a_{−j}
    let pri = RationalForm::from_spec(&principal)
        .expect("finite")
        .inversion_pullback(center, Complex64::new(1.0, 0.0))
        .taylor(Complex64::new(0.0, 0.0), max_index + 1);
    let mut out = BTreeMap::new();
    for (n, a) in reg.into_iter().enumerate() {
        out.insert(n as i32, a);
    }
    for (j, a) in pri.into_iter().enumerate().skip(1) {
        out.insert(-(j as i32), a);
    }
    Ok(out)
}

fn coefficients_about(f: &FunctionSpec, center: Complex64) -> Vec<Complex64> {
    let form = RationalForm::from_spec(f).expect("polynomial approximant");
    form.taylor(center, form.poly_degree() + 1)
}

/// Approximation by Laurent polynomials `Σ_{−N}^{N} aₙ (z − c)ⁿ`.
///
/// The regular part is handled on the outer disc. The principal part becomes
/// `h(u) = principal(c + r_inner/u)` on the unit disc, which turns poles on
/// the inner circle into poles on `|u| = 1`. Both go through the disc
/// pipeline; the per-part tolerance halves until the sum verifies.
pub fn approximate_laurent(f: &FunctionSpec, annulus: &DomainSpec, eps: f64, grid: &GridSpec) -> Result<ApproxResult> {
    check_eps(eps, false)?;
    grid.validate()?;
    f.validate()?;
    let (center, r_inner, r_outer) = annulus_parts(annulus)?;
    if f.is_constant_infinity() {
        let n = infinity_level(eps);
        let q = FunctionSpec::laurent_about(center, [(0, Complex64::new(n, 0.0))].into_iter().collect());
        return finish(f, q, annulus, eps, grid, None, 0, format!("constant-infinity fast path, n = {n}"));
    }
    let report = classify_membership(f, annulus);
    if !report.member {
        return Err(ApproxError::NotMember(report.reasons.join("; ")));
    }
    let (regular, principal) = laurent_decompose(f, annulus)?;
    let outer = DomainSpec::ClosedDisc { center, radius: r_outer };
    let h = principal.inversion_pullback(center, Complex64::new(r_inner, 0.0));
    let mut part_eps = eps / 2.0;
    let mut last = 1.0;
    for _ in 0..MAX_SPLIT_HALVINGS {
        let reg = approximate_poly_on(&regular, &outer, part_eps, grid)?;
        let pri = approximate_poly(&h, part_eps, grid)?;
        let mut coeffs: BTreeMap<i32, Complex64> = BTreeMap::new();
        for (n, a) in coefficients_about(&reg.approximant, center).into_iter().enumerate() {
            coeffs.insert(n as i32, a);
        }
        let mut scale = 1.0;
        for (j, b) in coefficients_about(&pri.approximant, Complex64::new(0.0, 0.0)).into_iter().enumerate() {
            *coeffs.entry(-(j as i32)).or_default() += b * scale;
            scale *= r_inner;
        }
        coeffs.retain(|&n, a| n == 0 || *a != Complex64::new(0.0, 0.0));
        let q = FunctionSpec::laurent_about(center, coeffs);
        let notes = format!(
            "part tolerance {part_eps}; regular part: {} (degree {}); principal part: {} (degree {})",
            reg.notes, reg.degree_n, pri.notes, pri.degree_n
        );
        let degree = reg.degree_n.max(pri.degree_n);
        match finish(f, q, annulus, eps, grid, reg.dilation_r.or(pri.dilation_r), degree, notes) {
            Ok(res) => return Ok(res),
            Err(ApproxError::VerificationFailed { achieved, .. }) => last = achieved,
            Err(e) => return Err(e),
        }
        part_eps /= 2.0;
    }
    Err(ApproxError::VerificationFailed { achieved: last, eps })
}

/// Grid estimate for `χ(f + g, fA + gA)` with the prediction it is checked against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumCombination {
    pub estimate: SupEstimate,
    pub predicted_bound: f64,
    pub within_prediction: bool,
}

/// Combines approximants of `f` (infinite only on the outer circle) and
/// `g` (infinite only on the inner circle) and measures the sum.
pub fn chordal_sum_combine(
    f: &FunctionSpec,
    fa: &ApproxResult,
    g: &FunctionSpec,
    ga: &ApproxResult,
    annulus: &DomainSpec,
    grid: &GridSpec,
) -> Result<SumCombination> {
    grid.validate()?;
    let (center, r_inner, r_outer) = annulus_parts(annulus)?;
    if f.is_constant_infinity() || g.is_constant_infinity() {
        return Err(ApproxError::InvalidInput("summands must be finite somewhere; ∞ + ∞ is undefined on a whole set".into()));
    }
    let mid = (r_inner + r_outer) / 2.0;
    let tol = 1e-12;
    let in_closed = |p: &Complex64| {
        let d = (p - center).norm();
        d >= r_inner - tol && d <= r_outer + tol
    };
    for p in f.poles().iter().filter(|p| in_closed(p)) {
        if (p - center).norm() <= mid {
            return Err(ApproxError::InvalidInput(format!(
                "the first summand has a pole at {p}, off the outer side of the annulus"
            )));
        }
    }
    for p in g.poles().iter().filter(|p| in_closed(p)) {
        if (p - center).norm() >= mid {
            return Err(ApproxError::InvalidInput(format!(
                "the second summand has a pole at {p}, off the inner side of the annulus"
            )));
        }
    }
    let target = FunctionSpec::sum(vec![f.clone(), g.clone()]);
    let approx = FunctionSpec::sum(vec![fa.approximant.clone(), ga.approximant.clone()]);
    let estimate = sup_over(annulus, grid, |p| chordal_dist(target.evaluate(p.z), approx.evaluate(p.z)));
    let predicted_bound = fa.target_eps + ga.target_eps + COMBINE_SLACK;
    Ok(SumCombination { estimate, predicted_bound, within_prediction: estimate.value < predicted_bound })
}

/// Whether `f` can be a uniform limit of plain polynomials on the annulus:
/// the value `∞` is allowed on the outer circle only.
pub fn validate_polynomial_target(f: &FunctionSpec, annulus: &DomainSpec) -> Result<MembershipReport> {
    annulus_parts(annulus)?;
    Ok(classify_membership_with(f, annulus, AnnulusMode::Polynomial))
}

/// Plain polynomial approximation on the annulus, after the gate above.
pub fn approximate_polynomial_on_annulus(
    f: &FunctionSpec,
    annulus: &DomainSpec,
    eps: f64,
    grid: &GridSpec,
) -> Result<ApproxResult> {
    let (center, _, r_outer) = annulus_parts(annulus)?;
    let report = validate_polynomial_target(f, annulus)?;
    if !report.member {
        return Err(ApproxError::NotMember(report.reasons.join("; ")));
    }
    let outer = DomainSpec::ClosedDisc { center, radius: r_outer };
    let res = approximate_poly_on(f, &outer, eps, grid)?;
    finish(f, res.approximant, annulus, eps, grid, res.dilation_r, res.degree_n, res.notes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::PoleTerm;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pole(x: f64) -> FunctionSpec {
        FunctionSpec::simple_pole(c(x, 0.0), 1, c(1.0, 0.0))
    }

    fn grid() -> GridSpec {
        GridSpec::new(16, 128)
    }

    #[test]
    fn split_of_z_plus_inverse() {
        let ann = DomainSpec::annulus(0.5, 1.0);
        let f = FunctionSpec::laurent([(1, c(1.0, 0.0)), (-1, c(1.0, 0.0))].into_iter().collect());
        let (reg, pri) = laurent_decompose(&f, &ann).unwrap();
        for z in [c(0.7, 0.1), c(-0.2, 0.6)] {
            assert!((reg.evaluate(z).finite().unwrap() - z).norm() < 1e-15);
            assert!((pri.evaluate(z).finite().unwrap() - 1.0 / z).norm() < 1e-15);
        }
    }

    #[test]
    fn split_of_product_matches_partial_fractions() {
        // 1/((z − w)(z − 3)) = (1/(w − 3)) (1/(z − w) − 1/(z − 3))
        let w = c(0.1, 0.2);
        let ann = DomainSpec::annulus(0.5, 1.0);
        let k = 1.0 / (w - 3.0);
        let f = FunctionSpec::partial_fractions(
            vec![],
            vec![PoleTerm { p: w, m: 1, c: k }, PoleTerm { p: c(3.0, 0.0), m: 1, c: -k }],
        );
        let coeffs = laurent_coeffs(&f, &ann, 8).unwrap();
        let oracle = crate::func::contour_laurent_coeffs(&f, c(0.0, 0.0), 0.75, 8).unwrap();
        for n in -8..=8 {
            assert!((coeffs[&n] - oracle[&n]).norm() < 1e-8, "index {n}");
        }
        // principal coefficient of (z)^{-1-j} is k w^j
        assert!((coeffs[&-3] - k * w * w).norm() < 1e-14);
    }

    #[test]
    fn mid_circle_pole_rejected() {
        assert!(laurent_decompose(&pole(0.75), &DomainSpec::annulus(0.5, 1.0)).is_err());
    }

    #[test]
    fn two_boundary_poles() {
        let ann = DomainSpec::annulus(0.5, 1.0);
        let f = FunctionSpec::sum(vec![pole(1.0), pole(0.5)]);
        let res = approximate_laurent(&f, &ann, 0.2, &grid()).unwrap();
        assert!(res.achieved_error.value < 0.2);
        assert!(matches!(res.approximant, FunctionSpec::LaurentPoly(_)));
    }

    #[test]
    fn interior_pole_rejected() {
        let err = approximate_laurent(&pole(0.75), &DomainSpec::annulus(0.5, 1.0), 0.2, &grid()).unwrap_err();
        assert!(matches!(err, ApproxError::NotMember(_)));
    }

    #[test]
    fn infinity_is_constant() {
        let res = approximate_laurent(&FunctionSpec::infinity(), &DomainSpec::annulus(0.5, 1.0), 0.1, &grid()).unwrap();
        assert_eq!(res.degree_n, 0);
    }

    #[test]
    fn gate() {
        let ann = DomainSpec::annulus(0.5, 1.0);
        assert!(validate_polynomial_target(&pole(1.0), &ann).unwrap().member);
        assert!(validate_polynomial_target(&FunctionSpec::real_polynomial(&[1.0, 1.0]), &ann).unwrap().member);
        let bad = validate_polynomial_target(&pole(0.5), &ann).unwrap();
        assert!(!bad.member && bad.reasons[0].contains("inner circle"));
        assert!(approximate_polynomial_on_annulus(&pole(0.5), &ann, 0.2, &grid()).is_err());
        let ok = approximate_polynomial_on_annulus(&pole(1.0), &ann, 0.2, &grid()).unwrap();
        assert!(ok.achieved_error.value < 0.2);
    }

    #[test]
    fn combination_hypothesis() {
        let ann = DomainSpec::annulus(0.5, 1.0);
        let fa = approximate_laurent(&pole(1.0), &ann, 0.2, &grid()).unwrap();
        let err = chordal_sum_combine(&pole(1.0), &fa, &pole(-1.0), &fa, &ann, &grid()).unwrap_err();
        assert!(err.is_validation());
    }

    #[test]
    fn combination_with_exact_zero() {
        let ann = DomainSpec::annulus(0.5, 1.0);
        let zero = FunctionSpec::constant(c(0.0, 0.0));
        let fa = approximate_laurent(&pole(1.0), &ann, 0.2, &grid()).unwrap();
        let za = approximate_laurent(&zero, &ann, 0.2, &grid()).unwrap();
        let out = chordal_sum_combine(&pole(1.0), &fa, &zero, &za, &ann, &fa.achieved_error.grid_used).unwrap();
        assert!((out.estimate.value - fa.achieved_error.value).abs() < 1e-12);
    }
}
