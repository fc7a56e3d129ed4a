//! Polynomial approximation on starlike compacts, arcs and finite disjoint unions.
//!
//! Where an explicit expansion is available (every pole far enough from the
//! centroid) it is used with its tail bound. Otherwise a least-squares fit
//! stands in for the non-constructive step, and only the verified grid error
//! is trusted.

use num_complex::Complex64;

use crate::circle::arc_fill;
use crate::disc::{check_eps, dilation_about, finish, infinity_level, truncated_taylor, ApproxResult, cauchy_tail_bound};
use crate::error::{ApproxError, Result};
use crate::func::rational::RationalForm;
use crate::func::{classify_membership, DomainSpec, FunctionSpec};
use crate::lsq::{degree_schedule, fit_polynomial};
use crate::sphere::{chordal_dist, exterior_threshold, ExtendedComplex};
use crate::sup::{sup_of_samples, sup_over, GridSpec, SupEstimate};

/// Poles must satisfy `max_L |z − c| ≤ CENTROID_MARGIN · |p − c|` for the expansion path.
pub const CENTROID_MARGIN: f64 = 0.99;

/// Highest degree any least-squares fit is allowed to reach.
pub const FIT_DEGREE_CAP: usize = 96;

const BOUNDARY_SAMPLES: usize = 512;

fn star_parts(l: &DomainSpec) -> Result<(Complex64, Vec<f64>)> {
    l.validate()?;
    match l {
        DomainSpec::StarlikeCompact { center, rho } => Ok((*center, rho.clone())),
        DomainSpec::ClosedDisc { center, radius } => Ok((*center, vec![*radius; 3])),
        other => Err(ApproxError::InvalidInput(format!("expected a starlike compact, got {other:?}"))),
    }
}

fn centroid_condition(form: &RationalForm, centroid: Complex64, reach: f64) -> bool {
    form.pole_locations().iter().all(|p| reach <= CENTROID_MARGIN * (p - centroid).norm())
}

/// Polynomial approximation on a compact starlike about its centre `z₀`.
///
/// The target is dilated toward `z₀` unless its poles already satisfy the
/// centroid condition; then it is either expanded about the centroid with a
/// Cauchy tail bound, or fitted on boundary samples.
pub fn approximate_on_starlike(l: &DomainSpec, f: &FunctionSpec, eps: f64, grid: &GridSpec) -> Result<ApproxResult> {
    check_eps(eps, false)?;
    grid.validate()?;
    f.validate()?;
    let (z0, rho) = star_parts(l)?;
    if f.is_constant_infinity() {
        let n = infinity_level(eps);
        return finish(f, FunctionSpec::real_polynomial(&[n]), l, eps, grid, None, 0, format!("constant-infinity fast path, n = {n}"));
    }
    let report = classify_membership(f, l);
    if !report.member {
        return Err(ApproxError::NotMember(report.reasons.join("; ")));
    }
    if f.is_polynomial() {
        let p = RationalForm::from_spec(f).expect("finite").into_spec();
        let degree = p.degree();
        return finish(f, p, l, eps, grid, None, degree, "target is already a polynomial".into());
    }
    let centroid = DomainSpec::star_centroid(z0, &rho);
    let reach = (z0 - centroid).norm() + rho.iter().copied().fold(0.0, f64::max);
    let form = RationalForm::from_spec(f).expect("finite");
    let (dilation_r, fr) = if centroid_condition(&form, centroid, reach) {
        (None, f.clone())
    } else {
        let r = dilation_about(f, eps, l, z0, grid)?;
        (Some(r), f.dilate(z0, r))
    };
    let form_r = RationalForm::from_spec(&fr).expect("finite");
    if centroid_condition(&form_r, centroid, reach) {
        let nearest = form_r.pole_distance(centroid);
        let cauchy_radius = (reach + nearest) / 2.0;
        let (coeffs, bound, q) = truncated_taylor(&form_r, centroid, reach, cauchy_radius, eps / 2.0)?;
        let n = coeffs.len() - 1;
        let p = FunctionSpec::polynomial_about(centroid, coeffs);
        let notes = format!(
            "pole expansion about the centroid {centroid} (reach {reach:.6}, ratio {q:.6}); tail bound {:.3e}",
            cauchy_tail_bound(bound, q, n)
        );
        return finish(f, p, l, eps, grid, dilation_r, n, notes);
    }
    let points = l.boundary_samples(BOUNDARY_SAMPLES);
    let values: Vec<Complex64> = points
        .iter()
        .map(|&z| fr.evaluate(z).finite().ok_or(ApproxError::SampleHitsPole { z, distance: 0.0 }))
        .collect::<Result<_>>()?;
    let (p, degree, fit_err) = escalate_fit(&points, &values, &vec![1.0; points.len()], eps / 2.0, |a, b| (a - b).norm())?;
    let notes = format!("least-squares surrogate on {} boundary samples, degree {degree}, sample error {fit_err:.3e}", points.len());
    finish(f, p, l, eps, grid, dilation_r, degree, notes)
}

/// Fits with increasing degree until `metric(P(zₖ), yₖ) < tol` at every sample.
fn escalate_fit(
    points: &[Complex64],
    values: &[Complex64],
    weights: &[f64],
    tol: f64,
    metric: impl Fn(Complex64, Complex64) -> f64,
) -> Result<(FunctionSpec, usize, f64)> {
    let mut best = f64::INFINITY;
    let max_degree = FIT_DEGREE_CAP.min(points.len().saturating_sub(1));
    for degree in degree_schedule(max_degree) {
        let p = fit_polynomial(points, values, weights, degree);
        let err = points
            .iter()
            .zip(values)
            .map(|(&z, &y)| p.evaluate(z).finite().map_or(f64::INFINITY, |v| metric(v, y)))
            .fold(0.0, f64::max);
        if err < tol {
            return Ok((p, degree, err));
        }
        best = best.min(err);
    }
    Err(ApproxError::DegreeCap {
        cap: max_degree,
        reason: format!("least-squares error {best:.4e} stayed above {tol:.4e}"),
    })
}

fn arc_points(arc: &DomainSpec) -> Result<&[Complex64]> {
    arc.validate()?;
    match arc {
        DomainSpec::Arc { points } => Ok(points),
        other => Err(ApproxError::InvalidInput(format!("expected an arc, got {other:?}"))),
    }
}

/// Clips sampled arc data at modulus `m`: runs of `∞` or `|v| > m` move onto
/// `|w| = m` along circular arcs between the bracketing values. A run at an
/// end of the arc keeps the angle of its single neighbour.
pub fn clip_arc_samples(values: &[ExtendedComplex], m: f64) -> Result<Vec<Complex64>> {
    let over = |v: &ExtendedComplex| v.is_infinite() || v.norm() > m;
    if values.iter().all(over) {
        return Err(ApproxError::AllOverThreshold);
    }
    let mut out = Vec::with_capacity(values.len());
    let mut i = 0;
    while i < values.len() {
        if let Some(v) = values[i].finite().filter(|_| !over(&values[i])) {
            out.push(v);
            i += 1;
            continue;
        }
        let len = values[i..].iter().take_while(|v| over(v)).count();
        let entry = i.checked_sub(1).and_then(|j| values[j].finite());
        let exit = values.get(i + len).and_then(|v| v.finite());
        let (a, b) = match (entry, exit) {
            (Some(a), Some(b)) => (a, b),
            (Some(a), None) => (a, a),
            (None, Some(b)) => (b, b),
            (None, None) => unreachable!("some sample is below the threshold"),
        };
        out.extend(arc_fill(a, b, len, m));
        i += len;
    }
    Ok(out)
}

fn chi(a: Complex64, b: Complex64) -> f64 {
    chordal_dist(ExtendedComplex::Finite(a), ExtendedComplex::Finite(b))
}

/// Polynomial approximation of sampled data on an arc; `values[k]` belongs to
/// the arc's `k`-th vertex. The error is measured on the samples.
pub fn approximate_on_arc(arc: &DomainSpec, values: &[ExtendedComplex], eps: f64) -> Result<ApproxResult> {
    check_eps(eps, false)?;
    let points = arc_points(arc)?;
    if points.len() != values.len() {
        return Err(ApproxError::InvalidInput(format!("{} arc points but {} samples", points.len(), values.len())));
    }
    let grid = GridSpec { radial_count: 8, angular_count: 8, refinement_factor: 2, max_refinements: 0, phase: 0.0 };
    let measure = |p: &FunctionSpec| -> SupEstimate {
        let errors: Vec<f64> = points.iter().zip(values).map(|(&z, &v)| chordal_dist(v, p.evaluate(z))).collect();
        sup_of_samples(points, &errors, grid)
    };
    let m = exterior_threshold(eps / 2.0)?;
    let clipped = match clip_arc_samples(values, m) {
        Ok(c) => c,
        Err(ApproxError::AllOverThreshold) => {
            let n = infinity_level(eps);
            let p = FunctionSpec::real_polynomial(&[n]);
            let achieved_error = measure(&p);
            return Ok(ApproxResult {
                approximant: p,
                target_eps: eps,
                achieved_error,
                dilation_r: None,
                degree_n: 0,
                notes: format!("every sample is near ∞; constant n = {n}"),
            });
        }
        Err(e) => return Err(e),
    };
    // χ-weighting: large values need less absolute accuracy
    let weights: Vec<f64> = clipped.iter().map(|v| 1.0 / (1.0 + v.norm_sqr())).collect();
    let (p, degree, fit_err) = escalate_fit(points, &clipped, &weights, eps / 2.0, chi)?;
    let achieved_error = measure(&p);
    if achieved_error.value >= eps {
        return Err(ApproxError::VerificationFailed { achieved: achieved_error.value, eps });
    }
    Ok(ApproxResult {
        approximant: p,
        target_eps: eps,
        achieved_error,
        dilation_r: None,
        degree_n: degree,
        notes: format!("clip modulus M = {m:.6}; weighted least squares, degree {degree}, sample χ error {fit_err:.4e}"),
    })
}

/// Samples `f` at `count` points of the arc, approximates, and verifies on a
/// 4× denser sampling.
pub fn approximate_on_arc_fn(f: &FunctionSpec, arc: &DomainSpec, eps: f64, count: usize) -> Result<ApproxResult> {
    f.validate()?;
    arc_points(arc)?;
    if count < 8 {
        return Err(ApproxError::InvalidInput(format!("need at least 8 arc samples, got {count}")));
    }
    let points: Vec<Complex64> = (0..count).map(|k| arc.arc_point(k as f64 / (count - 1) as f64)).collect();
    let values: Vec<ExtendedComplex> = points.iter().map(|&z| f.evaluate(z)).collect();
    let sampled = DomainSpec::Arc { points };
    let mut res = approximate_on_arc(&sampled, &values, eps)?;
    let grid = GridSpec { radial_count: 8, angular_count: count - 1, refinement_factor: 4, max_refinements: 2, phase: 0.0 };
    let check = sup_over(arc, &grid, |s| chordal_dist(f.evaluate(s.z), res.approximant.evaluate(s.z)));
    if check.value >= eps {
        return Err(ApproxError::VerificationFailed { achieved: check.value, eps });
    }
    res.notes.push_str(&format!("; built from {count} samples, verified on {}", grid.curve_count() + 1));
    res.achieved_error = check;
    Ok(res)
}

/// One polynomial for a finite union of pairwise disjoint compacts, given
/// verified per-part approximants `Pᵢ`.
///
/// `P` is fitted to the `Pᵢ` on the parts' boundaries until
/// `max |P − Pᵢ| < eps/2` there; the reported error is
/// `max_i (errᵢ + sup_{Lᵢ} χ(Pᵢ, P))`, a bound on `χ(f, P)` by the triangle
/// inequality.
pub fn approximate_on_disjoint_union(parts: &[(DomainSpec, ApproxResult)], eps: f64, grid: &GridSpec) -> Result<ApproxResult> {
    check_eps(eps, false)?;
    grid.validate()?;
    if parts.is_empty() {
        return Err(ApproxError::InvalidInput("no parts given".into()));
    }
    for (d, _) in parts {
        if matches!(d, DomainSpec::DisjointUnion(_)) {
            return Err(ApproxError::InvalidInput("parts must not be unions themselves".into()));
        }
    }
    if parts.len() == 1 {
        return Ok(parts[0].1.clone());
    }
    let union = DomainSpec::DisjointUnion(parts.iter().map(|(d, _)| d.clone()).collect());
    union.validate()?;
    let mut points = Vec::new();
    let mut values = Vec::new();
    for (d, res) in parts {
        for z in d.boundary_samples(BOUNDARY_SAMPLES) {
            let v = res.approximant.evaluate(z).finite().ok_or(ApproxError::SampleHitsPole { z, distance: 0.0 })?;
            points.push(z);
            values.push(v);
        }
    }
    let separation = separation(parts);
    let (p, degree, fit_err) = escalate_fit(&points, &values, &vec![1.0; points.len()], eps / 2.0, |a, b| (a - b).norm())
        .map_err(|e| match e {
            ApproxError::DegreeCap { cap, reason } => {
                ApproxError::DegreeCap { cap, reason: format!("{reason}; minimum part separation {separation:.4e}") }
            }
            other => other,
        })?;
    let verify = grid.finer();
    let mut worst: Option<SupEstimate> = None;
    for (d, res) in parts {
        let mut est = sup_over(d, &verify, |s| chordal_dist(res.approximant.evaluate(s.z), p.evaluate(s.z)));
        est.value = (est.value + res.achieved_error.value).min(1.0);
        if worst.is_none_or(|w| est.value > w.value) {
            worst = Some(est);
        }
    }
    let achieved_error = worst.expect("at least two parts");
    if achieved_error.value >= eps {
        return Err(ApproxError::VerificationFailed { achieved: achieved_error.value, eps });
    }
    Ok(ApproxResult {
        approximant: p,
        target_eps: eps,
        achieved_error,
        dilation_r: None,
        degree_n: degree,
        notes: format!(
            "least-squares fit to {} part approximants, degree {degree}, boundary error {fit_err:.3e}, separation {separation:.4}",
            parts.len()
        ),
    })
}

fn separation(parts: &[(DomainSpec, ApproxResult)]) -> f64 {
    let samples: Vec<Vec<Complex64>> = parts.iter().map(|(d, _)| d.boundary_samples(256)).collect();
    let mut best = f64::INFINITY;
    for i in 0..samples.len() {
        for j in i + 1..samples.len() {
            best = best.min(crate::func::domain::min_separation(&samples[i], &samples[j]));
        }
    }
    best
}

/// Approximates `f` on each component of a disjoint union to `eps/2`, then joins the pieces.
pub fn approximate_on_union_fn(f: &FunctionSpec, union: &DomainSpec, eps: f64, grid: &GridSpec) -> Result<ApproxResult> {
    check_eps(eps, false)?;
    union.validate()?;
    let DomainSpec::DisjointUnion(_) = union else {
        return Err(ApproxError::InvalidInput(format!("expected a disjoint union, got {union:?}")));
    };
    let mut parts = Vec::new();
    for d in union.components() {
        let res = match d {
            DomainSpec::ClosedDisc { .. } | DomainSpec::StarlikeCompact { .. } => approximate_on_starlike(d, f, eps / 2.0, grid)?,
            DomainSpec::Arc { .. } => approximate_on_arc_fn(f, d, eps / 2.0, 4 * grid.angular_count + 1)?,
            other => {
                return Err(ApproxError::Unsupported(format!("union components must be discs, starlike compacts or arcs, got {other:?}")))
            }
        };
        parts.push((d.clone(), res));
    }
    let mut res = approximate_on_disjoint_union(&parts, eps, grid)?;
    let direct = sup_over(union, &grid.finer(), |s| chordal_dist(f.evaluate(s.z), res.approximant.evaluate(s.z)));
    if direct.value >= eps {
        return Err(ApproxError::VerificationFailed { achieved: direct.value, eps });
    }
    res.notes.push_str(&format!("; direct grid error {:.4e}", direct.value));
    res.achieved_error = direct;
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn grid() -> GridSpec {
        GridSpec::new(16, 128)
    }

    fn pole(x: f64) -> FunctionSpec {
        FunctionSpec::simple_pole(c(x, 0.0), 1, c(1.0, 0.0))
    }

    #[test]
    fn square_uses_expansion() {
        let sq = DomainSpec::square(1.0, 64);
        let res = approximate_on_starlike(&sq, &pole(2.0), 0.1, &grid()).unwrap();
        assert!(res.achieved_error.value < 0.1);
        assert!(res.notes.contains("expansion"), "{}", res.notes);
    }

    #[test]
    fn disc_specialization() {
        let res = approximate_on_starlike(&DomainSpec::unit_disc(), &pole(1.0), 0.2, &grid()).unwrap();
        assert!(res.achieved_error.value < 0.2);
    }

    #[test]
    fn infinity_on_square() {
        let res = approximate_on_starlike(&DomainSpec::square(1.0, 64), &FunctionSpec::infinity(), 0.1, &grid()).unwrap();
        assert_eq!(res.approximant, FunctionSpec::real_polynomial(&[11.0]));
    }

    #[test]
    fn arc_clip_handles_ends() {
        let vals = vec![ExtendedComplex::Infinity, ExtendedComplex::real(2.0), ExtendedComplex::Infinity];
        let out = clip_arc_samples(&vals, 3.0).unwrap();
        assert!((out[0] - c(3.0, 0.0)).norm() < 1e-12);
        assert!((out[2] - c(3.0, 0.0)).norm() < 1e-12);
        assert!(matches!(clip_arc_samples(&[ExtendedComplex::Infinity; 4], 3.0), Err(ApproxError::AllOverThreshold)));
    }

    #[test]
    fn exponential_on_segment() {
        // e^z through its Taylor polynomial of degree 30, which is e^z to machine precision on [−1, 1]
        let mut coeffs = vec![1.0];
        for k in 1..30 {
            coeffs.push(coeffs[k - 1] / k as f64);
        }
        let f = FunctionSpec::real_polynomial(&coeffs);
        let seg = DomainSpec::segment(c(-1.0, 0.0), c(1.0, 0.0), 2);
        let res = approximate_on_arc_fn(&f, &seg, 2e-6, 129).unwrap();
        assert!(res.degree_n <= 16);
        assert!(res.achieved_error.value < 2e-6);
    }

    #[test]
    fn two_discs() {
        let a = DomainSpec::ClosedDisc { center: c(-2.0, 0.0), radius: 0.5 };
        let b = DomainSpec::ClosedDisc { center: c(2.0, 0.0), radius: 0.5 };
        let pa = crate::approximate_poly_on(&FunctionSpec::real_polynomial(&[0.0]), &a, 0.1, &grid()).unwrap();
        let pb = crate::approximate_poly_on(&FunctionSpec::real_polynomial(&[1.0]), &b, 0.1, &grid()).unwrap();
        let res = approximate_on_disjoint_union(&[(a.clone(), pa.clone()), (b, pb)], 0.2, &grid()).unwrap();
        assert!(res.achieved_error.value < 0.2);
        assert!(matches!(res.approximant, FunctionSpec::Polynomial(_)));
        let single = approximate_on_disjoint_union(&[(a.clone(), pa.clone())], 0.2, &grid()).unwrap();
        assert_eq!(single, pa);
        let overlapping = DomainSpec::ClosedDisc { center: c(-1.8, 0.0), radius: 0.5 };
        assert!(approximate_on_disjoint_union(&[(a, pa.clone()), (overlapping, pa)], 0.2, &grid()).is_err());
    }
}
