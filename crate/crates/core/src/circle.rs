//! Trigonometric approximation of sphere-valued functions on the unit circle.
//!
//! Over-threshold runs are pushed onto the circle `|w| = M`, which changes
//! each sample by less than `ε/2` in χ because `{∞} ∪ {|w| ≥ M}` has chordal
//! diameter below `ε/2`. The clipped data is finite and continuous, so its
//! Fejér means converge uniformly.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::disc::{check_eps, infinity_level, ApproxResult, DEGREE_CAP};
use crate::error::{ApproxError, Result};
use crate::func::FunctionSpec;
use crate::sphere::{chordal_dist, exterior_threshold, ExtendedComplex};
use crate::sup::{sup_chordal, sup_of_samples, GridSpec};
use crate::DomainSpec;

/// Adjacent finite samples further apart than this (in χ) look discontinuous.
pub const PLAUSIBILITY_STEP: f64 = 0.5;

const MIN_SAMPLES: usize = 64;
const MAX_SAMPLES: usize = 1 << 16;

/// Values at the equispaced angles `θₖ = 2πk/K` of the unit circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<ExtendedComplex>", into = "Vec<ExtendedComplex>")]
pub struct CircleSamples {
    values: Vec<ExtendedComplex>,
}

impl TryFrom<Vec<ExtendedComplex>> for CircleSamples {
    type Error = ApproxError;

    fn try_from(values: Vec<ExtendedComplex>) -> Result<Self> {
        CircleSamples::new(values)
    }
}

impl From<CircleSamples> for Vec<ExtendedComplex> {
    fn from(s: CircleSamples) -> Self {
        s.values
    }
}

impl CircleSamples {
    pub fn new(values: Vec<ExtendedComplex>) -> Result<Self> {
        let k = values.len();
        if k < MIN_SAMPLES || !k.is_power_of_two() {
            return Err(ApproxError::InvalidInput(format!(
                "circle samples need a power-of-two count of at least {MIN_SAMPLES}, got {k}"
            )));
        }
        Ok(CircleSamples { values })
    }

    /// Samples `f(e^{iθₖ})`.
    pub fn from_fn(f: &FunctionSpec, k: usize) -> Result<Self> {
        Self::new((0..k).map(|j| f.evaluate(unit_point(j, k))).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[ExtendedComplex] {
        &self.values
    }

    pub fn points(&self) -> Vec<Complex64> {
        (0..self.len()).map(|j| unit_point(j, self.len())).collect()
    }

    pub fn all_infinite(&self) -> bool {
        self.values.iter().all(|v| v.is_infinite())
    }

    /// Count of adjacent finite pairs more than [`PLAUSIBILITY_STEP`] apart.
    pub fn plausibility_violations(&self) -> usize {
        let k = self.len();
        (0..k)
            .filter(|&j| {
                let (a, b) = (self.values[j], self.values[(j + 1) % k]);
                !a.is_infinite() && !b.is_infinite() && chordal_dist(a, b) > PLAUSIBILITY_STEP
            })
            .count()
    }

    /// The sampling scheme as a grid whose circle has exactly `K` points.
    pub fn grid(&self) -> GridSpec {
        GridSpec { radial_count: 8, angular_count: self.len() / 4, refinement_factor: 4, max_refinements: 0, phase: 0.0 }
    }
}

fn unit_point(j: usize, k: usize) -> Complex64 {
    Complex64::from_polar(1.0, TAU * j as f64 / k as f64)
}

/// Replaces every maximal run of samples that are `∞` or of modulus above `m`
/// by points of `|w| = m`, moving in angle along the shorter arc from the
/// (projected) entry value to the (projected) exit value.
///
/// Exact half-turn ties go counterclockwise.
pub fn chordal_clip(f: &CircleSamples, m: f64) -> Result<CircleSamples> {
    if !(m >= 1.0 && m.is_finite()) {
        return Err(ApproxError::InvalidInput(format!("clip modulus must be finite and at least 1, got {m}")));
    }
    let over = |v: &ExtendedComplex| v.is_infinite() || v.norm() > m;
    let k = f.len();
    let Some(start) = f.values.iter().position(|v| !over(v)) else {
        return Err(ApproxError::AllOverThreshold);
    };
    let mut out = f.values.clone();
    // walk from a finite sample so no run wraps past the starting index
    let mut i = 1;
    while i < k {
        let idx = (start + i) % k;
        if !over(&f.values[idx]) {
            i += 1;
            continue;
        }
        let mut len = 0;
        while over(&f.values[(start + i + len) % k]) {
            len += 1;
        }
        let entry = f.values[(start + i + k - 1) % k].finite().expect("bracketing sample is finite");
        let exit = f.values[(start + i + len) % k].finite().expect("bracketing sample is finite");
        for (t, w) in arc_fill(entry, exit, len, m).into_iter().enumerate() {
            out[(start + i + t) % k] = ExtendedComplex::Finite(w);
        }
        i += len;
    }
    Ok(CircleSamples { values: out })
}

/// `len` points of `|w| = m` strictly between the angles of `entry` and `exit`,
/// along the shorter arc (counterclockwise on a half-turn tie).
pub(crate) fn arc_fill(entry: Complex64, exit: Complex64, len: usize, m: f64) -> Vec<Complex64> {
    let a0 = angle_of(entry);
    let mut delta = (angle_of(exit) - a0).rem_euclid(TAU);
    if delta > PI {
        delta -= TAU;
    }
    (0..len).map(|t| Complex64::from_polar(m, a0 + delta * (t + 1) as f64 / (len + 1) as f64)).collect()
}

fn angle_of(z: Complex64) -> f64 {
    if z == Complex64::new(0.0, 0.0) {
        0.0
    } else {
        z.arg()
    }
}

/// A fitted trigonometric polynomial and how it was obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigFit {
    pub approximant: FunctionSpec,
    pub degree: usize,
    pub sample_error: f64,
    pub method: TrigMethod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrigMethod {
    Fejer,
    /// The partial Fourier sum, i.e. the discrete least-squares fit of the degree.
    LeastSquares,
}

struct Spectrum {
    coeffs: Vec<Complex64>,
    planner: FftPlanner<f64>,
}

impl Spectrum {
    fn new(values: &[Complex64]) -> Self {
        let mut planner = FftPlanner::new();
        let mut coeffs = values.to_vec();
        planner.plan_fft_forward(coeffs.len()).process(&mut coeffs);
        let scale = 1.0 / coeffs.len() as f64;
        coeffs.iter_mut().for_each(|c| *c *= scale);
        Spectrum { coeffs, planner }
    }

    fn coefficient(&self, n: i64) -> Complex64 {
        self.coeffs[n.rem_euclid(self.coeffs.len() as i64) as usize]
    }

    /// Weighted truncation evaluated back at the sample angles.
    fn synthesize(&mut self, n_max: usize, weight: impl Fn(usize) -> f64) -> (Vec<Complex64>, BTreeMap<i32, Complex64>) {
        let k = self.coeffs.len();
        let mut buf = vec![Complex64::new(0.0, 0.0); k];
        let mut terms = BTreeMap::new();
        for n in -(n_max as i64)..=(n_max as i64) {
            let c = self.coefficient(n) * weight(n.unsigned_abs() as usize);
            buf[n.rem_euclid(k as i64) as usize] = c;
            if c != Complex64::new(0.0, 0.0) || n == 0 {
                terms.insert(n as i32, c);
            }
        }
        self.planner.plan_fft_inverse(k).process(&mut buf);
        (buf, terms)
    }
}

fn sample_error(values: &[Complex64], approx: &[Complex64]) -> f64 {
    values
        .iter()
        .zip(approx)
        .map(|(a, b)| chordal_dist(ExtendedComplex::Finite(*a), ExtendedComplex::Finite(*b)))
        .fold(0.0, f64::max)
}

/// Trigonometric polynomial with sample χ error below `eps/2`.
///
/// Degrees `0, 1, 2, 4, …` are tried; at each degree both the Fejér mean and
/// the partial Fourier sum are measured and the better one is kept.
pub fn trig_fit(g: &CircleSamples, eps: f64) -> Result<TrigFit> {
    if !(eps > 0.0) {
        return Err(ApproxError::InvalidInput(format!("eps must be positive, got {eps}")));
    }
    let values: Vec<Complex64> = g
        .values
        .iter()
        .map(|v| v.finite().ok_or_else(|| ApproxError::InvalidInput("trig_approx needs finite samples".into())))
        .collect::<Result<_>>()?;
    let k = values.len();
    let cap = (k / 2 - 1).min(DEGREE_CAP);
    let mut spectrum = Spectrum::new(&values);
    let mut n = 0;
    let mut best = f64::INFINITY;
    loop {
        let (fejer_vals, fejer_terms) = spectrum.synthesize(n, |j| 1.0 - j as f64 / (n + 1) as f64);
        let (ls_vals, ls_terms) = spectrum.synthesize(n, |_| 1.0);
        let fejer_err = sample_error(&values, &fejer_vals);
        let ls_err = sample_error(&values, &ls_vals);
        let (err, terms, method) = if ls_err < fejer_err {
            (ls_err, ls_terms, TrigMethod::LeastSquares)
        } else {
            (fejer_err, fejer_terms, TrigMethod::Fejer)
        };
        best = best.min(err);
        if err < eps / 2.0 {
            return Ok(TrigFit { approximant: FunctionSpec::laurent(terms), degree: n, sample_error: err, method });
        }
        if n >= cap {
            return Err(ApproxError::DegreeCap {
                cap,
                reason: format!("best sample error {best:.4e} never fell below {:.4e}", eps / 2.0),
            });
        }
        n = if n == 0 { 1 } else { (2 * n).min(cap) };
    }
}

/// [`trig_fit`] returning only the trigonometric polynomial.
pub fn trig_approx(g: &CircleSamples, eps: f64) -> Result<FunctionSpec> {
    trig_fit(g, eps).map(|fit| fit.approximant)
}

fn infinity_on_circle(f: &CircleSamples, eps: f64) -> ApproxResult {
    let n = infinity_level(eps);
    let mut terms = BTreeMap::new();
    terms.insert(1, Complex64::new(n, 0.0));
    let q = FunctionSpec::laurent(terms);
    let points = f.points();
    let errors: Vec<f64> = points.iter().zip(&f.values).map(|(&z, &v)| chordal_dist(v, q.evaluate(z))).collect();
    ApproxResult {
        approximant: q,
        target_eps: eps,
        achieved_error: sup_of_samples(&points, &errors, f.grid()),
        dilation_r: None,
        degree_n: 1,
        notes: format!("constant-infinity fast path, Q(z) = {n} z"),
    }
}

/// Trigonometric approximation of sampled data; the error is measured on the samples.
pub fn approximate_on_circle(f: &CircleSamples, eps: f64) -> Result<ApproxResult> {
    check_eps(eps, false)?;
    if f.all_infinite() {
        return Ok(infinity_on_circle(f, eps));
    }
    let m = exterior_threshold(eps / 2.0)?;
    let g = match chordal_clip(f, m) {
        Ok(g) => g,
        // every sample is already within eps/4 of ∞
        Err(ApproxError::AllOverThreshold) => return Ok(infinity_on_circle(f, eps)),
        Err(e) => return Err(e),
    };
    let clip_error = f.values.iter().zip(&g.values).map(|(a, b)| chordal_dist(*a, *b)).fold(0.0, f64::max);
    let fit = trig_fit(&g, eps)?;
    let points = f.points();
    let errors: Vec<f64> = points.iter().zip(&f.values).map(|(&z, &v)| chordal_dist(v, fit.approximant.evaluate(z))).collect();
    let achieved_error = sup_of_samples(&points, &errors, f.grid());
    if achieved_error.value >= eps {
        return Err(ApproxError::VerificationFailed { achieved: achieved_error.value, eps });
    }
    let mut notes = format!(
        "clip modulus M = {m:.6}, clip error {clip_error:.4e}; {:?} at degree {}, sample error {:.4e}",
        fit.method, fit.degree, fit.sample_error
    );
    let jumps = f.plausibility_violations();
    if jumps > 0 {
        notes.push_str(&format!("; {jumps} adjacent sample pairs exceed the continuity check"));
    }
    Ok(ApproxResult { approximant: fit.approximant, target_eps: eps, achieved_error, dilation_r: None, degree_n: fit.degree, notes })
}

/// Samples `f` on a circle at `k` points, approximates, and verifies on a 4×
/// denser sampling of the circle. The sample count doubles on failure.
pub fn approximate_on_circle_fn(f: &FunctionSpec, circle: &DomainSpec, eps: f64, k: usize) -> Result<ApproxResult> {
    check_eps(eps, false)?;
    f.validate()?;
    let DomainSpec::Circle { center, radius } = *circle else {
        return Err(ApproxError::InvalidInput(format!("expected a circle, got {circle:?}")));
    };
    circle.validate()?;
    // work with h(u) = f(c + R u) on the unit circle
    let h = f.affine_pullback(center, Complex64::new(radius, 0.0));
    let mut k = k;
    let mut last = None;
    while k <= MAX_SAMPLES {
        let samples = CircleSamples::from_fn(&h, k)?;
        let mut res = approximate_on_circle(&samples, eps)?;
        let FunctionSpec::LaurentPoly(unit) = &res.approximant else {
            unreachable!("circle approximants are Laurent polynomials")
        };
        let scaled = unit.coeffs.iter().map(|(&n, &a)| (n, a / radius.powi(n))).collect();
        res.approximant = FunctionSpec::laurent_about(center, scaled);
        let grid = GridSpec { radial_count: 8, angular_count: k, refinement_factor: 4, max_refinements: 2, phase: 0.0 };
        let check = sup_chordal(f, &res.approximant, circle, &grid);
        if check.value < eps {
            res.notes.push_str(&format!("; built from {k} samples, verified on {}", grid.curve_count()));
            res.achieved_error = check;
            return Ok(res);
        }
        last = Some(check.value);
        k *= 2;
    }
    Err(ApproxError::VerificationFailed { achieved: last.unwrap_or(1.0), eps })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pole_samples(k: usize) -> CircleSamples {
        CircleSamples::from_fn(&FunctionSpec::simple_pole(c(1.0, 0.0), 1, c(1.0, 0.0)), k).unwrap()
    }

    #[test]
    fn sample_count_checked() {
        assert!(CircleSamples::new(vec![ExtendedComplex::ZERO; 32]).is_err());
        assert!(CircleSamples::new(vec![ExtendedComplex::ZERO; 100]).is_err());
        assert!(CircleSamples::new(vec![ExtendedComplex::ZERO; 64]).is_ok());
    }

    #[test]
    fn clip_is_identity_below_threshold() {
        let s = CircleSamples::from_fn(&FunctionSpec::real_polynomial(&[0.5, 1.0]), 64).unwrap();
        assert_eq!(chordal_clip(&s, 3.0).unwrap(), s);
    }

    #[test]
    fn clip_of_pole_stays_close() {
        let s = pole_samples(1024);
        let m = exterior_threshold(0.1).unwrap();
        let g = chordal_clip(&s, m).unwrap();
        for (a, b) in s.values().iter().zip(g.values()) {
            assert!(b.norm() <= m + 1e-12);
            assert!(chordal_dist(*a, *b) < 0.1);
            assert!(chordal_dist(*a, *b) <= 2.0 / (1.0 + m * m).sqrt() + 1e-15);
        }
    }

    #[test]
    fn clip_rejects_all_infinite() {
        let s = CircleSamples::new(vec![ExtendedComplex::Infinity; 64]).unwrap();
        assert!(matches!(chordal_clip(&s, 5.0), Err(ApproxError::AllOverThreshold)));
    }

    #[test]
    fn clip_tie_goes_counterclockwise() {
        // entry at angle 0, exit at angle π: exact tie
        let mut v = vec![ExtendedComplex::real(1.0); 64];
        v[1] = ExtendedComplex::Infinity;
        v[2] = ExtendedComplex::real(-1.0);
        for x in v.iter_mut().skip(3) {
            *x = ExtendedComplex::real(-1.0);
        }
        let g = chordal_clip(&CircleSamples::new(v).unwrap(), 2.0).unwrap();
        let z = g.values()[1].finite().unwrap();
        assert!((z - c(0.0, 2.0)).norm() < 1e-12, "{z}");
    }

    #[test]
    fn exact_trig_polynomial_recovered() {
        let f = FunctionSpec::laurent([(1, c(1.0, 0.0)), (-1, c(1.0, 0.0))].into_iter().collect());
        let s = CircleSamples::from_fn(&f, 256).unwrap();
        let fit = trig_fit(&s, 1e-9).unwrap();
        assert_eq!(fit.degree, 1);
        assert!(fit.sample_error < 1e-10);
    }

    #[test]
    fn constant_is_degree_zero() {
        let s = CircleSamples::from_fn(&FunctionSpec::constant(c(2.0, -1.0)), 64).unwrap();
        let q = trig_approx(&s, 0.1).unwrap();
        let FunctionSpec::LaurentPoly(l) = q else { panic!() };
        assert_eq!(l.coeffs.len(), 1);
        assert!((l.coeffs[&0] - c(2.0, -1.0)).norm() < 1e-14);
    }

    #[test]
    fn infinity_fast_path() {
        let s = CircleSamples::new(vec![ExtendedComplex::Infinity; 128]).unwrap();
        let res = approximate_on_circle(&s, 0.1).unwrap();
        assert_eq!(res.degree_n, 1);
        assert!((res.achieved_error.value - 1.0 / 122f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn pole_on_circle() {
        let res = approximate_on_circle(&pole_samples(1024), 0.2).unwrap();
        assert!(res.achieved_error.value < 0.2);
    }

    #[test]
    fn general_circle() {
        let f = FunctionSpec::simple_pole(c(2.0, 0.0), 1, c(1.0, 0.0));
        let circle = DomainSpec::Circle { center: c(1.0, 0.0), radius: 1.0 };
        let res = approximate_on_circle_fn(&f, &circle, 0.2, 512).unwrap();
        assert!(res.achieved_error.value < 0.2);
    }

    #[test]
    fn samples_serialize_as_array() {
        let mut v = vec![ExtendedComplex::ZERO; 64];
        v[3] = ExtendedComplex::Infinity;
        let s = CircleSamples::new(v).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.starts_with("[[0.0,0.0],") && json.contains("\"inf\""));
        let back: CircleSamples = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<CircleSamples>("[[1,0]]").is_err());
    }
}
