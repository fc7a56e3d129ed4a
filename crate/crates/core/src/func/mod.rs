//! Symbolic targets and approximants.
//!
//! Every finite [`FunctionSpec`] is a rational function, so poles are known
//! structurally: evaluation reports `∞` at a pole by comparing `z` with the
//! pole locations, never by waiting for floating-point overflow.

mod coeffs;
pub(crate) mod domain;
mod membership;
pub(crate) mod rational;

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ApproxError, Result};
use crate::sphere::ExtendedComplex;

pub use coeffs::{contour_laurent_coeffs, fft_taylor_coeffs, taylor_coeffs};
pub use domain::DomainSpec;
pub use membership::{classify_membership, classify_membership_with, AnnulusMode, MembershipReport};

/// Relative radius of the band around a pole inside which evaluation returns `∞`.
pub const POLE_TOLERANCE: f64 = 1e-14;

const ORIGIN: Complex64 = Complex64::new(0.0, 0.0);

fn is_origin(z: &Complex64) -> bool {
    z.re == 0.0 && z.im == 0.0
}

/// `Σ aⱼ (z − center)ʲ`, ascending degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    pub coeffs: Vec<Complex64>,
    #[serde(default, skip_serializing_if = "is_origin")]
    pub center: Complex64,
}

/// `Σₙ aₙ (z − center)ⁿ` over a finite set of integer exponents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaurentPoly {
    pub coeffs: BTreeMap<i32, Complex64>,
    #[serde(default, skip_serializing_if = "is_origin")]
    pub center: Complex64,
}

/// `Q(1/(z − w))` where `Q(u) = Σ qⱼ (u − q_center)ʲ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoleRational {
    pub w: Complex64,
    pub q: Vec<Complex64>,
    #[serde(default, skip_serializing_if = "is_origin")]
    pub q_center: Complex64,
}

/// One term `c / (z − p)^m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoleTerm {
    pub p: Complex64,
    pub m: u32,
    pub c: Complex64,
}

/// Polynomial part plus a sum of pole terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartialFractions {
    pub poly_part: Vec<Complex64>,
    pub poles: Vec<PoleTerm>,
}

/// A target or approximant function on (part of) the plane with values in `C ∪ {∞}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionSpec {
    Polynomial(Polynomial),
    LaurentPoly(LaurentPoly),
    PoleRational(PoleRational),
    PartialFractions(PartialFractions),
    ConstantInfinity,
    Sum(Vec<FunctionSpec>),
}

fn trim(mut coeffs: Vec<Complex64>) -> Vec<Complex64> {
    while coeffs.len() > 1 && coeffs.last().is_some_and(is_origin) {
        coeffs.pop();
    }
    if coeffs.is_empty() {
        coeffs.push(ORIGIN);
    }
    coeffs
}

fn horner(coeffs: &[Complex64], t: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(ORIGIN, |acc, &a| acc * t + a)
}

fn near_pole(z: Complex64, p: Complex64) -> bool {
    (z - p).norm() <= POLE_TOLERANCE * p.norm().max(1.0)
}

impl FunctionSpec {
    pub fn polynomial(coeffs: Vec<Complex64>) -> Self {
        FunctionSpec::Polynomial(Polynomial { coeffs: trim(coeffs), center: ORIGIN })
    }

    pub fn polynomial_about(center: Complex64, coeffs: Vec<Complex64>) -> Self {
        FunctionSpec::Polynomial(Polynomial { coeffs: trim(coeffs), center })
    }

    /// Real-coefficient convenience constructor.
    pub fn real_polynomial(coeffs: &[f64]) -> Self {
        Self::polynomial(coeffs.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    pub fn constant(c: Complex64) -> Self {
        Self::polynomial(vec![c])
    }

    pub fn laurent(coeffs: BTreeMap<i32, Complex64>) -> Self {
        Self::laurent_about(ORIGIN, coeffs)
    }

    pub fn laurent_about(center: Complex64, mut coeffs: BTreeMap<i32, Complex64>) -> Self {
        coeffs.retain(|_, a| !is_origin(a));
        FunctionSpec::LaurentPoly(LaurentPoly { coeffs, center })
    }

    pub fn pole_rational(w: Complex64, q: Vec<Complex64>) -> Self {
        FunctionSpec::PoleRational(PoleRational { w, q: trim(q), q_center: ORIGIN })
    }

    pub fn pole_rational_about(w: Complex64, q_center: Complex64, q: Vec<Complex64>) -> Self {
        FunctionSpec::PoleRational(PoleRational { w, q: trim(q), q_center })
    }

    pub fn partial_fractions(poly_part: Vec<Complex64>, poles: Vec<PoleTerm>) -> Self {
        let poly_part = if poly_part.iter().all(is_origin) { Vec::new() } else { trim(poly_part) };
        FunctionSpec::PartialFractions(PartialFractions { poly_part, poles })
    }

    /// `c / (z − p)^m`.
    pub fn simple_pole(p: Complex64, m: u32, c: Complex64) -> Self {
        Self::partial_fractions(Vec::new(), vec![PoleTerm { p, m, c }])
    }

    pub fn sum(terms: Vec<FunctionSpec>) -> Self {
        FunctionSpec::Sum(terms)
    }

    pub fn infinity() -> Self {
        FunctionSpec::ConstantInfinity
    }

    /// Whether the function is the constant `∞` (directly or as the only member of a sum).
    pub fn is_constant_infinity(&self) -> bool {
        match self {
            FunctionSpec::ConstantInfinity => true,
            FunctionSpec::Sum(terms) => terms.iter().any(FunctionSpec::is_constant_infinity),
            _ => false,
        }
    }

    /// Checks the structural invariants.
    pub fn validate(&self) -> Result<()> {
        let finite = |z: &Complex64| z.re.is_finite() && z.im.is_finite();
        let bad = |what: &str| Err(ApproxError::InvalidInput(what.to_string()));
        match self {
            FunctionSpec::Polynomial(p) => {
                if p.coeffs.is_empty() {
                    return bad("polynomial needs at least one coefficient");
                }
                if !p.coeffs.iter().all(finite) || !finite(&p.center) {
                    return bad("polynomial coefficients must be finite");
                }
            }
            FunctionSpec::LaurentPoly(l) => {
                if !l.coeffs.values().all(finite) || !finite(&l.center) {
                    return bad("Laurent coefficients must be finite");
                }
            }
            FunctionSpec::PoleRational(r) => {
                if r.q.is_empty() {
                    return bad("pole rational needs at least one coefficient");
                }
                if !r.q.iter().all(finite) || !finite(&r.w) || !finite(&r.q_center) {
                    return bad("pole rational data must be finite");
                }
            }
            FunctionSpec::PartialFractions(pf) => {
                if !pf.poly_part.iter().all(finite) {
                    return bad("polynomial part must be finite");
                }
                for (i, t) in pf.poles.iter().enumerate() {
                    if t.m == 0 {
                        return bad("pole multiplicities must be at least 1");
                    }
                    if !finite(&t.p) || !finite(&t.c) {
                        return bad("pole data must be finite");
                    }
                    if pf.poles[..i].iter().any(|s| s.p == t.p && s.m == t.m) {
                        return bad("partial fractions repeat a (pole, multiplicity) key");
                    }
                }
            }
            FunctionSpec::ConstantInfinity => {}
            FunctionSpec::Sum(terms) => {
                let infinities = terms.iter().filter(|t| matches!(t, FunctionSpec::ConstantInfinity)).count();
                if infinities > 1 || (infinities == 1 && terms.len() > 1) {
                    return bad("a sum may contain the constant infinity only on its own");
                }
                for t in terms {
                    t.validate()?;
                }
            }
        }
        Ok(())
    }

    /// Removes trailing zero coefficients from every list.
    pub fn normalized(self) -> Self {
        match self {
            FunctionSpec::Polynomial(p) => FunctionSpec::Polynomial(Polynomial { coeffs: trim(p.coeffs), ..p }),
            FunctionSpec::LaurentPoly(l) => Self::laurent_about(l.center, l.coeffs),
            FunctionSpec::PoleRational(r) => FunctionSpec::PoleRational(PoleRational { q: trim(r.q), ..r }),
            FunctionSpec::PartialFractions(pf) => Self::partial_fractions(pf.poly_part, pf.poles),
            FunctionSpec::Sum(terms) => FunctionSpec::Sum(terms.into_iter().map(Self::normalized).collect()),
            FunctionSpec::ConstantInfinity => FunctionSpec::ConstantInfinity,
        }
    }

    /// Distinct pole locations in the finite plane.
    pub fn poles(&self) -> Vec<Complex64> {
        match rational::RationalForm::from_spec(self) {
            Some(form) => form.pole_locations(),
            None => Vec::new(),
        }
    }

    /// Whether the function is a polynomial (no finite poles, not `∞`).
    pub fn is_polynomial(&self) -> bool {
        !self.is_constant_infinity() && self.poles().is_empty()
    }

    /// Value at `z`, exactly `∞` at poles.
    pub fn evaluate(&self, z: Complex64) -> ExtendedComplex {
        match self {
            FunctionSpec::Polynomial(p) => ExtendedComplex::from_complex(horner(&p.coeffs, z - p.center)),
            FunctionSpec::LaurentPoly(l) => eval_laurent(l, z),
            FunctionSpec::PoleRational(r) => {
                let has_pole = r.q.iter().skip(1).any(|a| !is_origin(a));
                if has_pole && near_pole(z, r.w) {
                    return ExtendedComplex::Infinity;
                }
                if !has_pole {
                    return ExtendedComplex::from_complex(r.q[0]);
                }
                let u = (z - r.w).inv();
                ExtendedComplex::from_complex(horner(&r.q, u - r.q_center))
            }
            FunctionSpec::PartialFractions(pf) => {
                let mut acc = horner(&pf.poly_part, z);
                for t in &pf.poles {
                    if is_origin(&t.c) {
                        continue;
                    }
                    if near_pole(z, t.p) {
                        return ExtendedComplex::Infinity;
                    }
                    acc += t.c / (z - t.p).powu(t.m);
                }
                ExtendedComplex::from_complex(acc)
            }
            FunctionSpec::ConstantInfinity => ExtendedComplex::Infinity,
            FunctionSpec::Sum(terms) => {
                let mut acc = ORIGIN;
                for t in terms {
                    match t.evaluate(z) {
                        ExtendedComplex::Infinity => return ExtendedComplex::Infinity,
                        ExtendedComplex::Finite(v) => acc += v,
                    }
                }
                ExtendedComplex::from_complex(acc)
            }
        }
    }

    /// `f(center + r (z − center))`.
    pub fn dilate(&self, center: Complex64, r: f64) -> FunctionSpec {
        self.affine_pullback(center * (1.0 - r), Complex64::new(r, 0.0))
    }

    /// `f(a + b z)`.
    pub fn affine_pullback(&self, a: Complex64, b: Complex64) -> FunctionSpec {
        match rational::RationalForm::from_spec(self) {
            Some(form) => form.affine_pullback(a, b).into_spec(),
            None => FunctionSpec::ConstantInfinity,
        }
    }

    /// `f(a + b / z)`.
    pub fn inversion_pullback(&self, a: Complex64, b: Complex64) -> FunctionSpec {
        match rational::RationalForm::from_spec(self) {
            Some(form) => form.inversion_pullback(a, b).into_spec(),
            None => FunctionSpec::ConstantInfinity,
        }
    }

    /// Number of stored coefficients, a rough size measure used in reports.
    pub fn degree(&self) -> usize {
        match self {
            FunctionSpec::Polynomial(p) => p.coeffs.len().saturating_sub(1),
            FunctionSpec::LaurentPoly(l) => l
                .coeffs
                .keys()
                .map(|n| n.unsigned_abs() as usize)
                .max()
                .unwrap_or(0),
            FunctionSpec::PoleRational(r) => r.q.len().saturating_sub(1),
            FunctionSpec::PartialFractions(pf) => pf
                .poly_part
                .len()
                .saturating_sub(1)
                .max(pf.poles.iter().map(|t| t.m as usize).max().unwrap_or(0)),
            FunctionSpec::ConstantInfinity => 0,
            FunctionSpec::Sum(terms) => terms.iter().map(FunctionSpec::degree).max().unwrap_or(0),
        }
    }
}

fn eval_laurent(l: &LaurentPoly, z: Complex64) -> ExtendedComplex {
    let t = z - l.center;
    let max_pos = l.coeffs.keys().copied().filter(|&n| n >= 0).max();
    let max_neg = l.coeffs.keys().copied().filter(|&n| n < 0).min();
    let mut acc = ORIGIN;
    if let Some(top) = max_pos {
        let dense: Vec<Complex64> = (0..=top).map(|n| l.coeffs.get(&n).copied().unwrap_or(ORIGIN)).collect();
        acc += horner(&dense, t);
    }
    if let Some(bottom) = max_neg {
        if near_pole(z, l.center) {
            return ExtendedComplex::Infinity;
        }
        let depth = bottom.unsigned_abs() as i32;
        // Σ_{k≥1} a_{−k} s^k with s = 1/t
        let mut dense = vec![ORIGIN];
        dense.extend((1..=depth).map(|k| l.coeffs.get(&-k).copied().unwrap_or(ORIGIN)));
        acc += horner(&dense, t.inv());
    }
    ExtendedComplex::from_complex(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::Infinity;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pole_rational_at_its_pole() {
        let f = FunctionSpec::pole_rational(c(1.0, 0.0), vec![c(0.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(f.evaluate(c(1.0, 0.0)), Infinity);
        assert_eq!(f.evaluate(c(0.0, 0.0)), ExtendedComplex::Finite(c(-1.0, 0.0)));
    }

    #[test]
    fn double_pole_value_at_origin() {
        let f = FunctionSpec::simple_pole(c(1.0, 0.0), 2, c(1.0, 0.0));
        assert_eq!(f.evaluate(c(0.0, 0.0)), ExtendedComplex::Finite(c(1.0, 0.0)));
        assert_eq!(f.evaluate(c(1.0, 0.0)), Infinity);
    }

    #[test]
    fn pole_band_is_structural() {
        let f = FunctionSpec::simple_pole(c(1.0, 0.0), 1, c(1.0, 0.0));
        assert_eq!(f.evaluate(c(1.0 + 1e-15, 0.0)), Infinity);
        // just outside the band the value is large but finite
        let v = f.evaluate(c(1.0 + 1e-12, 0.0));
        assert!(v.finite().unwrap().norm() > 1e11);
    }

    #[test]
    fn constant_infinity_everywhere() {
        let f = FunctionSpec::infinity();
        assert_eq!(f.evaluate(c(0.0, 0.0)), Infinity);
        assert_eq!(f.evaluate(c(7.0, -3.0)), Infinity);
    }

    #[test]
    fn laurent_evaluation() {
        let mut m = BTreeMap::new();
        m.insert(1, c(1.0, 0.0));
        m.insert(-1, c(1.0, 0.0));
        let f = FunctionSpec::laurent(m);
        let z = c(0.0, 1.0);
        let v = f.evaluate(z).finite().unwrap();
        assert!((v - (z + z.inv())).norm() < 1e-15);
        assert_eq!(f.evaluate(c(0.0, 0.0)), Infinity);
    }

    #[test]
    fn sum_evaluates_termwise() {
        let a = FunctionSpec::simple_pole(c(1.0, 0.0), 1, c(1.0, 0.0));
        let b = FunctionSpec::simple_pole(c(-1.0, 0.0), 1, c(1.0, 0.0));
        let s = FunctionSpec::sum(vec![a.clone(), b.clone()]);
        let z = c(0.0, 1.0);
        let v = s.evaluate(z).finite().unwrap();
        let w = a.evaluate(z).finite().unwrap() + b.evaluate(z).finite().unwrap();
        assert!((v - w).norm() < 1e-15);
        assert!((v - c(0.0, -1.0)).norm() < 1e-15);
        assert_eq!(s.evaluate(c(1.0, 0.0)), Infinity);
    }

    #[test]
    fn validation_rules() {
        assert!(FunctionSpec::sum(vec![FunctionSpec::infinity(), FunctionSpec::real_polynomial(&[1.0])])
            .validate()
            .is_err());
        assert!(FunctionSpec::sum(vec![FunctionSpec::infinity()]).validate().is_ok());
        let dup = FunctionSpec::partial_fractions(
            vec![],
            vec![
                PoleTerm { p: c(1.0, 0.0), m: 1, c: c(1.0, 0.0) },
                PoleTerm { p: c(1.0, 0.0), m: 1, c: c(2.0, 0.0) },
            ],
        );
        assert!(dup.validate().is_err());
        let zero_m = FunctionSpec::simple_pole(c(1.0, 0.0), 0, c(1.0, 0.0));
        assert!(zero_m.validate().is_err());
    }

    #[test]
    fn trailing_zeros_trimmed() {
        let f = FunctionSpec::polynomial(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(f, FunctionSpec::real_polynomial(&[1.0]));
    }

    #[test]
    fn json_schema_shapes() {
        let f: FunctionSpec = serde_json::from_str(r#"{"pole_rational":{"w":[1,0],"q":[[0,0],[1,0]]}}"#).unwrap();
        assert_eq!(f, FunctionSpec::pole_rational(c(1.0, 0.0), vec![c(0.0, 0.0), c(1.0, 0.0)]));
        let inf: FunctionSpec = serde_json::from_str(r#""constant_infinity""#).unwrap();
        assert_eq!(inf, FunctionSpec::ConstantInfinity);
        let l: FunctionSpec = serde_json::from_str(r#"{"laurent_poly":{"coeffs":{"-1":[1,0],"1":[1,0]}}}"#).unwrap();
        assert_eq!(l.degree(), 1);
        let text = serde_json::to_string(&FunctionSpec::real_polynomial(&[1.0, 2.0])).unwrap();
        assert_eq!(text, r#"{"polynomial":{"coeffs":[[1.0,0.0],[2.0,0.0]]}}"#);
    }

    #[test]
    fn dilation_moves_poles_outward() {
        let f = FunctionSpec::simple_pole(c(1.0, 0.0), 1, c(1.0, 0.0));
        let g = f.dilate(c(0.0, 0.0), 0.5);
        let poles = g.poles();
        assert_eq!(poles.len(), 1);
        assert!((poles[0] - c(2.0, 0.0)).norm() < 1e-15);
        let z = c(0.3, 0.2);
        let lhs = g.evaluate(z).finite().unwrap();
        let rhs = f.evaluate(z * 0.5).finite().unwrap();
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn inversion_pullback_matches_direct_evaluation() {
        let f = FunctionSpec::sum(vec![
            FunctionSpec::simple_pole(c(0.5, 0.0), 2, c(1.0, 1.0)),
            FunctionSpec::polynomial(vec![c(1.0, 0.0), c(0.0, 2.0), c(0.5, 0.0)]),
            FunctionSpec::pole_rational(c(0.0, 0.0), vec![c(0.0, 0.0), c(0.25, 0.0)]),
        ]);
        let (a, b) = (c(0.1, -0.2), c(0.5, 0.3));
        let g = f.inversion_pullback(a, b);
        for &u in &[c(0.7, 0.1), c(-0.4, 0.9), c(2.0, -1.0)] {
            let lhs = g.evaluate(u).finite().unwrap();
            let rhs = f.evaluate(a + b / u).finite().unwrap();
            assert!((lhs - rhs).norm() < 1e-11 * rhs.norm().max(1.0), "{lhs} vs {rhs}");
        }
    }
}
