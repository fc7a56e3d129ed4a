//! Points of the Riemann sphere `C ∪ {∞}` and the chordal metric on them.
//!
//! The chordal distance is evaluated through its planar formulas
//!
//! ```text
//! χ(a, b) = |a − b| / (√(1+|a|²) · √(1+|b|²))      a, b ∈ C
//! χ(a, ∞) = 1 / √(1+|a|²)
//! ```
//!
//! with both moduli rescaled by `max(1, |·|)` first, so the result stays
//! finite for inputs close to the overflow threshold.

use std::fmt;

use num_complex::Complex64;
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeTuple, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::ApproxError;

/// A point of `C ∪ {∞}`.
///
/// The finite variant never holds NaN or infinite coordinates; use
/// [`ExtendedComplex::from_complex`] to build values from raw arithmetic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedComplex {
    Finite(Complex64),
    Infinity,
}

pub use ExtendedComplex::Infinity;

impl ExtendedComplex {
    pub const ZERO: ExtendedComplex = ExtendedComplex::Finite(Complex64::new(0.0, 0.0));

    /// Wraps a complex number, sending any non-finite coordinate to `∞`.
    pub fn from_complex(z: Complex64) -> Self {
        if z.re.is_finite() && z.im.is_finite() {
            ExtendedComplex::Finite(z)
        } else {
            ExtendedComplex::Infinity
        }
    }

    pub fn real(x: f64) -> Self {
        Self::from_complex(Complex64::new(x, 0.0))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedComplex::Infinity)
    }

    pub fn finite(&self) -> Option<Complex64> {
        match *self {
            ExtendedComplex::Finite(z) => Some(z),
            ExtendedComplex::Infinity => None,
        }
    }

    /// Modulus, with `|∞| = +∞`.
    pub fn norm(&self) -> f64 {
        match self {
            ExtendedComplex::Finite(z) => z.norm(),
            ExtendedComplex::Infinity => f64::INFINITY,
        }
    }
}

impl From<Complex64> for ExtendedComplex {
    fn from(z: Complex64) -> Self {
        ExtendedComplex::from_complex(z)
    }
}

impl fmt::Display for ExtendedComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedComplex::Finite(z) => write!(f, "{}", z),
            ExtendedComplex::Infinity => write!(f, "∞"),
        }
    }
}

/// Chordal distance between two points of the sphere. Always in `[0, 1]`.
pub fn chordal_dist(a: ExtendedComplex, b: ExtendedComplex) -> f64 {
    match (a, b) {
        (ExtendedComplex::Infinity, ExtendedComplex::Infinity) => 0.0,
        (ExtendedComplex::Finite(z), ExtendedComplex::Infinity)
        | (ExtendedComplex::Infinity, ExtendedComplex::Finite(z)) => chordal_to_infinity(z),
        (ExtendedComplex::Finite(a), ExtendedComplex::Finite(b)) => chordal_finite(a, b),
    }
}

/// `χ(z, ∞) = 1/√(1+|z|²)`.
pub fn chordal_to_infinity(z: Complex64) -> f64 {
    let m = z.norm();
    if m <= 1.0 {
        1.0 / (1.0 + m * m).sqrt()
    } else {
        let inv = 1.0 / m;
        inv / (inv * inv + 1.0).sqrt()
    }
}

fn chordal_finite(a: Complex64, b: Complex64) -> f64 {
    let ma = a.norm();
    let mb = b.norm();
    let sa = ma.max(1.0);
    let sb = mb.max(1.0);
    // the product is commutative, which keeps χ(a,b) == χ(b,a) bit for bit
    let s = sa * sb;
    let num = if s.is_finite() {
        (a / s - b / s).norm()
    } else {
        (a / sa / sb - b / sa / sb).norm()
    };
    let da = ((1.0 / sa).powi(2) + (ma / sa).powi(2)).sqrt();
    let db = ((1.0 / sb).powi(2) + (mb / sb).powi(2)).sqrt();
    (num / (da * db)).min(1.0)
}

/// `1/z` on the sphere: `1/0 = ∞`, `1/∞ = 0`.
pub fn reciprocal(a: ExtendedComplex) -> ExtendedComplex {
    match a {
        ExtendedComplex::Infinity => ExtendedComplex::ZERO,
        ExtendedComplex::Finite(z) if z.re == 0.0 && z.im == 0.0 => ExtendedComplex::Infinity,
        ExtendedComplex::Finite(z) => ExtendedComplex::from_complex(z.inv()),
    }
}

/// Factor `1+M²` turning a chordal bound into a Euclidean one on the ball `|w| ≤ M`:
/// `|a − b| ≤ (1+M²)·χ(a, b)` whenever `|a|, |b| ≤ M`.
pub fn bounded_equivalence_factor(m: f64) -> f64 {
    debug_assert!(m >= 0.0, "radius must be non-negative");
    1.0 + m * m
}

/// Radius `M` such that `{∞} ∪ {|w| ≥ M}` has chordal diameter below `eps`.
///
/// Uses the bound `diam ≤ 2/√(1+M²)`, which gives `M = √(4/eps² − 1)`.
pub fn exterior_threshold(eps: f64) -> Result<f64, ApproxError> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(ApproxError::InvalidInput(format!(
            "exterior threshold needs 0 < eps <= 1, got {eps}"
        )));
    }
    Ok((4.0 / (eps * eps) - 1.0).sqrt())
}

/// Upper bound used by [`exterior_threshold`] for the diameter of `{∞} ∪ {|w| ≥ m}`.
pub fn exterior_diameter_bound(m: f64) -> f64 {
    2.0 * chordal_to_infinity(Complex64::new(m, 0.0))
}

impl Serialize for ExtendedComplex {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtendedComplex::Infinity => serializer.serialize_str("inf"),
            ExtendedComplex::Finite(z) => {
                let mut t = serializer.serialize_tuple(2)?;
                t.serialize_element(&z.re)?;
                t.serialize_element(&z.im)?;
                t.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for ExtendedComplex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct PointVisitor;

        impl<'de> Visitor<'de> for PointVisitor {
            type Value = ExtendedComplex;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a [re, im] pair or the string \"inf\"")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
                if v == "inf" {
                    Ok(ExtendedComplex::Infinity)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Self::Value, A::Error> {
                let re: f64 = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let im: f64 = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(1, &self))?;
                if seq.next_element::<f64>()?.is_some() {
                    return Err(de::Error::invalid_length(3, &self));
                }
                if !(re.is_finite() && im.is_finite()) {
                    return Err(de::Error::custom("finite points need finite coordinates"));
                }
                Ok(ExtendedComplex::Finite(Complex64::new(re, im)))
            }
        }

        deserializer.deserialize_any(PointVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ExtendedComplex {
        ExtendedComplex::Finite(Complex64::new(re, im))
    }

    /// Direct textbook formula, no rescaling. Only valid for moderate moduli.
    fn naive(a: ExtendedComplex, b: ExtendedComplex) -> f64 {
        match (a, b) {
            (Infinity, Infinity) => 0.0,
            (ExtendedComplex::Finite(z), Infinity) | (Infinity, ExtendedComplex::Finite(z)) => {
                1.0 / (1.0 + z.norm_sqr()).sqrt()
            }
            (ExtendedComplex::Finite(a), ExtendedComplex::Finite(b)) => {
                (a - b).norm() / ((1.0 + a.norm_sqr()).sqrt() * (1.0 + b.norm_sqr()).sqrt())
            }
        }
    }

    #[test]
    fn zero_to_infinity_is_one() {
        assert_eq!(chordal_dist(ExtendedComplex::ZERO, Infinity), 1.0);
        assert_eq!(chordal_dist(Infinity, ExtendedComplex::ZERO), 1.0);
    }

    #[test]
    fn identical_points() {
        assert_eq!(chordal_dist(c(0.3, -2.0), c(0.3, -2.0)), 0.0);
        assert_eq!(chordal_dist(Infinity, Infinity), 0.0);
    }

    #[test]
    fn antipodal_units() {
        assert!((chordal_dist(c(1.0, 0.0), c(-1.0, 0.0)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn large_real_to_infinity() {
        let d = chordal_dist(c(50.0, 0.0), Infinity);
        assert!((d - 1.0 / 2501f64.sqrt()).abs() < 1e-15);
        assert!((d - 0.019996).abs() < 1e-6);
    }

    #[test]
    fn rescaling_matches_naive_formula() {
        let pts = [c(0.0, 0.0), c(0.5, -0.25), c(3.0, 4.0), c(-12.0, 0.1), Infinity];
        for &a in &pts {
            for &b in &pts {
                assert!((chordal_dist(a, b) - naive(a, b)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn huge_moduli_stay_finite() {
        let big = f64::MAX / 4.0;
        let d = chordal_dist(c(big, 0.0), c(-big, big));
        assert!(d.is_finite());
        assert!(d > 0.0 && d <= 1.0);
        let d = chordal_dist(c(big, big), Infinity);
        assert!(d.is_finite() && d >= 0.0);
        assert!((chordal_dist(c(big, 0.0), c(0.0, 0.0)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn reciprocal_cases() {
        assert_eq!(reciprocal(ExtendedComplex::ZERO), Infinity);
        assert_eq!(reciprocal(Infinity), ExtendedComplex::ZERO);
        assert_eq!(reciprocal(c(2.0, 0.0)), c(0.5, 0.0));
        let z = c(0.3, 0.7);
        let back = reciprocal(reciprocal(z)).finite().unwrap();
        assert!((back - Complex64::new(0.3, 0.7)).norm() < 1e-15);
    }

    #[test]
    fn equivalence_factor() {
        assert_eq!(bounded_equivalence_factor(0.0), 1.0);
        assert_eq!(bounded_equivalence_factor(1.0), 2.0);
    }

    #[test]
    fn exterior_threshold_values() {
        assert!((exterior_threshold(1.0).unwrap() - 3f64.sqrt()).abs() < 1e-15);
        assert!((exterior_threshold(0.1).unwrap() - 399f64.sqrt()).abs() < 1e-12);
        assert!(exterior_threshold(0.0).is_err());
        assert!(exterior_threshold(-0.5).is_err());
        assert!(exterior_threshold(1.5).is_err());
    }

    #[test]
    fn non_finite_maps_to_infinity() {
        assert_eq!(ExtendedComplex::from_complex(Complex64::new(f64::NAN, 0.0)), Infinity);
        assert_eq!(ExtendedComplex::from_complex(Complex64::new(0.0, f64::INFINITY)), Infinity);
    }

    #[test]
    fn json_forms() {
        assert_eq!(serde_json::to_string(&Infinity).unwrap(), "\"inf\"");
        assert_eq!(serde_json::to_string(&c(1.5, -2.0)).unwrap(), "[1.5,-2.0]");
        let back: ExtendedComplex = serde_json::from_str("[1.5,-2.0]").unwrap();
        assert_eq!(back, c(1.5, -2.0));
        let back: ExtendedComplex = serde_json::from_str("\"inf\"").unwrap();
        assert_eq!(back, Infinity);
        assert!(serde_json::from_str::<ExtendedComplex>("\"nan\"").is_err());
        assert!(serde_json::from_str::<ExtendedComplex>("[1.0]").is_err());
    }
}
