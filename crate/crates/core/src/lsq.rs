//! Weighted polynomial least squares through a truncated SVD.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::func::FunctionSpec;

/// Singular values below this fraction of the largest are dropped.
const RELATIVE_CUTOFF: f64 = 1e-12;

/// Centre and radius of the affine normalisation `t = (z − c)/s` with `|t| ≤ 1` on the points.
pub(crate) fn normalization(points: &[Complex64]) -> (Complex64, f64) {
    let (mut lo_re, mut hi_re, mut lo_im, mut hi_im) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for z in points {
        lo_re = lo_re.min(z.re);
        hi_re = hi_re.max(z.re);
        lo_im = lo_im.min(z.im);
        hi_im = hi_im.max(z.im);
    }
    let center = Complex64::new((lo_re + hi_re) / 2.0, (lo_im + hi_im) / 2.0);
    let scale = points.iter().map(|z| (z - center).norm()).fold(0.0, f64::max);
    (center, if scale > 0.0 { scale } else { 1.0 })
}

/// Minimises `Σ wₖ |P(zₖ) − yₖ|²` over polynomials of the given degree.
///
/// Returns `P` about the normalisation centre of the points.
pub(crate) fn fit_polynomial(points: &[Complex64], values: &[Complex64], weights: &[f64], degree: usize) -> FunctionSpec {
    assert_eq!(points.len(), values.len());
    assert_eq!(points.len(), weights.len());
    let (center, scale) = normalization(points);
    let rows = points.len();
    let cols = degree + 1;
    let mut a = DMatrix::<Complex64>::zeros(rows, cols);
    let mut b = DVector::<Complex64>::zeros(rows);
    for (i, ((z, y), w)) in points.iter().zip(values).zip(weights).enumerate() {
        let sw = w.sqrt();
        let t = (z - center) / scale;
        let mut power = Complex64::new(sw, 0.0);
        for j in 0..cols {
            a[(i, j)] = power;
            power *= t;
        }
        b[i] = y * sw;
    }
    let norms: Vec<f64> = (0..cols).map(|j| a.column(j).norm()).map(|n| if n > 0.0 { n } else { 1.0 }).collect();
    for (j, n) in norms.iter().enumerate() {
        a.column_mut(j).unscale_mut(*n);
    }
    let svd = a.svd(true, true);
    let top = svd.singular_values.max();
    let x = svd.solve(&b, top * RELATIVE_CUTOFF).expect("both factors were computed");
    let mut s = 1.0;
    let coeffs = (0..cols)
        .map(|j| {
            let c = x[j] / norms[j] / s;
            s *= scale;
            c
        })
        .collect();
    FunctionSpec::polynomial_about(center, coeffs)
}

/// Degrees tried by the escalating fits, capped at `cap`.
pub(crate) fn degree_schedule(cap: usize) -> impl Iterator<Item = usize> {
    [1usize, 2, 4, 8, 12, 16, 24, 32, 48, 64, 96, 128].into_iter().filter(move |&d| d <= cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_polynomial() {
        let pts: Vec<Complex64> = (0..40).map(|k| Complex64::new(-1.0 + k as f64 / 20.0, 0.3)).collect();
        let target = FunctionSpec::real_polynomial(&[1.0, -2.0, 0.5]);
        let vals: Vec<Complex64> = pts.iter().map(|&z| target.evaluate(z).finite().unwrap()).collect();
        let fit = fit_polynomial(&pts, &vals, &vec![1.0; pts.len()], 4);
        for &z in &pts {
            let d = fit.evaluate(z).finite().unwrap() - target.evaluate(z).finite().unwrap();
            assert!(d.norm() < 1e-10);
        }
    }

    #[test]
    fn normalization_covers_points() {
        let pts = [Complex64::new(1.0, 1.0), Complex64::new(3.0, 1.0)];
        let (c, s) = normalization(&pts);
        assert_eq!(c, Complex64::new(2.0, 1.0));
        assert_eq!(s, 1.0);
    }
}
