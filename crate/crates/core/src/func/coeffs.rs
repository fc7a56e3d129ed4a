use std::collections::BTreeMap;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::rational::RationalForm;
use super::FunctionSpec;
use crate::error::{ApproxError, Result};

/// Minimum distance between a contour sample and a pole.
const CONTOUR_POLE_GAP: f64 = 1e-12;

/// Exact Taylor coefficients `a_0 … a_{count−1}` of `f` about `center`.
///
/// Each pole term is expanded by the (differentiated) geometric series, so
/// the result is closed-form for every finite [`FunctionSpec`].
pub fn taylor_coeffs(f: &FunctionSpec, center: Complex64, count: usize) -> Result<Vec<Complex64>> {
    if count == 0 {
        return Err(ApproxError::InvalidInput("coefficient count must be at least 1".into()));
    }
    let form = RationalForm::from_spec(f)
        .ok_or_else(|| ApproxError::InvalidInput("the constant infinity has no Taylor expansion".into()))?;
    if form.hits_pole(center) {
        return Err(ApproxError::InvalidInput(format!("expansion center {center} is a pole")));
    }
    Ok(form.taylor(center, count))
}

fn contour_samples(f: &FunctionSpec, center: Complex64, radius: f64, n: usize) -> Result<Vec<Complex64>> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(ApproxError::InvalidInput(format!("contour radius must be positive, got {radius}")));
    }
    let form = RationalForm::from_spec(f)
        .ok_or_else(|| ApproxError::InvalidInput("cannot sample the constant infinity".into()))?;
    (0..n)
        .map(|k| {
            let z = center + Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / n as f64);
            let gap = form.pole_distance(z);
            if gap < CONTOUR_POLE_GAP {
                return Err(ApproxError::SampleHitsPole { z, distance: gap });
            }
            f.evaluate(z).finite().ok_or(ApproxError::SampleHitsPole { z, distance: gap })
        })
        .collect()
}

fn forward_dft(mut samples: Vec<Complex64>) -> Vec<Complex64> {
    let n = samples.len();
    let fft = FftPlanner::new().plan_fft_forward(n);
    fft.process(&mut samples);
    let scale = 1.0 / n as f64;
    samples.iter_mut().for_each(|s| *s *= scale);
    samples
}

fn sample_count(span: usize) -> usize {
    (4 * span).next_power_of_two().max(64)
}

/// Taylor coefficients from the Cauchy formula, sampled with an FFT on the
/// circle `|z − center| = radius`.
///
/// Independent of [`taylor_coeffs`]: only point evaluations of `f` are used.
pub fn fft_taylor_coeffs(f: &FunctionSpec, center: Complex64, radius: f64, count: usize) -> Result<Vec<Complex64>> {
    if count == 0 {
        return Err(ApproxError::InvalidInput("coefficient count must be at least 1".into()));
    }
    let n = sample_count(count);
    let spectrum = forward_dft(contour_samples(f, center, radius, n)?);
    Ok((0..count).map(|j| spectrum[j] / radius.powi(j as i32)).collect())
}

/// Laurent coefficients `a_n`, `|n| ≤ max_index`, from contour sums on `|z − center| = radius`.
pub fn contour_laurent_coeffs(
    f: &FunctionSpec,
    center: Complex64,
    radius: f64,
    max_index: usize,
) -> Result<BTreeMap<i32, Complex64>> {
    let n = sample_count(2 * max_index + 1);
    let spectrum = forward_dft(contour_samples(f, center, radius, n)?);
    let mut out = BTreeMap::new();
    for k in -(max_index as i64)..=(max_index as i64) {
        let idx = k.rem_euclid(n as i64) as usize;
        out.insert(k as i32, spectrum[idx] / radius.powi(k as i32));
    }
    Ok(out)
}
