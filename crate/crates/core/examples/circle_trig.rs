// Trigonometric polynomial from 1024 samples of 1/(z-1) on the unit circle.

use chordal_approx::{approximate_on_circle, CircleSamples, FunctionSpec};
use num_complex::Complex64;

pub fn run_example() -> String {
    let f = FunctionSpec::simple_pole(Complex64::new(1.0, 0.0), 1, Complex64::new(1.0, 0.0));
    let samples = CircleSamples::from_fn(&f, 1024).expect("power of two sample count");
    let res = approximate_on_circle(&samples, 0.2).expect("samples are plausible");
    assert!(res.achieved_error.value < 0.2);
    let mut out = format!("degree {}, sample error {:.4}\n", res.degree_n, res.achieved_error.value);
    if !res.notes.is_empty() {
        out += &format!("notes: {}\n", res.notes);
    }
    out
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example());
}
