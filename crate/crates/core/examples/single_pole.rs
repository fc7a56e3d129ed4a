// Rational approximant keeping the pole of 1/(z-w) with |w| > 1 fixed.

use chordal_approx::{approximate_single_pole, FunctionSpec, GridSpec};
use num_complex::Complex64;

pub fn run_example() -> String {
    let w = Complex64::new(1.5, 0.5);
    let f = FunctionSpec::simple_pole(w, 1, Complex64::new(1.0, 0.0));
    let res = approximate_single_pole(&f, w, 0.05, &GridSpec::new(32, 128)).expect("pole lies outside the disc");
    assert!(res.achieved_error.value < 0.05);
    format!("pole {w}: degree {} in 1/(z-w), chordal error {:.2e}\n", res.degree_n, res.achieved_error.value)
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example());
}
