// Polynomial approximation of 1/(z-2) on the square [-1,1]^2.

use chordal_approx::{approximate_on_starlike, DomainSpec, FunctionSpec, GridSpec};
use num_complex::Complex64;

pub fn run_example() -> String {
    let f = FunctionSpec::simple_pole(Complex64::new(2.0, 0.0), 1, Complex64::new(1.0, 0.0));
    let res = approximate_on_starlike(&DomainSpec::square(1.0, 256), &f, 0.1, &GridSpec::new(32, 128))
        .expect("pole lies outside the square");
    assert!(res.achieved_error.value < 0.1);
    format!("degree {}, chordal error {:.2e}\n", res.degree_n, res.achieved_error.value)
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example());
}
