// Polynomial approximation of 1/(z-1) on the closed unit disc by dilation and a truncated Taylor series.

use chordal_approx::{approximate_poly, FunctionSpec, GridSpec};
use num_complex::Complex64;

pub fn run_example() -> String {
    let f = FunctionSpec::simple_pole(Complex64::new(1.0, 0.0), 1, Complex64::new(1.0, 0.0));
    let grid = GridSpec::new(32, 128);
    let mut out = String::new();
    for eps in [0.2, 0.1] {
        let res = approximate_poly(&f, eps, &grid).expect("1/(z-1) belongs to the class");
        assert!(res.achieved_error.value < eps);
        out += &format!(
            "eps {eps}: dilation r = {}, degree {}, chordal error {:.4}\n",
            res.dilation_r.unwrap_or(1.0),
            res.degree_n,
            res.achieved_error.value
        );
    }
    out
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example());
}
