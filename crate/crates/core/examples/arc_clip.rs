// 1/x on the segment [-1,1]: the value at 0 is infinite, so the samples are clipped before fitting.

use chordal_approx::{approximate_on_arc_fn, DomainSpec, FunctionSpec};
use num_complex::Complex64;

pub fn run_example() -> String {
    let f = FunctionSpec::simple_pole(Complex64::new(0.0, 0.0), 1, Complex64::new(1.0, 0.0));
    let seg = DomainSpec::segment(Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0), 2);
    let res = approximate_on_arc_fn(&f, &seg, 0.3, 257).expect("arcs accept boundary poles");
    assert!(res.achieved_error.value < 0.3);
    format!("degree {}, chordal error {:.4}\n", res.degree_n, res.achieved_error.value)
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example());
}
