// Laurent approximation on the annulus 1/2 <= |z| <= 1 with poles on both boundary circles,
// plus the check that sums of approximants stay close.

use chordal_approx::{approximate_laurent, chordal_sum_combine, DomainSpec, FunctionSpec, GridSpec};
use num_complex::Complex64;

fn pole(x: f64) -> FunctionSpec {
    FunctionSpec::simple_pole(Complex64::new(x, 0.0), 1, Complex64::new(1.0, 0.0))
}

pub fn run_example() -> String {
    let ann = DomainSpec::annulus(0.5, 1.0);
    let grid = GridSpec::new(32, 128);
    let (f, g) = (pole(1.0), pole(0.5));
    let fa = approximate_laurent(&f, &ann, 0.1, &grid).expect("outer pole is allowed");
    let ga = approximate_laurent(&g, &ann, 0.1, &grid).expect("inner pole is allowed");
    let sum = chordal_sum_combine(&f, &fa, &g, &ga, &ann, &grid.finer()).expect("poles on opposite sides");
    assert!(sum.estimate.value < 0.3);
    format!(
        "1/(z-1): {:.4}\n1/(z-1/2): {:.4}\nsum: {:.4} (predicted bound {:.4})\n",
        fa.achieved_error.value, ga.achieved_error.value, sum.estimate.value, sum.predicted_bound
    )
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example());
}
