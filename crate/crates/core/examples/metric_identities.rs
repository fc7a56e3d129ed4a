// The chordal metric on a few points, including infinity.

use chordal_approx::sphere::reciprocal;
use chordal_approx::{chordal_dist, ExtendedComplex};
use num_complex::Complex64;

pub fn run_example() -> String {
    let pts = [
        ExtendedComplex::ZERO,
        ExtendedComplex::Finite(Complex64::new(1.0, 0.0)),
        ExtendedComplex::Finite(Complex64::new(0.0, 3.0)),
        ExtendedComplex::Infinity,
    ];
    let mut out = String::new();
    for a in pts {
        for b in pts {
            let d = chordal_dist(a, b);
            let inv = chordal_dist(reciprocal(a), reciprocal(b));
            assert!((d - inv).abs() < 1e-15);
            out += &format!("chi({a}, {b}) = {d:.6}\n");
        }
    }
    out
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example());
}
