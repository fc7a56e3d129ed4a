// One polynomial that is near 0 on one disc and near 1 on another.

use chordal_approx::{approximate_on_disjoint_union, approximate_poly_on, DomainSpec, FunctionSpec, GridSpec};
use num_complex::Complex64;

pub fn run_example() -> String {
    let grid = GridSpec::new(32, 128);
    let a = DomainSpec::ClosedDisc { center: Complex64::new(-2.0, 0.0), radius: 0.5 };
    let b = DomainSpec::ClosedDisc { center: Complex64::new(2.0, 0.0), radius: 0.5 };
    let pa = approximate_poly_on(&FunctionSpec::real_polynomial(&[0.0]), &a, 0.1, &grid).unwrap();
    let pb = approximate_poly_on(&FunctionSpec::real_polynomial(&[1.0]), &b, 0.1, &grid).unwrap();
    let res = approximate_on_disjoint_union(&[(a, pa), (b, pb)], 0.2, &grid).expect("discs are separated");
    assert!(res.achieved_error.value < 0.2);
    format!("degree {}, error bound {:.4}\n", res.degree_n, res.achieved_error.value)
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example());
}
