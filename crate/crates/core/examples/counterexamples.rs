// Numerical checks showing where the classical statements fail for the chordal metric.

use chordal_approx::counterexamples::{area_mean_iterated, mean_value_pv, sup_bound_counterexample};

pub fn run_example() -> String {
    let sb = sup_bound_counterexample(100, 0.5).unwrap();
    let pv = mean_value_pv(4096).unwrap();
    let am = area_mean_iterated(256).unwrap();
    assert!((pv.value + 0.5).abs() < 1e-6);
    format!(
        "z^100 - 1/z^100: sup over the plane {}, over the annulus {:.6}\n\
         principal-value circle mean {:.9} while f(0) = {}\n\
         iterated area mean {:.6}\n",
        sb.global_sup, sb.annulus_sup, pv.value, pv.f_at_zero, am.value
    )
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example());
}
