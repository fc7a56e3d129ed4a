//! Uniform approximation of sphere-valued analytic functions in the chordal metric.
//!
//! Targets are [`FunctionSpec`] values (polynomials, Laurent polynomials,
//! rational functions with a single pole, partial fractions, the constant
//! `∞`, and sums). Domains are [`DomainSpec`] values. Every pipeline returns an
//! [`ApproxResult`] whose error was measured on a grid finer than the one used
//! for construction.

pub mod annulus;
pub mod circle;
pub mod cli;
pub mod counterexamples;
pub mod disc;
pub mod error;
pub mod func;
mod lsq;
pub mod mergelyan;
pub mod report;
pub mod sphere;
pub mod sup;

pub use annulus::{approximate_laurent, approximate_polynomial_on_annulus, chordal_sum_combine, laurent_decompose};
pub use circle::{approximate_on_circle, approximate_on_circle_fn, chordal_clip, trig_approx, CircleSamples};
pub use disc::{approximate_poly, approximate_poly_on, approximate_single_pole, dilation_radius, ApproxResult};
pub use error::{ApproxError, Result};
pub use func::{DomainSpec, FunctionSpec};
pub use mergelyan::{approximate_on_arc, approximate_on_arc_fn, approximate_on_disjoint_union, approximate_on_starlike};
pub use sphere::{chordal_dist, ExtendedComplex};
pub use sup::{sup_chordal, GridSpec, SupEstimate};
