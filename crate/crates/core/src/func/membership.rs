use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{DomainSpec, FunctionSpec};

const BOUNDARY_TOLERANCE: f64 = 1e-12;

/// Which family of approximants an annulus target is tested against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnnulusMode {
    /// Laurent polynomials (poles at 0 and ∞): only the open annulus must be pole-free.
    TwoPole,
    /// Plain polynomials: limits extend holomorphically to the outer disc, so
    /// poles may only sit on the outer circle or beyond.
    Polynomial,
}

/// Outcome of the membership test; a report rather than an error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub member: bool,
    pub interior_poles: Vec<Complex64>,
    pub boundary_poles: Vec<Complex64>,
    pub reasons: Vec<String>,
}

impl MembershipReport {
    fn accept() -> Self {
        MembershipReport { member: true, interior_poles: Vec::new(), boundary_poles: Vec::new(), reasons: Vec::new() }
    }

    fn reject(&mut self, reason: String) {
        self.member = false;
        self.reasons.push(reason);
    }
}

/// Membership in the extended class for `d` (annuli in two-pole mode).
pub fn classify_membership(f: &FunctionSpec, d: &DomainSpec) -> MembershipReport {
    classify_membership_with(f, d, AnnulusMode::TwoPole)
}

/// Membership test: a target qualifies when it is `≡ ∞` or finite and
/// holomorphic on the interior, with poles allowed only where the chosen
/// family of approximants can produce `∞`.
pub fn classify_membership_with(f: &FunctionSpec, d: &DomainSpec, mode: AnnulusMode) -> MembershipReport {
    let mut report = MembershipReport::accept();
    if f.is_constant_infinity() {
        return report;
    }
    match d {
        DomainSpec::Circle { .. } | DomainSpec::Arc { .. } => {
            // no interior: every continuous sphere-valued function qualifies
            report.boundary_poles = f.poles().into_iter().filter(|&p| d.contains(p, BOUNDARY_TOLERANCE)).collect();
        }
        DomainSpec::ClosedAnnulus { center, r_inner, r_outer } if mode == AnnulusMode::Polynomial => {
            for p in f.poles() {
                let dist = (p - center).norm();
                let on = |r: f64| (dist - r).abs() <= BOUNDARY_TOLERANCE * r.max(1.0);
                if on(*r_outer) {
                    report.boundary_poles.push(p);
                } else if on(*r_inner) {
                    report.boundary_poles.push(p);
                    report.reject(format!(
                        "pole {p} on the inner circle |z| = {r_inner}: polynomial limits on the annulus \
                         cannot take the value ∞ there unless they are ≡ ∞"
                    ));
                } else if dist < *r_outer {
                    report.interior_poles.push(p);
                    let place = if dist < *r_inner { "inside the inner disc" } else { "in the open annulus" };
                    report.reject(format!(
                        "pole {p} {place}: polynomial limits extend holomorphically to the disc |z| < {r_outer}"
                    ));
                }
            }
        }
        DomainSpec::DisjointUnion(parts) => {
            for (i, part) in parts.iter().enumerate() {
                let sub = classify_membership_with(f, part, mode);
                report.interior_poles.extend(sub.interior_poles);
                report.boundary_poles.extend(sub.boundary_poles);
                for r in sub.reasons {
                    report.reject(format!("component {i}: {r}"));
                }
            }
        }
        solid => {
            for p in f.poles() {
                match solid.locate(p, BOUNDARY_TOLERANCE) {
                    Some(true) => {
                        report.interior_poles.push(p);
                        report.reject(format!("pole {p} lies in the interior, where limits must be finite"));
                    }
                    Some(false) => report.boundary_poles.push(p),
                    None => {}
                }
            }
        }
    }
    report
}
