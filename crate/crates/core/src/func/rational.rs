//! Canonical partial-fraction form shared by the coefficient and pullback code.

use num_complex::Complex64;

use super::{is_origin, near_pole, FunctionSpec, PoleTerm, Polynomial, ORIGIN};

/// `Σ polys + Σ c/(z−p)^m`; polynomial pieces keep their own expansion centers.
#[derive(Debug, Clone, Default)]
pub(crate) struct RationalForm {
    pub polys: Vec<Polynomial>,
    pub poles: Vec<PoleTerm>,
}

/// Coefficients of `P(x + d)` given those of `P(x)`.
pub(crate) fn taylor_shift(coeffs: &[Complex64], d: Complex64) -> Vec<Complex64> {
    let mut a = coeffs.to_vec();
    if is_origin(&d) {
        return a;
    }
    let n = a.len();
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            let next = a[j + 1];
            a[j] += d * next;
        }
    }
    a
}

fn binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl RationalForm {
    /// `None` for the constant infinity.
    pub fn from_spec(f: &FunctionSpec) -> Option<RationalForm> {
        let mut form = RationalForm::default();
        form.absorb(f)?;
        form.merge();
        Some(form)
    }

    fn absorb(&mut self, f: &FunctionSpec) -> Option<()> {
        match f {
            FunctionSpec::Polynomial(p) => self.polys.push(p.clone()),
            FunctionSpec::LaurentPoly(l) => {
                let top = l.coeffs.keys().copied().filter(|&n| n >= 0).max();
                if let Some(top) = top {
                    let coeffs = (0..=top).map(|n| l.coeffs.get(&n).copied().unwrap_or(ORIGIN)).collect();
                    self.polys.push(Polynomial { coeffs, center: l.center });
                }
                for (&n, &a) in l.coeffs.range(..0) {
                    self.poles.push(PoleTerm { p: l.center, m: n.unsigned_abs(), c: a });
                }
            }
            FunctionSpec::PoleRational(r) => {
                let mono = taylor_shift(&r.q, -r.q_center);
                self.polys.push(Polynomial { coeffs: vec![mono[0]], center: ORIGIN });
                for (j, &a) in mono.iter().enumerate().skip(1) {
                    self.poles.push(PoleTerm { p: r.w, m: j as u32, c: a });
                }
            }
            FunctionSpec::PartialFractions(pf) => {
                if !pf.poly_part.is_empty() {
                    self.polys.push(Polynomial { coeffs: pf.poly_part.clone(), center: ORIGIN });
                }
                self.poles.extend(pf.poles.iter().copied());
            }
            FunctionSpec::ConstantInfinity => return None,
            FunctionSpec::Sum(terms) => {
                for t in terms {
                    self.absorb(t)?;
                }
            }
        }
        Some(())
    }

    /// Combines pieces sharing a center and pole terms sharing a `(p, m)` key, and drops zero terms.
    fn merge(&mut self) {
        let mut polys: Vec<Polynomial> = Vec::new();
        for p in self.polys.drain(..) {
            if p.coeffs.iter().all(is_origin) {
                continue;
            }
            match polys.iter_mut().find(|q| q.center == p.center) {
                Some(q) => {
                    if q.coeffs.len() < p.coeffs.len() {
                        q.coeffs.resize(p.coeffs.len(), ORIGIN);
                    }
                    for (a, b) in q.coeffs.iter_mut().zip(&p.coeffs) {
                        *a += b;
                    }
                }
                None => polys.push(p),
            }
        }
        self.polys = polys;
        let mut poles: Vec<PoleTerm> = Vec::new();
        for t in self.poles.drain(..) {
            match poles.iter_mut().find(|s| s.p == t.p && s.m == t.m) {
                Some(s) => s.c += t.c,
                None => poles.push(t),
            }
        }
        poles.retain(|t| !is_origin(&t.c));
        self.poles = poles;
    }

    pub fn pole_locations(&self) -> Vec<Complex64> {
        let mut out: Vec<Complex64> = Vec::new();
        for t in &self.poles {
            if !out.contains(&t.p) {
                out.push(t.p);
            }
        }
        out
    }

    /// Smallest distance from `z` to a pole, `+∞` without poles.
    pub fn pole_distance(&self, z: Complex64) -> f64 {
        self.poles.iter().map(|t| (t.p - z).norm()).fold(f64::INFINITY, f64::min)
    }

    pub fn hits_pole(&self, z: Complex64) -> bool {
        self.poles.iter().any(|t| near_pole(z, t.p))
    }

    pub fn into_spec(self) -> FunctionSpec {
        let RationalForm { polys, poles } = self;
        if poles.is_empty() {
            return match polys.len() {
                0 => FunctionSpec::constant(ORIGIN),
                1 => {
                    let p = polys.into_iter().next().unwrap();
                    FunctionSpec::polynomial_about(p.center, p.coeffs)
                }
                _ => FunctionSpec::Sum(
                    polys.into_iter().map(|p| FunctionSpec::polynomial_about(p.center, p.coeffs)).collect(),
                ),
            };
        }
        let (at_origin, shifted): (Vec<_>, Vec<_>) = polys.into_iter().partition(|p| is_origin(&p.center));
        let poly_part = at_origin.into_iter().next().map(|p| p.coeffs).unwrap_or_default();
        let pf = FunctionSpec::partial_fractions(poly_part, poles);
        if shifted.is_empty() {
            pf
        } else {
            let mut terms: Vec<FunctionSpec> =
                shifted.into_iter().map(|p| FunctionSpec::polynomial_about(p.center, p.coeffs)).collect();
            terms.push(pf);
            FunctionSpec::Sum(terms)
        }
    }

    /// Taylor coefficients about `center`. The caller guarantees `center` is not a pole.
    pub fn taylor(&self, center: Complex64, count: usize) -> Vec<Complex64> {
        let mut out = vec![ORIGIN; count];
        for p in &self.polys {
            let shifted = taylor_shift(&p.coeffs, center - p.center);
            for (o, a) in out.iter_mut().zip(shifted) {
                *o += a;
            }
        }
        for t in &self.poles {
            let d = center - t.p;
            let mut coef = t.c / d.powu(t.m);
            for (j, o) in out.iter_mut().enumerate() {
                if j > 0 {
                    coef *= -((t.m as usize + j - 1) as f64) / (j as f64) / d;
                }
                *o += coef;
            }
        }
        out
    }

    /// `g(u) = f(a + b u)`.
    pub fn affine_pullback(&self, a: Complex64, b: Complex64) -> RationalForm {
        let polys = self
            .polys
            .iter()
            .map(|p| {
                let mut scale = Complex64::new(1.0, 0.0);
                let coeffs = p
                    .coeffs
                    .iter()
                    .map(|&c| {
                        let v = c * scale;
                        scale *= b;
                        v
                    })
                    .collect();
                Polynomial { coeffs, center: (p.center - a) / b }
            })
            .collect();
        let poles = self
            .poles
            .iter()
            .map(|t| PoleTerm { p: (t.p - a) / b, m: t.m, c: t.c / b.powu(t.m) })
            .collect();
        let mut out = RationalForm { polys, poles };
        out.merge();
        out
    }

    /// `g(u) = f(a + b/u)`.
    pub fn inversion_pullback(&self, a: Complex64, b: Complex64) -> RationalForm {
        let mut out = RationalForm::default();
        for p in &self.polys {
            // P(e + s) with s = b/u
            let beta = taylor_shift(&p.coeffs, a - p.center);
            out.polys.push(Polynomial { coeffs: vec![beta[0]], center: ORIGIN });
            let mut bj = Complex64::new(1.0, 0.0);
            for (j, &bc) in beta.iter().enumerate().skip(1) {
                bj *= b;
                out.poles.push(PoleTerm { p: ORIGIN, m: j as u32, c: bc * bj });
            }
        }
        for t in &self.poles {
            let d = a - t.p;
            if d.norm() <= super::POLE_TOLERANCE * t.p.norm().max(1.0) {
                // γ/(b/u)^m = γ u^m / b^m
                let mut coeffs = vec![ORIGIN; t.m as usize + 1];
                coeffs[t.m as usize] = t.c / b.powu(t.m);
                out.polys.push(Polynomial { coeffs, center: ORIGIN });
                continue;
            }
            // γ u^m / (d u + b)^m = γ d^{-m} (1 + u0/(u − u0))^m,  u0 = −b/d
            let u0 = -b / d;
            let lead = t.c / d.powu(t.m);
            out.polys.push(Polynomial { coeffs: vec![lead], center: ORIGIN });
            let mut u0k = Complex64::new(1.0, 0.0);
            for k in 1..=t.m {
                u0k *= u0;
                out.poles.push(PoleTerm { p: u0, m: k, c: lead * binomial(t.m, k) * u0k });
            }
        }
        out.merge();
        out
    }

    /// Upper bound for `max |f|` on the circle `|z − center| = radius`.
    pub fn circle_max_bound(&self, center: Complex64, radius: f64) -> f64 {
        let mut bound = 0.0;
        for p in &self.polys {
            let reach = radius + (center - p.center).norm();
            let mut pow = 1.0;
            for c in &p.coeffs {
                bound += c.norm() * pow;
                pow *= reach;
            }
        }
        for t in &self.poles {
            let gap = ((t.p - center).norm() - radius).abs();
            if gap == 0.0 {
                return f64::INFINITY;
            }
            bound += t.c.norm() / gap.powi(t.m as i32);
        }
        bound
    }

    /// Highest polynomial degree among the pieces.
    pub fn poly_degree(&self) -> usize {
        self.polys.iter().map(|p| p.coeffs.len().saturating_sub(1)).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_of_square() {
        // (x + 2)^2 = x^2 + 4x + 4
        let out = taylor_shift(
            &[Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            Complex64::new(2.0, 0.0),
        );
        assert_eq!(out, vec![Complex64::new(4.0, 0.0), Complex64::new(4.0, 0.0), Complex64::new(1.0, 0.0)]);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(4, 0), 1.0);
        assert_eq!(binomial(4, 4), 1.0);
    }

    #[test]
    fn merge_collects_keys() {
        let f = FunctionSpec::sum(vec![
            FunctionSpec::simple_pole(Complex64::new(1.0, 0.0), 1, Complex64::new(1.0, 0.0)),
            FunctionSpec::simple_pole(Complex64::new(1.0, 0.0), 1, Complex64::new(-1.0, 0.0)),
            FunctionSpec::real_polynomial(&[2.0]),
        ]);
        let form = RationalForm::from_spec(&f).unwrap();
        assert!(form.poles.is_empty());
        assert_eq!(form.into_spec(), FunctionSpec::real_polynomial(&[2.0]));
    }

    #[test]
    fn circle_bound_dominates_samples() {
        let f = FunctionSpec::sum(vec![
            FunctionSpec::simple_pole(Complex64::new(1.0, 0.0), 2, Complex64::new(0.5, 0.0)),
            FunctionSpec::real_polynomial(&[1.0, -3.0, 0.5]),
        ]);
        let form = RationalForm::from_spec(&f).unwrap();
        let bound = form.circle_max_bound(Complex64::new(0.0, 0.0), 0.6);
        for k in 0..512 {
            let z = Complex64::from_polar(0.6, k as f64 * std::f64::consts::TAU / 512.0);
            assert!(f.evaluate(z).norm() <= bound * (1.0 + 1e-12));
        }
    }
}
