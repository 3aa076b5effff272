//! Compactly supported test functions `φ = Σ_m P_m(x) h_m(r)`.
//!
//! `h_0 = χ` is a smooth radial cutoff with `χ ≡ 1` on `[0, R/2]` and `χ ≡ 0`
//! on `[R, ∞)`; `h_{m+1} = (1/r) d/dr h_m`. The family is closed under
//! differentiation since `∂_i h_m = x_i h_{m+1}`.

use std::collections::BTreeMap;

use crate::error::QuadratureError;
use crate::field_algebra::{degree_of_divergence, MultiIndex, SingularField};

use super::jet::Jet;

/// Real polynomial in `(x₁, x₂)`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Poly {
    terms: BTreeMap<MultiIndex, f64>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(alpha: MultiIndex, c: f64) -> Self {
        let mut p = Self::zero();
        p.add_term(alpha, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (MultiIndex, f64)>) -> Self {
        let mut p = Self::zero();
        for (a, c) in terms {
            p.add_term(a, c);
        }
        p
    }

    pub fn add_term(&mut self, alpha: MultiIndex, c: f64) {
        if c == 0.0 {
            return;
        }
        let e = self.terms.entry(alpha).or_insert(0.0);
        *e += c;
        if *e == 0.0 {
            self.terms.remove(&alpha);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &f64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, alpha: MultiIndex) -> f64 {
        self.terms.get(&alpha).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|a| a.order()).max().unwrap_or(0)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (a, c) in &o.terms {
            out.add_term(*a, *c);
        }
        out
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(a, c)| (*a, c * s)))
    }

    pub fn partial(&self, dir: u8) -> Poly {
        let mut out = Poly::zero();
        for (a, c) in &self.terms {
            let pow = if dir == 1 { a.0 } else { a.1 };
            if let Some(lower) = a.lower(dir) {
                out.add_term(lower, c * pow as f64);
            }
        }
        out
    }

    /// `x_i · P`.
    pub fn times_x(&self, dir: u8) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(a, c)| (a.bump(dir), *c)))
    }

    /// `P(x / λ) · s`.
    pub fn dilate(&self, lambda: f64, s: f64) -> Poly {
        Poly::from_terms(
            self.terms
                .iter()
                .map(|(a, c)| (*a, c * s * lambda.powi(-(a.order() as i32)))),
        )
    }

    /// Monomials of degree `≤ d` (the Taylor polynomial when `P` is the core).
    pub fn truncate(&self, d: i32) -> Poly {
        Poly::from_terms(
            self.terms
                .iter()
                .filter(|(a, _)| (a.order() as i32) <= d)
                .map(|(a, c)| (*a, *c)),
        )
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.terms
            .iter()
            .map(|(a, c)| c * x.powi(a.0 as i32) * y.powi(a.1 as i32))
            .sum()
    }
}

/// `e^{−1/t}` spliced into a smooth step `S(u)`: 0 for `u ≤ 0`, 1 for `u ≥ 1`.
fn step_jet(u: f64, order: usize) -> Jet {
    // Within 1e-3 of the ends every derivative is below e^{-900}.
    if u <= 1e-3 {
        return Jet::constant(0.0, order);
    }
    if u >= 1.0 - 1e-3 {
        return Jet::constant(1.0, order);
    }
    let t = Jet::variable(u, order);
    let f = |t: &Jet| t.recip().scale(-1.0).exp();
    let a = f(&t);
    let b = f(&Jet::constant(1.0, order).sub(&t));
    a.div(&a.add(&b))
}

/// Compactly supported scalar test function.
#[derive(Clone, Debug, PartialEq)]
pub struct TestFunction {
    support: f64,
    /// `parts[m]` multiplies `h_m`.
    parts: Vec<Poly>,
}

impl TestFunction {
    /// `P · χ` with `χ` of support radius `support`.
    pub fn from_core(core: Poly, support: f64) -> Result<Self, QuadratureError> {
        if !(support.is_finite() && support > 0.0) {
            return Err(QuadratureError::InvalidSpec(format!(
                "support radius must be positive, got {support}"
            )));
        }
        Ok(Self {
            support,
            parts: vec![core],
        })
    }

    pub fn support_radius(&self) -> f64 {
        self.support
    }

    /// Polynomial equal to `φ` on `B_{R/2}`.
    pub fn core(&self) -> &Poly {
        &self.parts[0]
    }

    pub fn parts(&self) -> &[Poly] {
        &self.parts
    }

    /// Largest polynomial degree over all parts.
    pub fn degree(&self) -> u32 {
        self.parts.iter().map(Poly::degree).max().unwrap_or(0)
    }

    fn h_values(&self, r: f64) -> Vec<f64> {
        let m = self.parts.len();
        let rs2 = self.support * self.support;
        let u = (rs2 - r * r) / (0.75 * rs2);
        let jet = step_jet(u, m);
        let c = -2.0 / (0.75 * rs2);
        (0..m).map(|k| c.powi(k as i32) * jet.derivative(k)).collect()
    }

    /// Radial factors `h_m(r)`; `None` outside the support.
    pub(crate) fn profile(&self, r: f64) -> Option<Vec<f64>> {
        if r >= self.support {
            return None;
        }
        if r <= 0.5 * self.support {
            let mut h = vec![0.0; self.parts.len()];
            h[0] = 1.0;
            return Some(h);
        }
        Some(self.h_values(r))
    }

    /// `φ(x)` given precomputed radial factors at `|x|`.
    pub(crate) fn eval_with(&self, x: f64, y: f64, h: &[f64]) -> f64 {
        self.parts
            .iter()
            .zip(h)
            .map(|(p, hm)| if *hm == 0.0 { 0.0 } else { p.eval(x, y) * hm })
            .sum()
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let r = x.hypot(y);
        if r >= self.support {
            return 0.0;
        }
        if r <= 0.5 * self.support {
            return self.parts[0].eval(x, y);
        }
        let h = self.h_values(r);
        self.parts
            .iter()
            .zip(h)
            .map(|(p, hm)| if hm == 0.0 { 0.0 } else { p.eval(x, y) * hm })
            .sum()
    }

    pub fn eval_polar(&self, r: f64, theta: f64) -> f64 {
        self.eval(r * theta.cos(), r * theta.sin())
    }

    /// `∂_i φ`, exactly within the family.
    pub fn partial(&self, dir: u8) -> TestFunction {
        let mut parts = vec![Poly::zero(); self.parts.len() + 1];
        for (m, p) in self.parts.iter().enumerate() {
            parts[m] = parts[m].add(&p.partial(dir));
            parts[m + 1] = parts[m + 1].add(&p.times_x(dir));
        }
        while parts.len() > 1 && parts.last().is_some_and(Poly::is_zero) {
            parts.pop();
        }
        TestFunction {
            support: self.support,
            parts,
        }
    }

    /// `∂^α φ`.
    pub fn derivative(&self, alpha: MultiIndex) -> TestFunction {
        let mut out = self.clone();
        for _ in 0..alpha.0 {
            out = out.partial(1);
        }
        for _ in 0..alpha.1 {
            out = out.partial(2);
        }
        out
    }

    /// `∂^α φ(O) = α! [x^α] P_0`, exact.
    pub fn derivative_at_origin(&self, alpha: MultiIndex) -> f64 {
        self.parts[0].coeff(alpha) * alpha.factorial() as f64
    }

    /// `Σ c φ_i` over test functions with a common support.
    pub fn combine(items: &[(f64, &TestFunction)]) -> Result<TestFunction, QuadratureError> {
        let Some((_, first)) = items.first() else {
            return Err(QuadratureError::InvalidSpec("empty combination".into()));
        };
        let len = items.iter().map(|(_, t)| t.parts.len()).max().unwrap_or(1);
        let mut parts = vec![Poly::zero(); len];
        for (w, t) in items {
            if t.support != first.support {
                return Err(QuadratureError::InvalidSpec(
                    "combined test functions must share a support radius".into(),
                ));
            }
            for (m, p) in t.parts.iter().enumerate() {
                parts[m] = parts[m].add(&p.scale(*w));
            }
        }
        Ok(TestFunction {
            support: first.support,
            parts,
        })
    }

    pub fn scale(&self, s: f64) -> TestFunction {
        TestFunction {
            support: self.support,
            parts: self.parts.iter().map(|p| p.scale(s)).collect(),
        }
    }
}

/// `w^α` with core `(−1)^{|α|} x^α / α!` on `B_{R/2}`.
pub fn make_w_alpha(alpha: MultiIndex, support_radius: f64) -> Result<TestFunction, QuadratureError> {
    let sign = if alpha.order() % 2 == 0 { 1.0 } else { -1.0 };
    let core = Poly::monomial(alpha, sign / alpha.factorial() as f64);
    TestFunction::from_core(core, support_radius)
}

/// Probe for scaling-degree estimates.
///
/// A generic core of five consecutive orders. For a field without point part
/// and `deg ≥ 0` the jet vanishes through order `deg`, so the finite-part
/// subtraction is inactive and `F(φ_λ)` is exactly homogeneous in `λ`.
pub fn scaling_probe(f: &SingularField, support_radius: f64) -> Result<TestFunction, QuadratureError> {
    let deg = degree_of_divergence(f);
    let low = if f.point().is_empty() && deg >= 0.0 { deg.floor() as u32 + 1 } else { 0 };
    let mut core = Poly::zero();
    let mut i = 0usize;
    for a in MultiIndex::up_to(low + 4).into_iter().filter(|a| a.order() >= low) {
        i += 1;
        core.add_term(a, 1.0 / (1.0 + i as f64) * if i % 3 == 0 { -1.0 } else { 1.0 });
    }
    TestFunction::from_core(core, support_radius)
}

/// `φ_λ(x) = λ^{−2} φ(x / λ)`.
pub fn rescale_test(phi: &TestFunction, lambda: f64) -> Result<TestFunction, QuadratureError> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(QuadratureError::InvalidScale(lambda));
    }
    let parts = phi
        .parts
        .iter()
        .enumerate()
        .map(|(m, p)| p.dilate(lambda, lambda.powi(2 * m as i32 - 2)))
        .collect();
    Ok(TestFunction {
        support: phi.support * lambda,
        parts,
    })
}
