//! Scalar Laurent–Fourier–log series `Σ c · r^k (ln r)^p · trig(nθ)`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::coeff::{rat, rat_int, Coeff, Rational};
use crate::error::FieldError;

use super::MultiIndex;

pub const MAX_LOG_POWER: u8 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Cos,
    Sin,
}

/// Basis function `r^k (ln r)^p trig(nθ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono {
    pub k: i32,
    pub p: u8,
    pub n: u32,
    pub parity: Parity,
}

impl Mono {
    pub fn new(k: i32, p: u8, n: u32, parity: Parity) -> Self {
        Self { k, p, n, parity }
    }

    pub fn eval(&self, r: f64, theta: f64) -> f64 {
        let ang = match self.parity {
            Parity::Cos => (self.n as f64 * theta).cos(),
            Parity::Sin => (self.n as f64 * theta).sin(),
        };
        r.powi(self.k) * r.ln().powi(self.p as i32) * ang
    }
}

/// Product of two trig modes, as `(n, parity, factor)` pairs with `n ≥ 0`.
pub fn trig_product(a: (u32, Parity), b: (u32, Parity)) -> Vec<(u32, Parity, Rational)> {
    let (n1, p1) = (a.0 as i64, a.1);
    let (n2, p2) = (b.0 as i64, b.1);
    let half = rat(1, 2);
    let raw: [(i64, Parity, Rational); 2] = match (p1, p2) {
        (Parity::Cos, Parity::Cos) => [
            (n1 - n2, Parity::Cos, half.clone()),
            (n1 + n2, Parity::Cos, half),
        ],
        (Parity::Sin, Parity::Sin) => [
            (n1 - n2, Parity::Cos, half.clone()),
            (n1 + n2, Parity::Cos, -half),
        ],
        (Parity::Sin, Parity::Cos) => [
            (n1 + n2, Parity::Sin, half.clone()),
            (n1 - n2, Parity::Sin, half),
        ],
        (Parity::Cos, Parity::Sin) => [
            (n1 + n2, Parity::Sin, half.clone()),
            (n1 - n2, Parity::Sin, -half),
        ],
    };
    let mut out = Vec::with_capacity(2);
    for (n, par, f) in raw {
        let (n, f) = if n < 0 {
            match par {
                Parity::Cos => (-n, f),
                Parity::Sin => (-n, -f),
            }
        } else {
            (n, f)
        };
        if n == 0 && par == Parity::Sin {
            continue;
        }
        out.push((n as u32, par, f));
    }
    out
}

/// Finite scalar series on Ω−O with exact coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Series {
    terms: BTreeMap<Mono, Coeff>,
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let trig = match m.parity {
                Parity::Cos => "cos",
                Parity::Sin => "sin",
            };
            write!(f, "({c}) r^{} ln^{} {trig}({}θ)", m.k, m.p, m.n)?;
        }
        Ok(())
    }
}

impl Series {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Coeff) -> Self {
        Self::single(Mono::new(0, 0, 0, Parity::Cos), c)
    }

    pub fn single(m: Mono, c: Coeff) -> Self {
        let mut s = Self::zero();
        s.add_term(m, c);
        s
    }

    /// `r cos θ`.
    pub fn x1() -> Self {
        Self::single(Mono::new(1, 0, 1, Parity::Cos), Coeff::one())
    }

    /// `r sin θ`.
    pub fn x2() -> Self {
        Self::single(Mono::new(1, 0, 1, Parity::Sin), Coeff::one())
    }

    /// Pure angular mode `trig(nθ)`.
    pub fn trig(n: u32, parity: Parity) -> Self {
        Self::single(Mono::new(0, 0, n, parity), Coeff::one())
    }

    /// `x₁^a x₂^b`.
    pub fn monomial_xy(a: u32, b: u32) -> Self {
        let mut s = Self::constant(Coeff::one());
        for _ in 0..a {
            s = s.mul(&Self::x1()).expect("polynomials carry no logs");
        }
        for _ in 0..b {
            s = s.mul(&Self::x2()).expect("polynomials carry no logs");
        }
        s
    }

    /// Core of the test function `w^β = (−1)^{|β|} x^β / β!`.
    pub fn w_core(beta: MultiIndex) -> Self {
        let sign = if beta.order() % 2 == 0 { 1 } else { -1 };
        let q = rat(sign, 1) / rat_int(beta.factorial() as i64);
        Self::monomial_xy(beta.0, beta.1).scale_rat(&q)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Mono) -> Option<&Coeff> {
        self.terms.get(m)
    }

    pub fn add_term(&mut self, m: Mono, c: Coeff) {
        if c.is_zero() {
            return;
        }
        debug_assert!(!(m.n == 0 && m.parity == Parity::Sin));
        let entry = self.terms.entry(m).or_default();
        *entry += &c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &Series) -> Series {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Series) -> Series {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Series {
        Series {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Coeff) -> Series {
        let mut out = Series::zero();
        for (m, v) in &self.terms {
            out.add_term(*m, v * c);
        }
        out
    }

    pub fn scale_rat(&self, q: &Rational) -> Series {
        self.scale(&Coeff::from_rat(q.clone()))
    }

    pub fn mul(&self, other: &Series) -> Result<Series, FieldError> {
        let mut out = Series::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let p = m1.p + m2.p;
                if p > MAX_LOG_POWER {
                    return Err(FieldError::LogPowerOverflow(p as u32));
                }
                let c = c1 * c2;
                for (n, parity, f) in trig_product((m1.n, m1.parity), (m2.n, m2.parity)) {
                    out.add_term(Mono::new(m1.k + m2.k, p, n, parity), c.scale(&f));
                }
            }
        }
        Ok(out)
    }

    /// Multiply by a pure trig mode (never changes `k` or `p`).
    pub fn mul_trig(&self, n: u32, parity: Parity) -> Series {
        self.mul(&Series::trig(n, parity))
            .expect("trig factors carry no logs")
    }

    /// Multiply by `r^j`.
    pub fn shift_k(&self, j: i32) -> Series {
        Series {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Mono::new(m.k + j, m.p, m.n, m.parity), c.clone()))
                .collect(),
        }
    }

    /// `∂_r` applied term-wise.
    pub fn d_r(&self) -> Series {
        let mut out = Series::zero();
        for (m, c) in &self.terms {
            if m.k != 0 {
                out.add_term(
                    Mono::new(m.k - 1, m.p, m.n, m.parity),
                    c.scale(&rat_int(m.k as i64)),
                );
            }
            if m.p > 0 {
                out.add_term(
                    Mono::new(m.k - 1, m.p - 1, m.n, m.parity),
                    c.scale(&rat_int(m.p as i64)),
                );
            }
        }
        out
    }

    /// `∂_θ` applied term-wise.
    pub fn d_theta(&self) -> Series {
        let mut out = Series::zero();
        for (m, c) in &self.terms {
            if m.n == 0 {
                continue;
            }
            let n = rat_int(m.n as i64);
            match m.parity {
                Parity::Cos => out.add_term(Mono::new(m.k, m.p, m.n, Parity::Sin), c.scale(&-n)),
                Parity::Sin => out.add_term(Mono::new(m.k, m.p, m.n, Parity::Cos), c.scale(&n)),
            }
        }
        out
    }

    /// Classical partial derivative on Ω−O; `dir` is 1 or 2.
    pub fn partial(&self, dir: u8) -> Series {
        let dr = self.d_r();
        let dth = self.d_theta().shift_k(-1);
        match dir {
            1 => dr
                .mul_trig(1, Parity::Cos)
                .sub(&dth.mul_trig(1, Parity::Sin)),
            _ => dr
                .mul_trig(1, Parity::Sin)
                .add(&dth.mul_trig(1, Parity::Cos)),
        }
    }

    /// `θ ↦ θ − π/2` in every angular factor.
    pub fn rotate_quarter(&self) -> Series {
        let mut out = Series::zero();
        for (m, c) in &self.terms {
            // cos(n(θ−π/2)) = cos nθ cos(nπ/2) + sin nθ sin(nπ/2)
            // sin(n(θ−π/2)) = sin nθ cos(nπ/2) − cos nθ sin(nπ/2)
            let (cs, sn) = match m.n % 4 {
                0 => (1, 0),
                1 => (0, 1),
                2 => (-1, 0),
                _ => (0, -1),
            };
            let (cos_f, sin_f) = match m.parity {
                Parity::Cos => (cs, sn),
                Parity::Sin => (-sn, cs),
            };
            if cos_f != 0 {
                out.add_term(
                    Mono::new(m.k, m.p, m.n, Parity::Cos),
                    c.scale(&rat_int(cos_f)),
                );
            }
            if sin_f != 0 && m.n != 0 {
                out.add_term(
                    Mono::new(m.k, m.p, m.n, Parity::Sin),
                    c.scale(&rat_int(sin_f)),
                );
            }
        }
        out
    }

    pub fn eval(&self, r: f64, theta: f64, ell: f64) -> f64 {
        self.terms.iter().map(|(m, c)| c.eval(ell) * m.eval(r, theta)).sum()
    }

    pub fn min_k(&self) -> Option<i32> {
        self.terms.keys().map(|m| m.k).min()
    }

    pub fn max_mode(&self) -> u32 {
        self.terms.keys().map(|m| m.n).max().unwrap_or(0)
    }

    /// `∫₀^{2π} f dθ` grouped by `(k, p)`: only the cos(0θ) terms survive.
    pub fn angular_mean_terms(&self) -> BTreeMap<(i32, u8), Coeff> {
        let two_pi = Coeff::pi().scale(&rat_int(2));
        let mut out = BTreeMap::new();
        for (m, c) in &self.terms {
            if m.n == 0 {
                let e: &mut Coeff = out.entry((m.k, m.p)).or_default();
                *e += &(c * &two_pi);
            }
        }
        out.retain(|_, c: &mut Coeff| !c.is_zero());
        out
    }

    /// Whether every term is a polynomial in `(x₁, x₂)`.
    pub fn is_polynomial(&self) -> bool {
        self.terms
            .keys()
            .all(|m| m.p == 0 && m.k >= 0 && (m.n as i32) <= m.k && (m.k - m.n as i32) % 2 == 0)
    }

    /// Cartesian monomial coefficients, when the series is a polynomial.
    pub fn to_polynomial(&self) -> Option<BTreeMap<MultiIndex, Coeff>> {
        if !self.is_polynomial() {
            return None;
        }
        let mut out: BTreeMap<MultiIndex, Coeff> = BTreeMap::new();
        for (m, c) in &self.terms {
            for (idx, q) in polar_mode_to_monomials(m.k as u32, m.n, m.parity) {
                let e = out.entry(idx).or_default();
                *e += &c.scale(&q);
            }
        }
        out.retain(|_, c| !c.is_zero());
        Some(out)
    }

    /// Taylor coefficient `∂^γ f(O)` of a polynomial series.
    pub fn derivative_at_origin(&self, gamma: MultiIndex) -> Option<Coeff> {
        let poly = self.to_polynomial()?;
        Some(
            poly.get(&gamma)
                .map(|c| c.scale(&rat_int(gamma.factorial() as i64)))
                .unwrap_or_default(),
        )
    }

    /// Build the series of a Cartesian polynomial.
    pub fn from_polynomial(poly: &BTreeMap<MultiIndex, Coeff>) -> Series {
        let mut out = Series::zero();
        for (idx, c) in poly {
            out = out.add(&Series::monomial_xy(idx.0, idx.1).scale(c));
        }
        out
    }

    /// Keep only terms satisfying `pred`.
    pub fn filter(&self, pred: impl Fn(&Mono) -> bool) -> Series {
        Series {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| pred(m))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }
}

/// `r^k trig(nθ)` with `k ≥ n`, `k − n` even, as exact monomials in `(x₁, x₂)`.
fn polar_mode_to_monomials(k: u32, n: u32, parity: Parity) -> Vec<(MultiIndex, Rational)> {
    // Re/Im (x₁ + i x₂)^n.
    let mut base: BTreeMap<MultiIndex, Rational> = BTreeMap::new();
    for j in 0..=n {
        let binom = binomial(n, j);
        // i^j contributes to the real part when j even, imaginary when j odd.
        let (want_real, sign) = match j % 4 {
            0 => (true, 1),
            1 => (false, 1),
            2 => (true, -1),
            _ => (false, -1),
        };
        let real_part = parity == Parity::Cos;
        if want_real == real_part {
            let e = base
                .entry(MultiIndex(n - j, j))
                .or_insert_with(Rational::zero);
            *e += rat_int(sign * binom as i64);
        }
    }
    // Multiply by (x₁² + x₂²)^{(k−n)/2}.
    let mut poly = base;
    for _ in 0..((k - n) / 2) {
        let mut next: BTreeMap<MultiIndex, Rational> = BTreeMap::new();
        for (idx, q) in &poly {
            for add in [MultiIndex(2, 0), MultiIndex(0, 2)] {
                let e = next
                    .entry(MultiIndex(idx.0 + add.0, idx.1 + add.1))
                    .or_insert_with(Rational::zero);
                *e += q;
            }
        }
        poly = next;
    }
    poly.into_iter().filter(|(_, q)| !q.is_zero()).collect()
}

pub fn binomial(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

impl One for Series {
    fn one() -> Self {
        Series::constant(Coeff::one())
    }
}

impl std::ops::Mul for Series {
    type Output = Series;
    fn mul(self, rhs: Series) -> Series {
        Series::mul(&self, &rhs).expect("log power overflow in Series product")
    }
}
