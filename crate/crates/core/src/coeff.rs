//! Exact coefficient ring.
//!
//! Every symbolic coefficient lives in `Q[π, 1/π, ℓ]`, where `ℓ = ln ρ` is the
//! logarithm of the finite-part reference radius of the owning field. Keeping
//! `π` and `ℓ` formal lets cancellations in the calculus come out exactly zero.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number.
pub type Rational = BigRational;

/// Exact rational from an `f64` (every finite double is a dyadic rational).
pub fn rat_from_f64(x: f64) -> Option<Rational> {
    BigRational::from_float(x)
}

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// `q^e` for an integer exponent (q must be nonzero when e < 0).
pub fn rat_powi(q: &Rational, e: i32) -> Rational {
    if e >= 0 {
        num_traits::pow(q.clone(), e as usize)
    } else {
        num_traits::pow(q.recip(), (-e) as usize)
    }
}

/// Element of `Q[π, 1/π, ℓ]`, stored as `Σ q · π^i · ℓ^j`.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct Coeff {
    terms: BTreeMap<(i32, u32), Rational>,
}

impl Coeff {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_rat(Rational::one())
    }

    pub fn from_rat(q: Rational) -> Self {
        Self::monomial(q, 0, 0)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(rat_int(n))
    }

    /// Exact embedding of a double. Non-finite input maps to `None`.
    pub fn from_f64(x: f64) -> Option<Self> {
        rat_from_f64(x).map(Self::from_rat)
    }

    /// `q · π^pi_pow · ℓ^ell_pow`.
    pub fn monomial(q: Rational, pi_pow: i32, ell_pow: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert((pi_pow, ell_pow), q);
        }
        Self { terms }
    }

    pub fn pi() -> Self {
        Self::monomial(Rational::one(), 1, 0)
    }

    pub fn inv_pi() -> Self {
        Self::monomial(Rational::one(), -1, 0)
    }

    /// The formal symbol `ℓ = ln ρ`.
    pub fn ell() -> Self {
        Self::monomial(Rational::one(), 0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i32, u32), &Rational)> {
        self.terms.iter()
    }

    /// True when the value involves neither `π` nor `ℓ`.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(k, v)| (*k, v * q)).collect(),
        }
    }

    /// Inverse of a single monomial `q π^i` (no `ℓ`); `None` otherwise.
    pub fn inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (&(i, j), q) = self.terms.iter().next()?;
        if j != 0 {
            return None;
        }
        Some(Self::monomial(q.recip(), -i, 0))
    }

    /// Numeric value given `ℓ = ln ρ`.
    pub fn eval(&self, ell: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(i, j), q)| rat_to_f64(q) * std::f64::consts::PI.powi(i) * ell.powi(j as i32))
            .sum()
    }

    /// Largest absolute rational coefficient, used for diagnostics.
    pub fn max_abs_rational(&self) -> f64 {
        self.terms
            .values()
            .map(|q| rat_to_f64(&q.abs()))
            .fold(0.0, f64::max)
    }

    fn add_term(&mut self, key: (i32, u32), q: Rational) {
        if q.is_zero() {
            return;
        }
        let entry = self.terms.entry(key).or_insert_with(Rational::zero);
        *entry += q;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }
}

impl fmt::Debug for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(i, j), q) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{q}")?;
            match i {
                0 => {}
                1 => write!(f, "·π")?,
                _ => write!(f, "·π^{i}")?,
            }
            match j {
                0 => {}
                1 => write!(f, "·ℓ")?,
                _ => write!(f, "·ℓ^{j}")?,
            }
        }
        Ok(())
    }
}

impl Add<&Coeff> for &Coeff {
    type Output = Coeff;
    fn add(self, rhs: &Coeff) -> Coeff {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Coeff {
    type Output = Coeff;
    fn add(mut self, rhs: Coeff) -> Coeff {
        self += &rhs;
        self
    }
}

impl AddAssign<&Coeff> for Coeff {
    fn add_assign(&mut self, rhs: &Coeff) {
        for (k, v) in &rhs.terms {
            self.add_term(*k, v.clone());
        }
    }
}

impl Sub<&Coeff> for &Coeff {
    type Output = Coeff;
    fn sub(self, rhs: &Coeff) -> Coeff {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(*k, -v.clone());
        }
        out
    }
}

impl Sub for Coeff {
    type Output = Coeff;
    fn sub(self, rhs: Coeff) -> Coeff {
        &self - &rhs
    }
}

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        Coeff {
            terms: self.terms.iter().map(|(k, v)| (*k, -v.clone())).collect(),
        }
    }
}

impl Neg for Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        -&self
    }
}

impl Mul<&Coeff> for &Coeff {
    type Output = Coeff;
    fn mul(self, rhs: &Coeff) -> Coeff {
        let mut out = Coeff::zero();
        for (&(i1, j1), q1) in &self.terms {
            for (&(i2, j2), q2) in &rhs.terms {
                out.add_term((i1 + i2, j1 + j2), q1 * q2);
            }
        }
        out
    }
}

impl Mul for Coeff {
    type Output = Coeff;
    fn mul(self, rhs: Coeff) -> Coeff {
        &self * &rhs
    }
}
