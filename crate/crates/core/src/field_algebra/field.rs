//! `SingularField`: smooth Laurent–Fourier–log part on Ω−O plus a delta multipole at O.

use serde::{Deserialize, Serialize};

use crate::coeff::{rat, rat_from_f64, rat_to_f64, Coeff, Rational};
use crate::error::FieldError;

use super::point::PointPart;
use super::series::{Mono, Parity, Series, MAX_LOG_POWER};
use super::{Codomain, MultiIndex};

/// Polar frame direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    R,
    Theta,
}

/// Which frame component a term lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Component {
    Scalar,
    /// Cartesian vector index (0 or 1).
    Cart(usize),
    Polar(Axis),
    /// Cartesian tensor slot `(i, j)`.
    CartPair(usize, usize),
    /// Dyad `e_a ⊗ e_b`.
    PolarPair(Axis, Axis),
}

/// `coeff · r^k (ln r)^p · trig(nθ)` in frame component `comp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothTerm {
    pub coeff: Coeff,
    pub k: i32,
    pub p: u8,
    pub n: u32,
    pub parity: Parity,
    pub comp: Component,
}

impl SmoothTerm {
    /// Term with a real coefficient, embedded exactly.
    pub fn new(coeff: f64, k: i32, p: u8, n: u32, parity: Parity, comp: Component) -> Self {
        let coeff = Coeff::from_f64(coeff).unwrap_or_default();
        Self::exact(coeff, k, p, n, parity, comp)
    }

    pub fn exact(coeff: Coeff, k: i32, p: u8, n: u32, parity: Parity, comp: Component) -> Self {
        Self {
            coeff,
            k,
            p,
            n,
            parity,
            comp,
        }
    }

    pub fn scalar(coeff: Coeff, k: i32, p: u8, n: u32, parity: Parity) -> Self {
        Self::exact(coeff, k, p, n, parity, Component::Scalar)
    }

    pub fn mono(&self) -> Mono {
        Mono::new(self.k, self.p, self.n, self.parity)
    }

    fn validate(&self) -> Result<(), FieldError> {
        if self.p > MAX_LOG_POWER {
            return Err(FieldError::LogPowerOverflow(self.p as u32));
        }
        if self.n == 0 && self.parity == Parity::Sin {
            return Err(FieldError::InvalidTerm(
                "mode n = 0 must use cos parity".into(),
            ));
        }
        let bad = |i: usize| i > 1;
        match self.comp {
            Component::Cart(i) if bad(i) => Err(FieldError::InvalidTerm(format!(
                "Cartesian index {i} out of range"
            ))),
            Component::CartPair(i, j) if bad(i) || bad(j) => Err(FieldError::InvalidTerm(
                format!("Cartesian slot ({i},{j}) out of range"),
            )),
            _ => Ok(()),
        }
    }

    fn fits(&self, codomain: Codomain) -> bool {
        matches!(
            (self.comp, codomain),
            (Component::Scalar, Codomain::Scalar)
                | (Component::Cart(_) | Component::Polar(_), Codomain::Vector)
                | (
                    Component::CartPair(..) | Component::PolarPair(..),
                    Codomain::Tensor | Codomain::SymTensor
                )
        )
    }
}

/// Frame vector as Cartesian components, each a trig mode with sign.
fn frame(axis: Axis) -> [Series; 2] {
    match axis {
        Axis::R => [Series::trig(1, Parity::Cos), Series::trig(1, Parity::Sin)],
        Axis::Theta => [
            Series::trig(1, Parity::Sin).neg(),
            Series::trig(1, Parity::Cos),
        ],
    }
}

/// A field on the disk `Ω = B_R(O)` whose singular support lies in `{O}`.
///
/// The smooth part is stored per Cartesian component. Non-integrable terms
/// are extended by the finite-part rule with reference radius `ρ`; coefficients
/// may contain the formal symbol `ℓ = ln ρ`.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularField {
    codomain: Codomain,
    domain_radius: f64,
    rho: Rational,
    comps: Vec<Series>,
    point: PointPart,
}

impl SingularField {
    pub fn zero(codomain: Codomain, domain_radius: f64) -> Self {
        let rho = rat_from_f64(domain_radius).unwrap_or_default() * rat(1, 2);
        Self {
            codomain,
            domain_radius,
            rho,
            comps: vec![Series::zero(); codomain.len()],
            point: PointPart::new(codomain.len()),
        }
    }

    fn check_domain(domain_radius: f64) -> Result<(), FieldError> {
        if !(domain_radius.is_finite() && domain_radius > 0.0) {
            return Err(FieldError::InvalidDomain(format!(
                "domain radius must be positive and finite, got {domain_radius}"
            )));
        }
        Ok(())
    }

    /// Ingest frame-component terms; polar dyads are expanded into Cartesian modes.
    pub fn from_terms(
        codomain: Codomain,
        domain_radius: f64,
        terms: &[SmoothTerm],
    ) -> Result<Self, FieldError> {
        Self::check_domain(domain_radius)?;
        let mut out = Self::zero(codomain, domain_radius);
        for t in terms {
            t.validate()?;
            if !t.fits(codomain) {
                return Err(FieldError::InvalidTerm(format!(
                    "component {:?} does not fit a {:?} field",
                    t.comp, codomain
                )));
            }
            if t.coeff.is_zero() {
                continue;
            }
            let base = Series::single(t.mono(), t.coeff.clone());
            match t.comp {
                Component::Scalar => out.comps[0] = out.comps[0].add(&base),
                Component::Cart(i) => out.comps[i] = out.comps[i].add(&base),
                Component::Polar(a) => {
                    for (i, e) in frame(a).iter().enumerate() {
                        out.comps[i] = out.comps[i].add(&base.mul(e)?);
                    }
                }
                Component::CartPair(i, j) => {
                    out.comps[2 * i + j] = out.comps[2 * i + j].add(&base)
                }
                Component::PolarPair(a, b) => {
                    let (ea, eb) = (frame(a), frame(b));
                    for i in 0..2 {
                        for j in 0..2 {
                            let f = base.mul(&ea[i])?.mul(&eb[j])?;
                            out.comps[2 * i + j] = out.comps[2 * i + j].add(&f);
                        }
                    }
                }
            }
        }
        out.check_symmetry()?;
        Ok(out)
    }

    /// Build from Cartesian component series.
    pub fn from_components(
        codomain: Codomain,
        domain_radius: f64,
        comps: Vec<Series>,
        point: PointPart,
    ) -> Result<Self, FieldError> {
        Self::check_domain(domain_radius)?;
        if comps.len() != codomain.len() || point.width() != codomain.len() {
            return Err(FieldError::InvalidTerm(format!(
                "{:?} field needs {} components",
                codomain,
                codomain.len()
            )));
        }
        let mut out = Self::zero(codomain, domain_radius);
        out.comps = comps;
        out.point = point;
        out.check_symmetry()?;
        Ok(out)
    }

    /// `value · ∂^α δ_O`.
    pub fn delta(
        codomain: Codomain,
        domain_radius: f64,
        alpha: MultiIndex,
        value: Vec<Coeff>,
    ) -> Result<Self, FieldError> {
        let point = PointPart::single(alpha, value);
        Self::from_components(
            codomain,
            domain_radius,
            vec![Series::zero(); codomain.len()],
            point,
        )
    }

    /// `c · ∂^α δ_O` times the identity tensor.
    pub fn delta_identity(
        codomain: Codomain,
        domain_radius: f64,
        alpha: MultiIndex,
        c: Coeff,
    ) -> Result<Self, FieldError> {
        if !codomain.is_tensor() {
            return Err(FieldError::UnsupportedCodomain {
                op: "delta_identity",
                codomain,
            });
        }
        Self::delta(
            codomain,
            domain_radius,
            alpha,
            vec![c.clone(), Coeff::zero(), Coeff::zero(), c],
        )
    }

    pub fn with_point(mut self, point: PointPart) -> Result<Self, FieldError> {
        if point.width() != self.codomain.len() {
            return Err(FieldError::InvalidTerm("point-part width mismatch".into()));
        }
        self.point = point;
        self.check_symmetry()?;
        Ok(self)
    }

    fn check_symmetry(&self) -> Result<(), FieldError> {
        if self.codomain == Codomain::SymTensor {
            if self.comps[1] != self.comps[2] {
                return Err(FieldError::NotSymmetric);
            }
            for (_, v) in self.point.entries() {
                if v[1] != v[2] {
                    return Err(FieldError::NotSymmetric);
                }
            }
        }
        Ok(())
    }

    pub fn codomain(&self) -> Codomain {
        self.codomain
    }

    pub fn domain_radius(&self) -> f64 {
        self.domain_radius
    }

    /// Finite-part reference radius `ρ`.
    pub fn reference_radius(&self) -> f64 {
        rat_to_f64(&self.rho)
    }

    pub fn reference_radius_exact(&self) -> &Rational {
        &self.rho
    }

    /// `ℓ = ln ρ`, the value of the formal log symbol in coefficients.
    pub fn ell(&self) -> f64 {
        self.reference_radius().ln()
    }

    /// Same smooth and point data, extended with another reference radius.
    pub fn with_reference_radius(&self, rho: f64) -> Result<Self, FieldError> {
        if !(rho > 0.0 && rho < self.domain_radius) {
            return Err(FieldError::InvalidDomain(format!(
                "reference radius {rho} must lie in (0, {})",
                self.domain_radius
            )));
        }
        let mut out = self.clone();
        out.rho = rat_from_f64(rho).expect("finite");
        Ok(out)
    }

    pub(crate) fn set_rho(&mut self, rho: Rational) {
        self.rho = rho;
    }

    /// Adopt the reference radius of another field.
    pub(crate) fn with_rho_of(mut self, other: &SingularField) -> Self {
        self.rho = other.rho.clone();
        self
    }

    pub fn components(&self) -> &[Series] {
        &self.comps
    }

    pub fn component_series(&self, c: usize) -> &Series {
        &self.comps[c]
    }

    pub fn point(&self) -> &PointPart {
        &self.point
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Series::is_zero) && self.point.is_empty()
    }

    pub fn has_smooth_part(&self) -> bool {
        self.comps.iter().any(|s| !s.is_zero())
    }

    /// One Cartesian component as a scalar field.
    pub fn component(&self, c: usize) -> SingularField {
        SingularField {
            codomain: Codomain::Scalar,
            domain_radius: self.domain_radius,
            rho: self.rho.clone(),
            comps: vec![self.comps[c].clone()],
            point: self.point.component(c),
        }
    }

    /// Stack scalar fields into a field of the given codomain.
    pub fn assemble(codomain: Codomain, parts: Vec<SingularField>) -> Result<Self, FieldError> {
        if parts.len() != codomain.len() {
            return Err(FieldError::InvalidTerm(format!(
                "{:?} needs {} parts, got {}",
                codomain,
                codomain.len(),
                parts.len()
            )));
        }
        let first = &parts[0];
        for p in &parts {
            if p.codomain != Codomain::Scalar {
                return Err(FieldError::CodomainMismatch {
                    expected: Codomain::Scalar,
                    found: p.codomain,
                });
            }
            first.compatible(p)?;
        }
        let points: Vec<PointPart> = parts.iter().map(|p| p.point.clone()).collect();
        let mut out = SingularField {
            codomain,
            domain_radius: first.domain_radius,
            rho: first.rho.clone(),
            comps: parts.iter().map(|p| p.comps[0].clone()).collect(),
            point: PointPart::stack(&points),
        };
        if codomain == Codomain::SymTensor && out.comps[1] != out.comps[2] {
            return Err(FieldError::NotSymmetric);
        }
        out.check_symmetry()?;
        out.codomain = codomain;
        Ok(out)
    }

    /// Reinterpret a tensor as symmetric (errors unless exactly symmetric).
    pub fn into_sym(self) -> Result<Self, FieldError> {
        if !self.codomain.is_tensor() {
            return Err(FieldError::UnsupportedCodomain {
                op: "into_sym",
                codomain: self.codomain,
            });
        }
        let mut out = self;
        out.codomain = Codomain::SymTensor;
        out.check_symmetry()?;
        Ok(out)
    }

    /// Forget symmetry.
    pub fn as_tensor(&self) -> Self {
        let mut out = self.clone();
        if out.codomain == Codomain::SymTensor {
            out.codomain = Codomain::Tensor;
        }
        out
    }

    pub(crate) fn compatible(&self, other: &SingularField) -> Result<(), FieldError> {
        if self.domain_radius != other.domain_radius {
            return Err(FieldError::RadiusMismatch(
                self.domain_radius,
                other.domain_radius,
            ));
        }
        if self.rho != other.rho {
            return Err(FieldError::PolicyMismatch);
        }
        Ok(())
    }

    fn same_shape(&self, other: &SingularField) -> Result<(), FieldError> {
        if self.codomain != other.codomain {
            return Err(FieldError::CodomainMismatch {
                expected: self.codomain,
                found: other.codomain,
            });
        }
        self.compatible(other)
    }

    pub fn add(&self, other: &SingularField) -> Result<SingularField, FieldError> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (a, b) in out.comps.iter_mut().zip(&other.comps) {
            *a = a.add(b);
        }
        out.point = out.point.add(&other.point);
        Ok(out)
    }

    pub fn sub(&self, other: &SingularField) -> Result<SingularField, FieldError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> SingularField {
        self.scale(&Coeff::from_int(-1))
    }

    pub fn scale(&self, c: &Coeff) -> SingularField {
        let mut out = self.clone();
        for s in out.comps.iter_mut() {
            *s = s.scale(c);
        }
        out.point = out.point.scale(c);
        out
    }

    /// Smooth part only.
    pub fn restrict(&self) -> SingularField {
        let mut out = self.clone();
        out.point = PointPart::new(self.codomain.len());
        out
    }

    /// Point part only.
    pub fn point_only(&self) -> SingularField {
        let mut out = self.clone();
        out.comps = vec![Series::zero(); self.codomain.len()];
        out
    }

    /// Map every smooth component through `f` (used for term-wise operators).
    pub(crate) fn map_series(&self, f: impl Fn(&Series) -> Series) -> SingularField {
        let mut out = self.clone();
        out.comps = self.comps.iter().map(f).collect();
        out
    }

    /// Cartesian values of the smooth part at `(r, θ)`.
    pub fn eval_smooth(&self, r: f64, theta: f64) -> Result<Vec<f64>, FieldError> {
        if r <= 0.0 {
            return Err(FieldError::AtOrigin);
        }
        let ell = self.ell();
        Ok(self.comps.iter().map(|s| s.eval(r, theta, ell)).collect())
    }

    pub fn eval_xy(&self, x: f64, y: f64) -> Result<Vec<f64>, FieldError> {
        self.eval_smooth(x.hypot(y), y.atan2(x))
    }

    /// Cartesian terms of the smooth part, for serialization.
    pub fn to_terms(&self) -> Vec<SmoothTerm> {
        let mut out = Vec::new();
        for (c, s) in self.comps.iter().enumerate() {
            let comp = match self.codomain {
                Codomain::Scalar => Component::Scalar,
                Codomain::Vector => Component::Cart(c),
                Codomain::Tensor | Codomain::SymTensor => Component::CartPair(c / 2, c % 2),
            };
            for (m, v) in s.terms() {
                out.push(SmoothTerm::exact(v.clone(), m.k, m.p, m.n, m.parity, comp));
            }
        }
        out
    }

    /// Smallest radial exponent across the smooth part.
    pub fn min_k(&self) -> Option<i32> {
        self.comps.iter().filter_map(Series::min_k).min()
    }

    pub fn max_mode(&self) -> u32 {
        self.comps.iter().map(Series::max_mode).max().unwrap_or(0)
    }

    pub fn max_log_power(&self) -> u8 {
        self.comps
            .iter()
            .flat_map(|s| s.terms().map(|(m, _)| m.p))
            .max()
            .unwrap_or(0)
    }

    /// Whether the smooth part is a polynomial in `(x₁, x₂)`.
    pub fn is_polynomial(&self) -> bool {
        self.point.is_empty() && self.comps.iter().all(Series::is_polynomial)
    }

    /// Numeric point-part coefficients.
    pub fn point_values(&self) -> Vec<(MultiIndex, Vec<f64>)> {
        self.point.eval(self.ell())
    }
}

/// `Σ c_i F_i` with real weights.
pub fn linear_combine(fields: &[(f64, &SingularField)]) -> Result<SingularField, FieldError> {
    let exact: Vec<(Coeff, &SingularField)> = fields
        .iter()
        .map(|(w, f)| (Coeff::from_f64(*w).unwrap_or_default(), *f))
        .collect();
    linear_combine_exact(&exact)
}

/// `Σ c_i F_i` with exact weights.
pub fn linear_combine_exact(
    fields: &[(Coeff, &SingularField)],
) -> Result<SingularField, FieldError> {
    let Some((_, first)) = fields.first() else {
        return Err(FieldError::InvalidTerm("empty combination".into()));
    };
    let mut acc = SingularField::zero(first.codomain, first.domain_radius);
    acc.rho = first.rho.clone();
    for (w, f) in fields {
        acc = acc.add(&f.scale(w))?;
    }
    Ok(acc)
}

/// `sd(F)`: max of `−k` over smooth terms and `|α| + 2` over delta entries.
pub fn scaling_degree(f: &SingularField) -> f64 {
    let smooth = f.min_k().map(|k| -(k as f64));
    let point = f.point.order().map(|o| o as f64 + 2.0);
    match (smooth, point) {
        (None, None) => f64::NEG_INFINITY,
        (a, b) => a.unwrap_or(f64::NEG_INFINITY).max(b.unwrap_or(f64::NEG_INFINITY)),
    }
}

/// `deg(F) = sd(F) − 2`.
pub fn degree_of_divergence(f: &SingularField) -> f64 {
    scaling_degree(f) - 2.0
}

pub fn restrict(f: &SingularField) -> SingularField {
    f.restrict()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tt(comp: Component) -> SmoothTerm {
        SmoothTerm::new(1.0, -1, 0, 1, Parity::Cos, comp)
    }

    #[test]
    fn polar_dyad_expands_to_cartesian() {
        let f = SingularField::from_terms(
            Codomain::SymTensor,
            1.0,
            &[tt(Component::PolarPair(Axis::R, Axis::R))],
        )
        .unwrap();
        let (r, th) = (0.3, 0.7);
        let v = f.eval_smooth(r, th).unwrap();
        let base = th.cos() / r;
        let expect = [
            base * th.cos() * th.cos(),
            base * th.cos() * th.sin(),
            base * th.sin() * th.cos(),
            base * th.sin() * th.sin(),
        ];
        for (a, b) in v.iter().zip(expect) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn asymmetric_input_rejected() {
        let err = SingularField::from_terms(
            Codomain::SymTensor,
            1.0,
            &[tt(Component::PolarPair(Axis::R, Axis::Theta))],
        );
        assert_eq!(err.unwrap_err(), FieldError::NotSymmetric);
    }

    #[test]
    fn sin_zero_rejected() {
        let t = SmoothTerm::new(1.0, 0, 0, 0, Parity::Sin, Component::Scalar);
        assert!(SingularField::from_terms(Codomain::Scalar, 1.0, &[t]).is_err());
    }

    #[test]
    fn combination_cancels() {
        let f = SingularField::from_terms(Codomain::Scalar, 1.0, &[tt(Component::Scalar)]).unwrap();
        let z = linear_combine(&[(1.0, &f), (-1.0, &f)]).unwrap();
        assert!(z.is_zero());
        assert_eq!(scaling_degree(&z), f64::NEG_INFINITY);
    }

    #[test]
    fn degrees_of_basics() {
        let d = SingularField::delta(Codomain::Scalar, 1.0, MultiIndex::ZERO, vec![Coeff::one()]).unwrap();
        assert_eq!(scaling_degree(&d), 2.0);
        assert_eq!(degree_of_divergence(&d), 0.0);
        let d1 = SingularField::delta(Codomain::Scalar, 1.0, MultiIndex(1, 0), vec![Coeff::one()]).unwrap();
        assert_eq!(scaling_degree(&d1), 3.0);
        let c = SingularField::from_terms(Codomain::Scalar, 1.0, &[tt(Component::Scalar)]).unwrap();
        assert_eq!(scaling_degree(&c), 1.0);
        let rl = SmoothTerm::new(1.0, 1, 1, 0, Parity::Cos, Component::Scalar);
        let rl = SingularField::from_terms(Codomain::Scalar, 1.0, &[rl]).unwrap();
        assert_eq!(scaling_degree(&rl), -1.0);
        assert_eq!(degree_of_divergence(&rl), -3.0);
    }

    #[test]
    fn mismatched_codomains_do_not_combine() {
        let a = SingularField::zero(Codomain::Scalar, 1.0);
        let b = SingularField::zero(Codomain::Vector, 1.0);
        assert!(matches!(
            linear_combine(&[(1.0, &a), (1.0, &b)]),
            Err(FieldError::CodomainMismatch { .. })
        ));
    }
}
