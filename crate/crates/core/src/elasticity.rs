//! Isotropic plane-strain elasticity and the closed-form point-source stresses.

use serde::{Deserialize, Serialize};

use crate::checkers::{check_equilibrium_with, check_incompatibility_with, CheckReport};
use crate::coeff::{rat, rat_from_f64, rat_int, Coeff, Rational};
use crate::error::{FieldError, MechanicsError};
use crate::field_algebra::{
    partial_derivative, rotate_quarter, times_identity, trace, Axis, Codomain, Component, MultiIndex, Parity,
    PointPart, SingularField, SmoothTerm,
};
use crate::testfn_quadrature::QuadratureSpec;

/// Young's modulus and Poisson ratio, held exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawModuli", into = "RawModuli")]
pub struct IsotropicModuli {
    youngs: Rational,
    poisson: Rational,
}

#[derive(Clone, Copy, Serialize, Deserialize)]
struct RawModuli {
    youngs: f64,
    poisson: f64,
}

impl TryFrom<RawModuli> for IsotropicModuli {
    type Error = MechanicsError;
    fn try_from(r: RawModuli) -> Result<Self, Self::Error> {
        IsotropicModuli::new(r.youngs, r.poisson)
    }
}

impl From<IsotropicModuli> for RawModuli {
    fn from(m: IsotropicModuli) -> Self {
        RawModuli {
            youngs: m.youngs(),
            poisson: m.poisson(),
        }
    }
}

impl IsotropicModuli {
    /// Requires `E > 0` and `−1 < ν < 1/2`.
    pub fn new(youngs: f64, poisson: f64) -> Result<Self, MechanicsError> {
        let bad = |msg: String| MechanicsError::InvalidModuli(msg);
        let y = rat_from_f64(youngs).ok_or_else(|| bad(format!("Young's modulus {youngs} is not finite")))?;
        let nu = rat_from_f64(poisson).ok_or_else(|| bad(format!("Poisson ratio {poisson} is not finite")))?;
        if y <= rat_int(0) {
            return Err(bad(format!("Young's modulus must be positive, got {youngs}")));
        }
        if nu <= rat_int(-1) || nu >= rat(1, 2) {
            return Err(bad(format!("Poisson ratio must lie in (-1, 1/2), got {poisson}")));
        }
        Ok(Self { youngs: y, poisson: nu })
    }

    pub fn youngs(&self) -> f64 {
        crate::coeff::rat_to_f64(&self.youngs)
    }

    pub fn poisson(&self) -> f64 {
        crate::coeff::rat_to_f64(&self.poisson)
    }

    /// `((1+ν)/E, ν(1+ν)/E)`: the compliance is `a σ − b (tr σ) I`.
    fn compliance_pair(&self) -> (Rational, Rational) {
        let a = (rat_int(1) + &self.poisson) / &self.youngs;
        let b = &self.poisson * &a;
        (a, b)
    }

    /// `(1/a, b / (a (a − 2b)))`: the stiffness is `p E + q (tr E) I`.
    fn stiffness_pair(&self) -> (Rational, Rational) {
        let (a, b) = self.compliance_pair();
        let two_b = &b * rat_int(2);
        let q = &b / (&a * (&a - two_b));
        (rat_int(1) / a, q)
    }

    pub(crate) fn nu(&self) -> &Rational {
        &self.poisson
    }

    pub(crate) fn young_exact(&self) -> &Rational {
        &self.youngs
    }
}

fn require_sym(f: &SingularField) -> Result<(), MechanicsError> {
    if f.codomain() == Codomain::SymTensor {
        Ok(())
    } else {
        Err(FieldError::CodomainMismatch {
            expected: Codomain::SymTensor,
            found: f.codomain(),
        }
        .into())
    }
}

fn linear_with_trace(f: &SingularField, p: Rational, q: Rational) -> Result<SingularField, MechanicsError> {
    require_sym(f)?;
    let iso = times_identity(&trace(f)?)?.scale(&Coeff::from_rat(q));
    Ok(f.scale(&Coeff::from_rat(p)).add(&iso)?)
}

/// `ℂ⁻¹σ = ((1+ν)/E) σ − (ν(1+ν)/E) (tr σ) I`.
pub fn compliance_apply(sigma: &SingularField, m: &IsotropicModuli) -> Result<SingularField, MechanicsError> {
    let (a, b) = m.compliance_pair();
    linear_with_trace(sigma, a, -b)
}

/// `ℂE`, the exact inverse of [`compliance_apply`].
pub fn stiffness_apply(strain: &SingularField, m: &IsotropicModuli) -> Result<SingularField, MechanicsError> {
    let (p, q) = m.stiffness_pair();
    linear_with_trace(strain, p, q)
}

fn polar(c: Coeff, k: i32, p: u8, n: u32, par: Parity, a: Axis, b: Axis) -> SmoothTerm {
    SmoothTerm::exact(c, k, p, n, par, Component::PolarPair(a, b))
}

/// `σ₁`: stress of a unit point force along `e₁`, so `Div σ₁ + δ_O e₁ = 0`.
pub fn kelvin_stress(m: &IsotropicModuli, domain_radius: f64) -> Result<SingularField, MechanicsError> {
    let nu = m.nu();
    let one = rat_int(1);
    let two = rat_int(2);
    let one_m_2nu = &one - &two * nu;
    // (1−2ν) / (4π(1−ν))
    let k = Coeff::monomial(&one_m_2nu / (rat_int(4) * (&one - nu)), -1, 0);
    let rr = k.scale(&((&two * nu - rat_int(3)) / &one_m_2nu));
    use Axis::{Theta, R};
    let terms = [
        polar(rr, -1, 0, 1, Parity::Cos, R, R),
        polar(k.clone(), -1, 0, 1, Parity::Sin, R, Theta),
        polar(k.clone(), -1, 0, 1, Parity::Sin, Theta, R),
        polar(k, -1, 0, 1, Parity::Cos, Theta, Theta),
    ];
    Ok(SingularField::from_terms(Codomain::SymTensor, domain_radius, &terms)?)
}

/// Unit point force along `e₂`: `σ₁` turned by a quarter rotation.
pub fn kelvin_stress_e2(m: &IsotropicModuli, domain_radius: f64) -> Result<SingularField, MechanicsError> {
    Ok(rotate_quarter(&kelvin_stress(m, domain_radius)?)?)
}

/// `σ₂`: stress of a unit point incompatibility, `Curl Curl ℂ⁻¹σ₂ = δ_O`.
pub fn incompatibility_stress(m: &IsotropicModuli, domain_radius: f64) -> Result<SingularField, MechanicsError> {
    let nu = m.nu();
    let one = rat_int(1);
    // E / (8π(1−ν²))
    let c = Coeff::monomial(m.young_exact() / (rat_int(8) * (&one - nu * nu)), -1, 0);
    use Axis::{Theta, R};
    let terms = [
        polar(c.scale(&rat_int(2)), 0, 1, 0, Parity::Cos, R, R),
        polar(c.clone(), 0, 0, 0, Parity::Cos, R, R),
        polar(c.scale(&rat_int(2)), 0, 1, 0, Parity::Cos, Theta, Theta),
        polar(c.scale(&rat_int(3)), 0, 0, 0, Parity::Cos, Theta, Theta),
    ];
    Ok(SingularField::from_terms(Codomain::SymTensor, domain_radius, &terms)?)
}

fn dilatation_core(domain_radius: f64, point: Coeff) -> Result<SingularField, MechanicsError> {
    let c = Coeff::inv_pi();
    use Axis::{Theta, R};
    let smooth = SingularField::from_terms(
        Codomain::SymTensor,
        domain_radius,
        &[
            polar(-&c, -2, 0, 0, Parity::Cos, R, R),
            polar(c, -2, 0, 0, Parity::Cos, Theta, Theta),
        ],
    )?;
    let p = SingularField::delta_identity(Codomain::SymTensor, domain_radius, MultiIndex::ZERO, point)?;
    Ok(smooth.add(&p)?)
}

/// `σ₃ = (1/πr²)(−e_r⊗e_r + e_θ⊗e_θ) − δ_O I`; balanced without body force.
pub fn dilatation_stress(_m: &IsotropicModuli, domain_radius: f64) -> Result<SingularField, MechanicsError> {
    dilatation_core(domain_radius, Coeff::from_int(-1))
}

/// `σ₄`: the smooth part of `σ₃` plus `δ_O I / (1−2ν)`, balancing a dipole body force.
pub fn dipole_body_force_stress(m: &IsotropicModuli, domain_radius: f64) -> Result<SingularField, MechanicsError> {
    let c = rat_int(1) / (rat_int(1) - rat_int(2) * m.nu());
    dilatation_core(domain_radius, Coeff::from_rat(c))
}

/// Incompatibility carried by `σ₃`: `(2(ν²−1)/E) Δδ_O`.
pub fn dilatation_incompatibility(m: &IsotropicModuli, domain_radius: f64) -> Result<SingularField, MechanicsError> {
    let nu = m.nu();
    let c = Coeff::from_rat(rat_int(2) * (nu * nu - rat_int(1)) / m.young_exact());
    let mut p = PointPart::new(1);
    p.add_component(MultiIndex(2, 0), 0, &c);
    p.add_component(MultiIndex(0, 2), 0, &c);
    Ok(SingularField::zero(Codomain::Scalar, domain_radius).with_point(p)?)
}

/// Body force balanced by `σ₄`: `(2(ν−1)/(1−2ν)) ∇δ_O`.
pub fn dipole_body_force(m: &IsotropicModuli, domain_radius: f64) -> Result<SingularField, MechanicsError> {
    let nu = m.nu();
    let c = Coeff::from_rat(rat_int(2) * (nu - rat_int(1)) / (rat_int(1) - rat_int(2) * nu));
    let mut p = PointPart::new(2);
    p.add_component(MultiIndex(1, 0), 0, &c);
    p.add_component(MultiIndex(0, 1), 1, &c);
    Ok(SingularField::zero(Codomain::Vector, domain_radius).with_point(p)?)
}

/// Point sources `B = Σ B^α ∂^α δ_O` (vector) and `N = Σ N^α ∂^α δ_O` (scalar).
#[derive(Clone, Debug, PartialEq)]
pub struct PointSourceProblem {
    pub body_force: PointPart,
    pub incompatibility: PointPart,
    pub moduli: IsotropicModuli,
    pub domain_radius: f64,
}

impl PointSourceProblem {
    pub fn new(
        body_force: PointPart,
        incompatibility: PointPart,
        moduli: IsotropicModuli,
        domain_radius: f64,
    ) -> Result<Self, MechanicsError> {
        if body_force.width() != 2 || incompatibility.width() != 1 {
            return Err(FieldError::InvalidTerm("body force must be a vector and N a scalar".into()).into());
        }
        if !(domain_radius.is_finite() && domain_radius > 0.0) {
            return Err(FieldError::InvalidDomain(format!("radius {domain_radius}")).into());
        }
        Ok(Self {
            body_force,
            incompatibility,
            moduli,
            domain_radius,
        })
    }

    pub fn body_force_field(&self) -> Result<SingularField, FieldError> {
        SingularField::zero(Codomain::Vector, self.domain_radius).with_point(self.body_force.clone())
    }

    pub fn incompatibility_field(&self) -> Result<SingularField, FieldError> {
        SingularField::zero(Codomain::Scalar, self.domain_radius).with_point(self.incompatibility.clone())
    }
}

fn derivative(f: &SingularField, alpha: MultiIndex) -> Result<SingularField, FieldError> {
    let mut out = f.clone();
    for _ in 0..alpha.0 {
        out = partial_derivative(&out, 1)?;
    }
    for _ in 0..alpha.1 {
        out = partial_derivative(&out, 2)?;
    }
    Ok(out)
}

/// `σ = Σ B₁^α ∂^α σ₁ + Σ B₂^α ∂^α σ₁' + Σ N^α ∂^α σ₂` with distributional derivatives,
/// where `σ₁'` is the `e₂` Kelvin stress.
pub fn general_point_solution(p: &PointSourceProblem) -> Result<SingularField, MechanicsError> {
    let r = p.domain_radius;
    let bases = [
        kelvin_stress(&p.moduli, r)?,
        kelvin_stress_e2(&p.moduli, r)?,
        incompatibility_stress(&p.moduli, r)?,
    ];
    let mut sigma = SingularField::zero(Codomain::SymTensor, r);
    let sources = [(&p.body_force, 0, 0), (&p.body_force, 1, 1), (&p.incompatibility, 0, 2)];
    for (src, comp, base) in sources {
        for (alpha, v) in src.entries() {
            if v[comp].is_zero() {
                continue;
            }
            let term = derivative(&bases[base], *alpha)?.scale(&v[comp]);
            sigma = sigma.add(&term)?;
        }
    }
    Ok(sigma)
}

/// `(Div σ + B = 0, Curl Curl ℂ⁻¹σ = N)` as two reports.
pub fn verify_solution(
    sigma: &SingularField,
    p: &PointSourceProblem,
) -> Result<(CheckReport, CheckReport), MechanicsError> {
    verify_solution_with(sigma, p, &QuadratureSpec::default())
}

pub fn verify_solution_with(
    sigma: &SingularField,
    p: &PointSourceProblem,
    spec: &QuadratureSpec,
) -> Result<(CheckReport, CheckReport), MechanicsError> {
    let eq = check_equilibrium_with(sigma, &p.body_force_field()?, spec)?;
    let strain = compliance_apply(sigma, &p.moduli)?;
    let inc = check_incompatibility_with(&strain, &p.incompatibility_field()?, spec)?;
    Ok((eq, inc))
}
