//! Interaction Eshelby tensor and generalized forces on point defects.
//!
//! Cross products with `e₃` follow the left-handed rule `v × e₃ = (−v₂, v₁)`.
//! Under that rule the dislocation density `A` of a distortion `β` is minus its
//! classical curl, `A = −Curl β` with `(Curl β)_i = ∂₁β_i2 − ∂₂β_i1`; with this
//! pairing `Div J^I = (σ₂A) × e₃` holds exactly.

use crate::coeff::{rat, Coeff};
use crate::elasticity::{compliance_apply, general_point_solution, stiffness_apply, IsotropicModuli, PointSourceProblem};
use crate::error::{FieldError, MechanicsError};
use crate::field_algebra::{
    curl, div, gradient_potential, mat_vec, mul_scalar, Codomain, MultiIndex, PointPart, SingularField,
};
use crate::testfn_quadrature::{circle_quadrature, QuadratureSpec};
use crate::QuadratureError;

/// `β = E + a (e₁⊗e₂ − e₂⊗e₁)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Distortion {
    pub strain: SingularField,
    pub skew: SingularField,
}

impl Distortion {
    pub fn new(strain: SingularField, skew: SingularField) -> Result<Self, MechanicsError> {
        if strain.codomain() != Codomain::SymTensor {
            return Err(FieldError::CodomainMismatch {
                expected: Codomain::SymTensor,
                found: strain.codomain(),
            }
            .into());
        }
        if skew.codomain() != Codomain::Scalar {
            return Err(FieldError::CodomainMismatch {
                expected: Codomain::Scalar,
                found: skew.codomain(),
            }
            .into());
        }
        Ok(Self { strain, skew })
    }

    /// Distortion with zero skew part.
    pub fn symmetric(strain: SingularField) -> Result<Self, MechanicsError> {
        let skew = strain.component(0).scale(&Coeff::zero());
        Self::new(strain, skew)
    }

    /// `β` as a tensor field.
    pub fn tensor(&self) -> Result<SingularField, FieldError> {
        let z = self.skew.scale(&Coeff::zero());
        let w = SingularField::assemble(Codomain::Tensor, vec![z.clone(), self.skew.clone(), self.skew.neg(), z])?;
        self.strain.as_tensor().add(&w)
    }

    /// `A = −Curl β` in the sign convention of this module.
    pub fn dislocation_density(&self) -> Result<SingularField, FieldError> {
        Ok(curl(&self.tensor()?)?.neg())
    }

    fn is_smooth_at_origin(&self) -> bool {
        smooth_at_origin(&self.strain) && smooth_at_origin(&self.skew)
    }
}

fn smooth_at_origin(f: &SingularField) -> bool {
    f.point().is_empty() && f.is_polynomial()
}

/// `v × e₃ = (−v₂, v₁)`.
pub fn cross_e3(v: [f64; 2]) -> [f64; 2] {
    [-v[1], v[0]]
}

fn cross_e3_field(v: &SingularField) -> Result<SingularField, FieldError> {
    SingularField::assemble(Codomain::Vector, vec![v.component(1).neg(), v.component(0)])
}

/// `⟨ℂβ, γ⟩`; ℂ annihilates the skew part of `β`.
fn energy_pairing(beta: &Distortion, gamma: &SingularField, m: &IsotropicModuli) -> Result<SingularField, MechanicsError> {
    let c_beta = stiffness_apply(&beta.strain, m)?.as_tensor();
    let mut acc = mul_scalar(&c_beta.component(0), &gamma.component(0))?;
    for i in 1..4 {
        acc = acc.add(&mul_scalar(&c_beta.component(i), &gamma.component(i))?)?;
    }
    Ok(acc)
}

/// `(Bᵀ S)_ij = Σ_k B_ki S_kj`.
fn transpose_times(b: &SingularField, s: &SingularField) -> Result<SingularField, FieldError> {
    let s = s.as_tensor();
    let mut parts = Vec::with_capacity(4);
    for i in 0..2 {
        for j in 0..2 {
            let x = mul_scalar(&b.component(i), &s.component(j))?;
            let y = mul_scalar(&b.component(2 + i), &s.component(2 + j))?;
            parts.push(x.add(&y)?);
        }
    }
    SingularField::assemble(Codomain::Tensor, parts)
}

fn identity_times(s: &SingularField) -> Result<SingularField, FieldError> {
    let z = s.scale(&Coeff::zero());
    SingularField::assemble(Codomain::Tensor, vec![s.clone(), z.clone(), z, s.clone()])
}

/// `J^I = ½⟨ℂβ₁, β₂⟩I − β₂ᵀσ₁ + ½⟨ℂβ₂, β₁⟩I − β₁ᵀσ₂`; `β₂`, `σ₂` must be smooth at `O`.
pub fn interaction_eshelby(
    beta1: &Distortion,
    sigma1: &SingularField,
    beta2: &Distortion,
    sigma2: &SingularField,
    m: &IsotropicModuli,
) -> Result<SingularField, MechanicsError> {
    if !beta2.is_smooth_at_origin() || !smooth_at_origin(sigma2) {
        return Err(MechanicsError::OverlappingSupports);
    }
    let b1 = beta1.tensor()?;
    let b2 = beta2.tensor()?;
    let half = Coeff::from_rat(rat(1, 2));
    let w12 = energy_pairing(beta1, &b2, m)?;
    let w21 = energy_pairing(beta2, &b1, m)?;
    let w = w12.add(&w21)?.scale(&half);
    Ok(identity_times(&w)?
        .sub(&transpose_times(&b2, sigma1)?)?
        .sub(&transpose_times(&b1, sigma2)?)?)
}

/// Multipole representation `F^I = Σ F^{I,α} ∂^α δ_O`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralizedForce {
    pub entries: PointPart,
    ell: f64,
}

impl GeneralizedForce {
    /// `F^{I,α}` evaluated.
    pub fn coefficient(&self, alpha: MultiIndex) -> [f64; 2] {
        [
            self.entries.coeff(alpha, 0).eval(self.ell),
            self.entries.coeff(alpha, 1).eval(self.ell),
        ]
    }

    /// The net force `F^{I,(0,0)}`.
    pub fn force(&self) -> [f64; 2] {
        self.coefficient(MultiIndex::ZERO)
    }

    /// Order-one coefficients, the couple acting on the defect.
    pub fn couple(&self) -> Vec<(MultiIndex, [f64; 2])> {
        [MultiIndex(1, 0), MultiIndex(0, 1)]
            .into_iter()
            .map(|a| (a, self.coefficient(a)))
            .filter(|(_, v)| v.iter().any(|x| *x != 0.0))
            .collect()
    }

    pub fn order(&self) -> Option<u32> {
        self.entries.order()
    }
}

/// `F^I = (σ₂A) × e₃` for a point-supported dislocation density `A`.
pub fn generalized_force(a: &SingularField, sigma2: &SingularField) -> Result<GeneralizedForce, MechanicsError> {
    if a.codomain() != Codomain::Vector {
        return Err(FieldError::CodomainMismatch {
            expected: Codomain::Vector,
            found: a.codomain(),
        }
        .into());
    }
    if a.has_smooth_part() {
        return Err(FieldError::NotRepresentable("dislocation density must be supported at O".into()).into());
    }
    if !smooth_at_origin(sigma2) {
        return Err(MechanicsError::SingularAtOrigin("σ₂ must be a polynomial near O".into()));
    }
    let f = cross_e3_field(&mat_vec(sigma2, a)?)?;
    Ok(GeneralizedForce {
        entries: f.point().clone(),
        ell: a.ell(),
    })
}

/// Peach–Koehler force `(σ₂ᵒ b) × e₃`.
pub fn peach_koehler(b: [f64; 2], sigma: [[f64; 2]; 2]) -> [f64; 2] {
    let sb = [
        sigma[0][0] * b[0] + sigma[0][1] * b[1],
        sigma[1][0] * b[0] + sigma[1][1] * b[1],
    ];
    cross_e3(sb)
}

fn exact_vec(v: [f64; 2]) -> Result<[Coeff; 2], MechanicsError> {
    let c = |x: f64| Coeff::from_f64(x).ok_or_else(|| MechanicsError::from(FieldError::NotRepresentable(format!("{x}"))));
    Ok([c(v[0])?, c(v[1])?])
}

/// `A = b δ_O`.
pub fn dislocation_density(b: [f64; 2], domain_radius: f64) -> Result<SingularField, MechanicsError> {
    let [b1, b2] = exact_vec(b)?;
    Ok(SingularField::delta(Codomain::Vector, domain_radius, MultiIndex::ZERO, vec![b1, b2])?)
}

/// `A = (b ⊗ v) ∇δ_O = b ⟨∇δ_O, v⟩`.
pub fn dipole_density(b: [f64; 2], v: [f64; 2], domain_radius: f64) -> Result<SingularField, MechanicsError> {
    let [b1, b2] = exact_vec(b)?;
    let [v1, v2] = exact_vec(v)?;
    let mut p = PointPart::new(2);
    for (alpha, vj) in [(MultiIndex(1, 0), &v1), (MultiIndex(0, 1), &v2)] {
        p.add_entry(alpha, &[&b1 * vj, &b2 * vj]);
    }
    Ok(SingularField::zero(Codomain::Vector, domain_radius).with_point(p)?)
}

/// `A = (a/2)(e₁⊗e₂ − e₂⊗e₁) ∇δ_O`, a centre of dilation.
pub fn dilation_density(a: f64, domain_radius: f64) -> Result<SingularField, MechanicsError> {
    let half_a = &exact_vec([a, 0.0])?[0] * &Coeff::from_rat(rat(1, 2));
    let mut p = PointPart::new(2);
    p.add_component(MultiIndex(0, 1), 0, &half_a);
    p.add_component(MultiIndex(1, 0), 1, &-&half_a);
    Ok(SingularField::zero(Codomain::Vector, domain_radius).with_point(p)?)
}

/// `(σ₂ᵒ, [∂₁σ₂ᵒ, ∂₂σ₂ᵒ])` of a polynomial stress.
fn stress_jet(sigma2: &SingularField) -> Result<([[f64; 2]; 2], [[[f64; 2]; 2]; 2]), MechanicsError> {
    if !smooth_at_origin(sigma2) {
        return Err(MechanicsError::SingularAtOrigin("σ₂ must be a polynomial near O".into()));
    }
    let ell = sigma2.ell();
    let at = |c: usize, g: MultiIndex| {
        sigma2
            .component_series(c)
            .derivative_at_origin(g)
            .map(|v| v.eval(ell))
            .unwrap_or(0.0)
    };
    let mat = |g: MultiIndex| [[at(0, g), at(1, g)], [at(2, g), at(3, g)]];
    Ok((mat(MultiIndex::ZERO), [mat(MultiIndex(1, 0)), mat(MultiIndex(0, 1))]))
}

/// Force and couple on a dislocation dipole `(b ⊗ v)∇δ_O`.
#[derive(Clone, Debug, PartialEq)]
pub struct DipoleForce {
    /// `−∇σ₂ᵒ(b⊗v) × e₃` in closed form.
    pub force: [f64; 2],
    /// Order-one coefficients of `F^I`.
    pub couple: Vec<(MultiIndex, [f64; 2])>,
}

pub fn dipole_force_couple(b: [f64; 2], v: [f64; 2], sigma2: &SingularField) -> Result<DipoleForce, MechanicsError> {
    let (_, grad) = stress_jet(sigma2)?;
    // ∇σ(b⊗v) = Σ_j v_j (∂_j σ) b
    let mut g = [0.0; 2];
    for j in 0..2 {
        for i in 0..2 {
            g[i] += v[j] * (grad[j][i][0] * b[0] + grad[j][i][1] * b[1]);
        }
    }
    let f = cross_e3(g);
    let gf = generalized_force(&dipole_density(b, v, sigma2.domain_radius())?, sigma2)?;
    Ok(DipoleForce {
        force: [-f[0], -f[1]],
        couple: gf.couple(),
    })
}

/// Forces `(f₁, f₂)` on the dislocations `b/h` at `O` and `−b/h` at `O + h v`.
pub fn dipole_pair_forces(
    b: [f64; 2],
    v: [f64; 2],
    sigma2: &SingularField,
    h: f64,
) -> Result<([f64; 2], [f64; 2]), MechanicsError> {
    if !(h > 0.0) {
        return Err(FieldError::InvalidTerm(format!("separation must be positive, got {h}")).into());
    }
    let (s0, _) = stress_jet(sigma2)?;
    let x = [h * v[0], h * v[1]];
    let sh = sigma2.eval_xy(x[0], x[1]).or_else(|e| match e {
        FieldError::AtOrigin => Ok(sigma2.eval_xy(0.0, f64::MIN_POSITIVE)?),
        e => Err(e),
    })?;
    let sh = [[sh[0], sh[1]], [sh[2], sh[3]]];
    let f1 = peach_koehler(b, s0);
    let f2 = peach_koehler(b, sh);
    Ok(([f1[0] / h, f1[1] / h], [-f2[0] / h, -f2[1] / h]))
}

/// `|f₁ + f₂ − F|` along `h = 2⁻¹ … 2⁻⁸` and the observed convergence order.
pub fn dipole_convergence(
    b: [f64; 2],
    v: [f64; 2],
    sigma2: &SingularField,
) -> Result<(Vec<(f64, f64)>, f64), MechanicsError> {
    let target = dipole_force_couple(b, v, sigma2)?.force;
    let mut errs = Vec::new();
    for j in 1..=8 {
        let h = 0.5f64.powi(j);
        let (f1, f2) = dipole_pair_forces(b, v, sigma2, h)?;
        let e = ((f1[0] + f2[0] - target[0]).powi(2) + (f1[1] + f2[1] - target[1]).powi(2)).sqrt();
        errs.push((h, e));
    }
    let order = observed_order(&errs);
    Ok((errs, order))
}

/// Least-squares slope of `log e` against `log h`; infinite when every error is at round-off.
pub fn observed_order(errs: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = errs
        .iter()
        .filter(|(_, e)| *e > 1e-13)
        .map(|(h, e)| (h.ln(), e.ln()))
        .collect();
    if pts.len() < 2 {
        return f64::INFINITY;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Force and couple on a centre of dilation of strength `a`.
#[derive(Clone, Debug, PartialEq)]
pub struct DilationForce {
    /// `a ∇(tr σ₂)(O)`.
    pub force: [f64; 2],
    /// Order-one coefficients of `F^I` for the density of [`dilation_density`].
    pub couple: Vec<(MultiIndex, [f64; 2])>,
}

pub fn dilation_force(a: f64, sigma2: &SingularField) -> Result<DilationForce, MechanicsError> {
    let (_, grad) = stress_jet(sigma2)?;
    let force = [a * (grad[0][0][0] + grad[0][1][1]), a * (grad[1][0][0] + grad[1][1][1])];
    let gf = generalized_force(&dilation_density(a, sigma2.domain_radius())?, sigma2)?;
    Ok(DilationForce {
        force,
        couple: gf.couple(),
    })
}

/// Distortion and stress of the isolated defect with density `A` (no body force).
///
/// Solves for `σ₁` with `N = −curl A`, takes `E₁ = ℂ⁻¹σ₁`, and fixes the skew part
/// from `∇a = −A − Curl E₁` on Ω−O.
pub fn defect_fields(a: &SingularField, m: &IsotropicModuli) -> Result<(Distortion, SingularField), MechanicsError> {
    if a.codomain() != Codomain::Vector || a.has_smooth_part() {
        return Err(FieldError::NotRepresentable("dislocation density must be a point-supported vector".into()).into());
    }
    let n = curl(a)?.neg();
    let problem = PointSourceProblem::new(PointPart::new(2), n.point().clone(), m.clone(), a.domain_radius())?;
    let sigma1 = general_point_solution(&problem)?;
    let strain = compliance_apply(&sigma1, m)?;
    let curl_e = curl(&strain.as_tensor())?.restrict();
    let skew = gradient_potential(&curl_e.neg())?;
    let beta = Distortion::new(strain, skew)?;
    // The smooth potential fixes A only up to ∇ of a point-supported scalar.
    let gap = beta.dislocation_density()?.sub(a)?;
    let gauge = point_potential(&gap)?;
    let beta = Distortion::new(beta.strain, beta.skew.add(&gauge)?)?;
    Ok((beta, sigma1))
}

/// Point-supported `φ` with `∇φ = g`.
fn point_potential(g: &SingularField) -> Result<SingularField, MechanicsError> {
    let mut p = PointPart::new(1);
    for (alpha, v) in g.point().entries() {
        // φ^β sits at β + e₁ of the first component; the second is only checked.
        if let Some(beta) = alpha.lower(1) {
            p.add_component(beta, 0, &v[0]);
        }
    }
    let phi = g.component(0).scale(&Coeff::zero()).with_point(p)?;
    let grad = crate::field_algebra::grad(&phi)?;
    if g.has_smooth_part() || grad != *g {
        return Err(FieldError::NotAGradient("dislocation density is not reproduced by the solution".into()).into());
    }
    Ok(phi)
}

/// Compatible smooth distortion of a polynomial stress `σ₂`.
pub fn smooth_fields(sigma2: &SingularField, m: &IsotropicModuli) -> Result<Distortion, MechanicsError> {
    if !smooth_at_origin(sigma2) {
        return Err(MechanicsError::SingularAtOrigin("σ₂ must be a polynomial near O".into()));
    }
    let strain = compliance_apply(sigma2, m)?;
    let curl_e = curl(&strain.as_tensor())?;
    let skew = gradient_potential(&curl_e.neg())?;
    Distortion::new(strain, skew)
}

/// `∮_{∂B_ε} J n dl` by trapezoid rule over the ε-ladder; returns the value and the spread.
pub fn force_loop_oracle(j: &SingularField, spec: &QuadratureSpec) -> Result<([f64; 2], f64), MechanicsError> {
    if !j.codomain().is_tensor() {
        return Err(FieldError::CodomainMismatch {
            expected: Codomain::Tensor,
            found: j.codomain(),
        }
        .into());
    }
    spec.validate()?;
    let j = j.as_tensor();
    let nodes = 2 * j.max_mode() as usize + spec.angular_extra.max(16) + 16;
    let mut values = Vec::new();
    for eps in spec.ladder(0.5 * j.domain_radius()) {
        let v = circle_quadrature(
            &|th| {
                let s = j.eval_smooth(eps, th).expect("ε > 0");
                vec![s[0] * th.cos() + s[1] * th.sin(), s[2] * th.cos() + s[3] * th.sin()]
            },
            eps,
            nodes,
        );
        values.push([v[0], v[1]]);
    }
    let n = values.len() as f64;
    let mean = [
        values.iter().map(|v| v[0]).sum::<f64>() / n,
        values.iter().map(|v| v[1]).sum::<f64>() / n,
    ];
    let spread = values
        .iter()
        .map(|v| (v[0] - mean[0]).abs().max((v[1] - mean[1]).abs()))
        .fold(0.0, f64::max);
    let scale = mean[0].abs().max(mean[1].abs());
    if spread > spec.accept_tol * (1.0 + scale) {
        return Err(QuadratureError::NonConvergent {
            exponent: -spread.log10(),
        }
        .into());
    }
    Ok((mean, spread))
}

/// `Div J^I` computed in the algebra; its point part is the generalized force.
pub fn force_from_eshelby(j: &SingularField) -> Result<GeneralizedForce, MechanicsError> {
    let f = div(&j.as_tensor())?;
    if f.has_smooth_part() {
        return Err(FieldError::NotRepresentable("Div J^I does not vanish on Ω−O".into()).into());
    }
    Ok(GeneralizedForce {
        entries: f.point().clone(),
        ell: f.ell(),
    })
}
