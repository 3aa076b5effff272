//! Distributional derivatives with exact delta corrections.
//!
//! Non-integrable terms are extended by the finite-part rule with reference
//! radius `ρ`. Differentiating that extension yields the classical derivative
//! (again finite-part) plus the circle term
//! `Σ_β (∮_{∂B_ρ} f · w^β · n_i dl) ∂^β δ_O` over `|β| ≤ −k − 1`,
//! which is evaluated exactly by Fourier orthogonality.

use crate::coeff::{rat_int, rat_powi, Coeff};
use crate::error::FieldError;

use super::field::SingularField;
use super::point::PointPart;
use super::series::{Mono, Parity, Series};
use super::{Codomain, MultiIndex};

/// Point coefficients produced by differentiating one component series.
fn circle_corrections(s: &Series, dir: u8, rho: &crate::coeff::Rational) -> Vec<(MultiIndex, Coeff)> {
    let Some(kmin) = s.min_k() else {
        return Vec::new();
    };
    if kmin > -1 {
        return Vec::new();
    }
    let normal = match dir {
        1 => Series::trig(1, Parity::Cos),
        _ => Series::trig(1, Parity::Sin),
    };
    let two_pi = Coeff::pi().scale(&rat_int(2));
    let mut out = Vec::new();
    for beta in MultiIndex::up_to((-kmin - 1) as u32) {
        let b = beta.order() as i32;
        let part = s.filter(|m| m.k + b <= -1);
        if part.is_zero() {
            continue;
        }
        let prod = part
            .mul(&Series::w_core(beta))
            .and_then(|p| p.mul(&normal))
            .expect("monomials and trig factors carry no logs");
        let mut c = Coeff::zero();
        for (m, v) in prod.terms() {
            if m.n != 0 || m.k > -1 {
                continue;
            }
            let mut term = v * &two_pi;
            term = term.scale(&rat_powi(rho, m.k + 1));
            for _ in 0..m.p {
                term = &term * &Coeff::ell();
            }
            c += &term;
        }
        if !c.is_zero() {
            out.push((beta, c));
        }
    }
    out
}

/// `∂_i F` in the sense of distributions, `dir ∈ {1, 2}`.
pub fn partial_derivative(f: &SingularField, dir: u8) -> Result<SingularField, FieldError> {
    if dir != 1 && dir != 2 {
        return Err(FieldError::InvalidTerm(format!("direction {dir} is not 1 or 2")));
    }
    let width = f.codomain().len();
    let rho = f.reference_radius_exact().clone();
    let mut comps = Vec::with_capacity(width);
    let mut point = f.point().shift(dir);
    for (c, s) in f.components().iter().enumerate() {
        let d = s.partial(dir);
        if d.terms().any(|(m, _)| m.p > super::series::MAX_LOG_POWER) {
            return Err(FieldError::NotRepresentable(format!("{s:?}")));
        }
        comps.push(d);
        for (beta, coeff) in circle_corrections(s, dir, &rho) {
            point.add_component(beta, c, &coeff);
        }
    }
    let mut out = SingularField::from_components(f.codomain(), f.domain_radius(), comps, point)?;
    out.set_rho(rho);
    Ok(out)
}

fn require(f: &SingularField, op: &'static str, ok: &[Codomain]) -> Result<(), FieldError> {
    if ok.contains(&f.codomain()) {
        Ok(())
    } else {
        Err(FieldError::UnsupportedCodomain {
            op,
            codomain: f.codomain(),
        })
    }
}

fn d(f: &SingularField, c: usize, dir: u8) -> Result<SingularField, FieldError> {
    partial_derivative(&f.component(c), dir)
}

pub fn grad(f: &SingularField) -> Result<SingularField, FieldError> {
    require(f, "grad", &[Codomain::Scalar])?;
    SingularField::assemble(
        Codomain::Vector,
        vec![partial_derivative(f, 1)?, partial_derivative(f, 2)?],
    )
}

/// Vector: `∂_j v_j`. Tensor: `(Div V)_i = ∂_j V_ij`.
pub fn div(f: &SingularField) -> Result<SingularField, FieldError> {
    match f.codomain() {
        Codomain::Vector => d(f, 0, 1)?.add(&d(f, 1, 2)?),
        Codomain::Tensor | Codomain::SymTensor => SingularField::assemble(
            Codomain::Vector,
            vec![
                d(f, 0, 1)?.add(&d(f, 1, 2)?)?,
                d(f, 2, 1)?.add(&d(f, 3, 2)?)?,
            ],
        ),
        codomain => Err(FieldError::UnsupportedCodomain { op: "div", codomain }),
    }
}

/// Vector: `∂₁v₂ − ∂₂v₁`. Tensor: `(Curl V)_i = ∂₁V_i2 − ∂₂V_i1`.
pub fn curl(f: &SingularField) -> Result<SingularField, FieldError> {
    match f.codomain() {
        Codomain::Vector => d(f, 1, 1)?.sub(&d(f, 0, 2)?),
        Codomain::Tensor | Codomain::SymTensor => SingularField::assemble(
            Codomain::Vector,
            vec![
                d(f, 1, 1)?.sub(&d(f, 0, 2)?)?,
                d(f, 3, 1)?.sub(&d(f, 2, 2)?)?,
            ],
        ),
        codomain => Err(FieldError::UnsupportedCodomain { op: "curl", codomain }),
    }
}

pub fn curl_curl(f: &SingularField) -> Result<SingularField, FieldError> {
    require(f, "curl_curl", &[Codomain::Tensor, Codomain::SymTensor])?;
    curl(&curl(f)?)
}

pub fn laplacian(f: &SingularField) -> Result<SingularField, FieldError> {
    require(f, "laplacian", &[Codomain::Scalar])?;
    partial_derivative(&partial_derivative(f, 1)?, 1)?
        .add(&partial_derivative(&partial_derivative(f, 2)?, 2)?)
}

/// `sym ∇u` for a vector field `u`.
pub fn symmetric_gradient(u: &SingularField) -> Result<SingularField, FieldError> {
    require(u, "symmetric_gradient", &[Codomain::Vector])?;
    let half = Coeff::from_rat(crate::coeff::rat(1, 2));
    let off = d(u, 0, 2)?.add(&d(u, 1, 1)?)?.scale(&half);
    SingularField::assemble(
        Codomain::SymTensor,
        vec![d(u, 0, 1)?, off.clone(), off, d(u, 1, 2)?],
    )
}

/// Rotate a field by a quarter turn about `O`: `G(x) = Q F(Qᵀx) Qᵀ`.
pub fn rotate_quarter(f: &SingularField) -> Result<SingularField, FieldError> {
    let rot = f.map_series(Series::rotate_quarter);
    let point = f.point().rotate_indices();
    let rot = rot.with_point(point)?;
    let c = |i: usize| rot.component(i);
    match f.codomain() {
        Codomain::Scalar => Ok(rot),
        Codomain::Vector => SingularField::assemble(Codomain::Vector, vec![c(1).neg(), c(0)]),
        codomain => SingularField::assemble(
            codomain,
            vec![c(3), c(2).neg(), c(1).neg(), c(0)],
        ),
    }
}

/// `∫ r^k (ln r)^p dr` as a series in `r` (no constant), for `p ≤ 2`.
fn radial_antiderivative(m: &Mono, c: &Coeff) -> Result<Series, FieldError> {
    let mut out = Series::zero();
    let (n, par) = (m.n, m.parity);
    if m.k == -1 {
        if m.p >= super::series::MAX_LOG_POWER {
            return Err(FieldError::LogPowerOverflow(m.p as u32 + 1));
        }
        let q = crate::coeff::rat(1, m.p as i64 + 1);
        out.add_term(Mono::new(0, m.p + 1, n, par), c.scale(&q));
        return Ok(out);
    }
    // ∫ r^k L^p = r^{k+1} Σ_j (−1)^j p!/(p−j)! L^{p−j} / (k+1)^{j+1}
    let kp1 = rat_int(m.k as i64 + 1);
    let mut falling = rat_int(1);
    for j in 0..=m.p {
        let sign = if j % 2 == 0 { rat_int(1) } else { rat_int(-1) };
        let q = sign * falling.clone() / rat_powi(&kp1, j as i32 + 1);
        out.add_term(Mono::new(m.k + 1, m.p - j, n, par), c.scale(&q));
        falling *= rat_int((m.p - j) as i64);
    }
    Ok(out)
}

/// Scalar potential `a` with `∇a = g` on Ω−O (smooth part of `g` only).
pub fn gradient_potential(g: &SingularField) -> Result<SingularField, FieldError> {
    require(g, "gradient_potential", &[Codomain::Vector])?;
    let g1 = g.component_series(0);
    let g2 = g.component_series(1);
    let cos = |s: &Series| s.mul_trig(1, Parity::Cos);
    let sin = |s: &Series| s.mul_trig(1, Parity::Sin);
    let g_r = cos(g1).add(&sin(g2));
    // r g_θ = ∂_θ a
    let r_g_theta = sin(g1).neg().add(&cos(g2)).shift_k(1);
    let mut a = Series::zero();
    for (m, c) in g_r.terms() {
        a = a.add(&radial_antiderivative(m, c)?);
    }
    let rest = r_g_theta.sub(&a.d_theta());
    for (m, c) in rest.terms() {
        if m.k != 0 || m.p != 0 {
            return Err(FieldError::NotAGradient(format!(
                "angular remainder depends on r: {m:?}"
            )));
        }
        match (m.n, m.parity) {
            (0, _) => {
                return Err(FieldError::NotAGradient(format!(
                    "potential is multivalued (winding coefficient {c})"
                )))
            }
            (n, Parity::Cos) => a.add_term(
                Mono::new(0, 0, n, Parity::Sin),
                c.scale(&crate::coeff::rat(1, n as i64)),
            ),
            (n, Parity::Sin) => a.add_term(
                Mono::new(0, 0, n, Parity::Cos),
                c.scale(&crate::coeff::rat(-1, n as i64)),
            ),
        }
    }
    let out = SingularField::from_components(
        Codomain::Scalar,
        g.domain_radius(),
        vec![a.clone()],
        PointPart::new(1),
    )?;
    let check = [a.partial(1), a.partial(2)];
    if check[0] != *g1 || check[1] != *g2 {
        return Err(FieldError::NotAGradient("curl of the field is nonzero on Ω−O".into()));
    }
    let mut out = out;
    out.set_rho(g.reference_radius_exact().clone());
    Ok(out)
}
