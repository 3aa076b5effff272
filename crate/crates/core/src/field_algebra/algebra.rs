//! Pointwise algebra: transposes, traces, the map 𝔸, and products.
//!
//! A product is only formed when one factor is a polynomial near `O` (then the
//! finite-part extension commutes with multiplication and delta entries follow
//! the Leibniz rule) or when the result is locally integrable.

use crate::coeff::{rat_int, Coeff};
use crate::error::FieldError;

use super::field::SingularField;
use super::point::PointPart;
use super::series::{binomial, Series};
use super::{Codomain, MultiIndex};

fn tensor_only(f: &SingularField, op: &'static str) -> Result<(), FieldError> {
    if f.codomain().is_tensor() {
        Ok(())
    } else {
        Err(FieldError::UnsupportedCodomain {
            op,
            codomain: f.codomain(),
        })
    }
}

pub fn transpose(f: &SingularField) -> Result<SingularField, FieldError> {
    tensor_only(f, "transpose")?;
    let c = |i| f.component(i);
    SingularField::assemble(f.codomain(), vec![c(0), c(2), c(1), c(3)])
}

pub fn trace(f: &SingularField) -> Result<SingularField, FieldError> {
    tensor_only(f, "trace")?;
    f.component(0).add(&f.component(3))
}

/// `𝔸T = [[T₂₂, −T₂₁], [−T₁₂, T₁₁]]`.
pub fn amap(f: &SingularField) -> Result<SingularField, FieldError> {
    tensor_only(f, "amap")?;
    let c = |i| f.component(i);
    SingularField::assemble(f.codomain(), vec![c(3), c(2).neg(), c(1).neg(), c(0)])
}

/// `½(T + Tᵀ)` as a sym-tensor field.
pub fn symmetrize(f: &SingularField) -> Result<SingularField, FieldError> {
    tensor_only(f, "symmetrize")?;
    let half = Coeff::from_rat(crate::coeff::rat(1, 2));
    let off = f.component(1).add(&f.component(2))?.scale(&half);
    SingularField::assemble(
        Codomain::SymTensor,
        vec![f.component(0), off.clone(), off, f.component(3)],
    )
}

/// `s · I` for a scalar field `s`.
pub fn times_identity(s: &SingularField) -> Result<SingularField, FieldError> {
    if s.codomain() != Codomain::Scalar {
        return Err(FieldError::UnsupportedCodomain {
            op: "times_identity",
            codomain: s.codomain(),
        });
    }
    let z = s.scale(&Coeff::zero());
    SingularField::assemble(Codomain::SymTensor, vec![s.clone(), z.clone(), z, s.clone()])
}

/// `f · ∂^α δ` for a polynomial `f`, expanded by the Leibniz rule.
fn poly_times_point(f: &Series, point: &PointPart) -> Result<PointPart, FieldError> {
    let mut out = PointPart::new(point.width());
    if f.is_zero() {
        return Ok(out);
    }
    for (alpha, value) in point.entries() {
        for beta in alpha.below() {
            let gamma = MultiIndex(alpha.0 - beta.0, alpha.1 - beta.1);
            let deriv = f.derivative_at_origin(gamma).ok_or_else(|| {
                FieldError::NotRepresentable("product of a delta with a non-smooth factor".into())
            })?;
            if deriv.is_zero() {
                continue;
            }
            let sign = if gamma.order() % 2 == 0 { 1 } else { -1 };
            let q = rat_int(
                sign * (binomial(alpha.0, beta.0) * binomial(alpha.1, beta.1)) as i64,
            );
            let c = deriv.scale(&q);
            let scaled: Vec<Coeff> = value.iter().map(|v| v * &c).collect();
            out.add_entry(beta, &scaled);
        }
    }
    Ok(out)
}

/// Product of two scalar fields.
pub fn mul_scalar(a: &SingularField, b: &SingularField) -> Result<SingularField, FieldError> {
    for f in [a, b] {
        if f.codomain() != Codomain::Scalar {
            return Err(FieldError::UnsupportedCodomain {
                op: "mul_scalar",
                codomain: f.codomain(),
            });
        }
    }
    a.compatible(b)?;
    let (sa, sb) = (a.component_series(0), b.component_series(0));
    if !a.point().is_empty() && !b.point().is_empty() {
        return Err(FieldError::NotRepresentable("product of two delta multipoles".into()));
    }
    let smooth = sa.mul(sb)?;
    let poly_factor = sa.is_polynomial() && a.point().is_empty()
        || sb.is_polynomial() && b.point().is_empty();
    if !poly_factor && smooth.min_k().is_some_and(|k| k <= -2) {
        return Err(FieldError::NotRepresentable(
            "product of two singular factors is not locally integrable".into(),
        ));
    }
    let mut point = PointPart::new(1);
    if !a.point().is_empty() {
        point = point.add(&poly_times_point(sb, a.point())?);
    }
    if !b.point().is_empty() {
        point = point.add(&poly_times_point(sa, b.point())?);
    }
    Ok(SingularField::from_components(
        Codomain::Scalar,
        a.domain_radius(),
        vec![smooth],
        point,
    )?
    .with_rho_of(a))
}

/// `A·B` for tensor fields.
pub fn tensor_product(a: &SingularField, b: &SingularField) -> Result<SingularField, FieldError> {
    tensor_only(a, "tensor_product")?;
    tensor_only(b, "tensor_product")?;
    let mut parts = Vec::with_capacity(4);
    for i in 0..2 {
        for j in 0..2 {
            let x = mul_scalar(&a.component(2 * i), &b.component(j))?;
            let y = mul_scalar(&a.component(2 * i + 1), &b.component(2 + j))?;
            parts.push(x.add(&y)?);
        }
    }
    SingularField::assemble(Codomain::Tensor, parts)
}

/// `A v` for a tensor `A` and vector `v`.
pub fn mat_vec(a: &SingularField, v: &SingularField) -> Result<SingularField, FieldError> {
    tensor_only(a, "mat_vec")?;
    if v.codomain() != Codomain::Vector {
        return Err(FieldError::CodomainMismatch {
            expected: Codomain::Vector,
            found: v.codomain(),
        });
    }
    let mut parts = Vec::with_capacity(2);
    for i in 0..2 {
        let x = mul_scalar(&a.component(2 * i), &v.component(0))?;
        let y = mul_scalar(&a.component(2 * i + 1), &v.component(1))?;
        parts.push(x.add(&y)?);
    }
    SingularField::assemble(Codomain::Vector, parts)
}

/// `⟨A, B⟩ = A_ij B_ij`.
pub fn double_dot(a: &SingularField, b: &SingularField) -> Result<SingularField, FieldError> {
    tensor_only(a, "double_dot")?;
    tensor_only(b, "double_dot")?;
    let mut acc = mul_scalar(&a.component(0), &b.component(0))?;
    for i in 1..4 {
        acc = acc.add(&mul_scalar(&a.component(i), &b.component(i))?)?;
    }
    Ok(acc)
}

/// Multiply every component by a scalar field.
pub fn scalar_times(s: &SingularField, f: &SingularField) -> Result<SingularField, FieldError> {
    let parts = (0..f.codomain().len())
        .map(|c| mul_scalar(s, &f.component(c)))
        .collect::<Result<Vec<_>, _>>()?;
    if f.codomain() == Codomain::Scalar {
        return Ok(parts.into_iter().next().expect("one part"));
    }
    SingularField::assemble(f.codomain(), parts)
}

/// Constant tensor field with exact entries (row-major).
pub fn constant_tensor(
    codomain: Codomain,
    domain_radius: f64,
    entries: &[Coeff],
) -> Result<SingularField, FieldError> {
    let comps = entries.iter().map(|c| Series::constant(c.clone())).collect();
    SingularField::from_components(codomain, domain_radius, comps, PointPart::new(codomain.len()))
}
