//! Point-supported antiderivatives of `div`, `curl` and `curl curl`, and incompatibility sources.

use crate::coeff::{rat, Coeff};
use crate::error::{CheckError, FieldError};
use crate::field_algebra::{
    curl, curl_curl, div, laplacian, Axis, Codomain, Component, MultiIndex, Parity, PointPart, SingularField,
    SmoothTerm,
};

use super::require_codomain;

fn point_source(e: &SingularField) -> Result<&PointPart, CheckError> {
    require_codomain(e, &[Codomain::Scalar], "source")?;
    if e.has_smooth_part() {
        return Err(CheckError::Precondition("source must be supported at O".into()));
    }
    Ok(e.point())
}

fn reject_low_orders(p: &PointPart, below: u32, op: &str) -> Result<(), CheckError> {
    if let Some((alpha, _)) = p.entries().find(|(a, _)| a.order() < below) {
        return Err(CheckError::NoPointAntiderivative(format!(
            "{op}: entry at order {} (α = {alpha}) forces a singular tail",
            alpha.order()
        )));
    }
    Ok(())
}

fn verified(out: SingularField, image: SingularField, target: &SingularField) -> Result<SingularField, CheckError> {
    if image.sub(target)?.is_zero() {
        Ok(out)
    } else {
        Err(CheckError::NoPointAntiderivative("construction failed its own verification".into()))
    }
}

/// Vector `E₁` supported at `O` with `Div E₁ = E`; needs `E^{(0,0)} = 0`.
pub fn point_antiderivative_div(e: &SingularField) -> Result<SingularField, CheckError> {
    let src = point_source(e)?;
    reject_low_orders(src, 1, "div")?;
    let mut point = PointPart::new(2);
    for (alpha, v) in src.entries() {
        let (dir, comp) = if alpha.0 >= 1 { (1, 0) } else { (2, 1) };
        point.add_component(alpha.lower(dir).expect("order ≥ 1"), comp, &v[0]);
    }
    let out = SingularField::zero(Codomain::Vector, e.domain_radius()).with_point(point)?;
    let image = div(&out)?;
    verified(out, image, e)
}

/// Vector `E₂` supported at `O` with `curl E₂ = E`; needs `E^{(0,0)} = 0`.
pub fn point_antiderivative_curl(e: &SingularField) -> Result<SingularField, CheckError> {
    let src = point_source(e)?;
    reject_low_orders(src, 1, "curl")?;
    let mut point = PointPart::new(2);
    for (alpha, v) in src.entries() {
        if alpha.0 >= 1 {
            point.add_component(alpha.lower(1).expect("α₁ ≥ 1"), 1, &v[0]);
        } else {
            point.add_component(alpha.lower(2).expect("α₂ ≥ 1"), 0, &-&v[0]);
        }
    }
    let out = SingularField::zero(Codomain::Vector, e.domain_radius()).with_point(point)?;
    let image = curl(&out)?;
    verified(out, image, e)
}

/// Sym-tensor `E` supported at `O` with `Curl Curl E = N`; needs `N^α = 0` for `|α| < 2`.
pub fn point_antiderivative_curlcurl(n: &SingularField) -> Result<SingularField, CheckError> {
    let src = point_source(n)?;
    reject_low_orders(src, 2, "curl curl")?;
    let mut point = PointPart::new(4);
    let minus_half = rat(-1, 2);
    for (alpha, v) in src.entries() {
        let c = &v[0];
        if alpha.0 >= 2 {
            point.add_component(MultiIndex(alpha.0 - 2, alpha.1), 3, c);
        } else if alpha.0 == 0 {
            point.add_component(MultiIndex(0, alpha.1 - 2), 0, c);
        } else {
            let off = c.scale(&minus_half);
            let beta = MultiIndex(0, alpha.1 - 1);
            point.add_component(beta, 1, &off);
            point.add_component(beta, 2, &off);
        }
    }
    let out = SingularField::zero(Codomain::SymTensor, n.domain_radius()).with_point(point)?;
    let image = curl_curl(&out)?;
    verified(out, image, n)
}

fn with_tail(
    e: &SingularField,
    axis: Axis,
    rest: impl Fn(&SingularField) -> Result<SingularField, CheckError>,
) -> Result<SingularField, CheckError> {
    let src = point_source(e)?;
    let c00 = src.coeff(MultiIndex::ZERO, 0);
    let mut higher = PointPart::new(1);
    for (alpha, v) in src.entries().filter(|(a, _)| a.order() > 0) {
        higher.add_entry(*alpha, v);
    }
    let base = rest(&SingularField::zero(Codomain::Scalar, e.domain_radius()).with_point(higher)?)?;
    let tail = SingularField::from_terms(
        Codomain::Vector,
        e.domain_radius(),
        &[SmoothTerm::exact(
            &c00 * &Coeff::inv_pi().scale(&rat(1, 2)),
            -1,
            0,
            0,
            Parity::Cos,
            Component::Polar(axis),
        )],
    )?
    .with_rho_of(e);
    Ok(base.add(&tail)?)
}

/// `Div v = E` for any point-supported scalar `E`, using `E^{(0,0)} e_r / (2πr)` for the monopole.
pub fn antiderivative_div_with_tail(e: &SingularField) -> Result<SingularField, CheckError> {
    with_tail(e, Axis::R, point_antiderivative_div)
}

/// `curl v = E` for any point-supported scalar `E`, using `E^{(0,0)} e_θ / (2πr)` for the monopole.
pub fn antiderivative_curl_with_tail(e: &SingularField) -> Result<SingularField, CheckError> {
    with_tail(e, Axis::Theta, point_antiderivative_curl)
}

/// Strain on Ω−O of a point defect with Burgers vector `b` and disclination charge `s`:
/// `sym(b ⊗ e_θ) / (2πr) + (s / 2π) ln r I`.
pub fn defect_strain(burgers: [f64; 2], disclination: f64, domain_radius: f64) -> Result<SingularField, FieldError> {
    let exact = |x: f64| Coeff::from_f64(x).ok_or_else(|| FieldError::NotRepresentable(format!("{x}")));
    let inv_two_pi = Coeff::inv_pi().scale(&rat(1, 2));
    let b1 = &exact(burgers[0])? * &inv_two_pi;
    let b2 = &exact(burgers[1])? * &inv_two_pi;
    let s = &exact(disclination)? * &inv_two_pi;
    let half = rat(1, 2);
    let pair = |i, j| Component::CartPair(i, j);
    let mut terms = vec![
        SmoothTerm::exact(-&b1, -1, 0, 1, Parity::Sin, pair(0, 0)),
        SmoothTerm::exact(b2.clone(), -1, 0, 1, Parity::Cos, pair(1, 1)),
        SmoothTerm::exact(s.clone(), 0, 1, 0, Parity::Cos, pair(0, 0)),
        SmoothTerm::exact(s, 0, 1, 0, Parity::Cos, pair(1, 1)),
    ];
    for (i, j) in [(0, 1), (1, 0)] {
        terms.push(SmoothTerm::exact(b1.scale(&half), -1, 0, 1, Parity::Cos, pair(i, j)));
        terms.push(SmoothTerm::exact(-&b2.scale(&half), -1, 0, 1, Parity::Sin, pair(i, j)));
    }
    SingularField::from_terms(Codomain::SymTensor, domain_radius, &terms)
}

/// `N = curl A + Θ + Δϑ`.
pub fn incompatibility_from_sources(
    a: &SingularField,
    theta: &SingularField,
    vartheta: &SingularField,
) -> Result<SingularField, CheckError> {
    require_codomain(a, &[Codomain::Vector], "A")?;
    require_codomain(theta, &[Codomain::Scalar], "Θ")?;
    require_codomain(vartheta, &[Codomain::Scalar], "ϑ")?;
    Ok(curl(a)?.add(theta)?.add(&laplacian(vartheta)?)?)
}
