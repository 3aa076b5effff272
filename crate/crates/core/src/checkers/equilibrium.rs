//! Stress equilibrium `Div σ + B = 0`, in full and for the restriction to Ω−O.

use crate::coeff::Coeff;
use crate::error::CheckError;
use crate::field_algebra::{degree_of_divergence, div, Codomain, MultiIndex, PointPart, SingularField};
use crate::testfn_quadrature::{circle_quadrature, make_w_alpha, pair, QuadratureSpec};

use super::report::{CheckReport, Condition, DegreeReport, Verdict};
use super::{exact_size, oracle_tolerance, require_codomain, test_support};

/// Largest multi-index order probed when `deg ≥ 0` allows it.
pub(crate) fn probe_order(deg: f64, shift: f64) -> Option<u32> {
    let top = deg + shift;
    if top.is_finite() && top >= 0.0 {
        Some(top.floor() as u32)
    } else {
        None
    }
}

/// Full distributional check of `Div σ + B = 0`.
pub fn check_equilibrium(sigma: &SingularField, body: &SingularField) -> Result<CheckReport, CheckError> {
    check_equilibrium_with(sigma, body, &QuadratureSpec::default())
}

pub fn check_equilibrium_with(
    sigma: &SingularField,
    body: &SingularField,
    spec: &QuadratureSpec,
) -> Result<CheckReport, CheckError> {
    require_codomain(sigma, &[Codomain::SymTensor, Codomain::Tensor], "stress")?;
    require_codomain(body, &[Codomain::Vector], "body force")?;
    let residual = div(sigma)?.add(body)?;
    let mut conditions = vec![
        Condition::exact(
            "div σ + B on Ω−O (symbolic)",
            exact_size(&residual.restrict()),
            !residual.has_smooth_part(),
        ),
        Condition::exact(
            "point part of Div σ + B (symbolic)",
            exact_size(&residual.point_only()),
            residual.point().is_empty(),
        ),
    ];
    let deg_s = degree_of_divergence(sigma);
    let deg_b = degree_of_divergence(body);
    let holds = deg_b <= deg_s + 1.0;
    conditions.push(Condition::exact("deg(B) ≤ deg(σ) + 1", deg_b - deg_s - 1.0, holds));
    if let Some(top) = probe_order(deg_s, 1.0) {
        let support = test_support(sigma);
        for alpha in MultiIndex::up_to(top) {
            let w = make_w_alpha(alpha, support)?;
            let s1 = pair(sigma, &w.partial(1), spec)?;
            let s2 = pair(sigma, &w.partial(2), spec)?;
            let b = pair(body, &w, spec)?;
            for i in 0..2 {
                let terms = [s1[2 * i], s2[2 * i + 1], b[i]];
                let value = -(terms[0] + terms[1]) + terms[2];
                let scale = terms.iter().fold(0.0f64, |m, t| m.max(t.abs()));
                conditions.push(Condition::numeric(
                    format!("−σ(∇(w^{alpha} e{})) + B(w^{alpha} e{}) (oracle)", i + 1, i + 1),
                    value,
                    oracle_tolerance(scale),
                ));
            }
        }
    }
    let degree = DegreeReport {
        degrees: vec![("σ".into(), deg_s), ("B".into(), deg_b)],
        inequality: "deg(B) ≤ deg(σ) + 1".into(),
        holds,
    };
    Ok(CheckReport::from_conditions("equilibrium", conditions, degree))
}

/// `∮_{∂B_ε} σ n dl` in closed form (Fourier orthogonality), evaluated at `ε`.
pub fn loop_integral_traction(sigma0: &SingularField, eps: f64) -> Result<[f64; 2], CheckError> {
    require_codomain(sigma0, &[Codomain::SymTensor, Codomain::Tensor], "stress")?;
    if !(eps > 0.0 && eps < sigma0.domain_radius()) {
        return Err(CheckError::Precondition(format!(
            "loop radius {eps} must lie in (0, {})",
            sigma0.domain_radius()
        )));
    }
    let ell = sigma0.ell();
    let traction = traction_series(sigma0);
    let mut out = [0.0; 2];
    for (i, t) in traction.iter().enumerate() {
        for ((k, p), c) in t.angular_mean_terms() {
            out[i] += c.eval(ell) * eps.powi(k + 1) * eps.ln().powi(p as i32);
        }
    }
    Ok(out)
}

fn traction_series(sigma0: &SingularField) -> [crate::field_algebra::Series; 2] {
    use crate::field_algebra::Parity;
    let c = |i: usize| sigma0.component_series(i);
    let row = |i: usize| {
        c(2 * i)
            .mul_trig(1, Parity::Cos)
            .add(&c(2 * i + 1).mul_trig(1, Parity::Sin))
    };
    [row(0), row(1)]
}

/// The ε-independent part of the traction loop: coefficient of `r^{-1}` in mode 0.
pub fn loop_integral_traction_exact(sigma0: &SingularField) -> Result<[Coeff; 2], CheckError> {
    require_codomain(sigma0, &[Codomain::SymTensor, Codomain::Tensor], "stress")?;
    let traction = traction_series(sigma0);
    let mut out = [Coeff::zero(), Coeff::zero()];
    for (i, t) in traction.iter().enumerate() {
        for ((k, p), c) in t.angular_mean_terms() {
            if k == -1 && p == 0 {
                out[i] += &c;
            }
        }
    }
    Ok(out)
}

/// Trapezoid-rule traction loop, evaluated point by point.
pub fn loop_integral_traction_quadrature(sigma0: &SingularField, eps: f64, nodes: usize) -> Result<[f64; 2], CheckError> {
    require_codomain(sigma0, &[Codomain::SymTensor, Codomain::Tensor], "stress")?;
    if !(eps > 0.0) || nodes == 0 {
        return Err(CheckError::Precondition("loop radius and node count must be positive".into()));
    }
    let v = circle_quadrature(
        &|th| {
            let s = sigma0.eval_smooth(eps, th).expect("r > 0");
            vec![s[0] * th.cos() + s[1] * th.sin(), s[2] * th.cos() + s[3] * th.sin()]
        },
        eps,
        nodes,
    );
    Ok([v[0], v[1]])
}

/// Check of the restriction: `div σ₀ = 0` on Ω−O, the traction loop equals `−b^{(0,0)}`,
/// and the degree bound. Conclusive only when `deg(σ₀) < 0`.
pub fn check_equilibrium_restricted(sigma0: &SingularField, body_point: &PointPart) -> Result<CheckReport, CheckError> {
    require_codomain(sigma0, &[Codomain::SymTensor, Codomain::Tensor], "stress")?;
    if body_point.width() != 2 {
        return Err(CheckError::Precondition("body force point part must be vector-valued".into()));
    }
    let sigma0 = sigma0.restrict();
    let smooth_div = div(&sigma0)?.restrict();
    let traction = loop_integral_traction_exact(&sigma0)?;
    let mut conditions = vec![Condition::exact(
        "div σ₀ = 0 on Ω−O (symbolic)",
        exact_size(&smooth_div),
        !smooth_div.has_smooth_part(),
    )];
    let ell = sigma0.ell();
    for i in 0..2 {
        let target = -body_point.coeff(MultiIndex::ZERO, i);
        let diff = &traction[i] - &target;
        conditions.push(Condition::exact(
            format!("∮ σ₀n dl + b^(0,0) component {} (closed form)", i + 1),
            diff.eval(ell),
            diff.is_zero(),
        ));
    }
    let deg_s = degree_of_divergence(&sigma0);
    let deg_b = body_point.order().map(|o| o as f64).unwrap_or(f64::NEG_INFINITY);
    let holds = deg_b <= deg_s + 1.0;
    conditions.push(Condition::exact("deg(B) ≤ deg(σ₀) + 1", deg_b - deg_s - 1.0, holds));
    let degree = DegreeReport {
        degrees: vec![("σ₀".into(), deg_s), ("B".into(), deg_b)],
        inequality: "deg(B) ≤ deg(σ₀) + 1".into(),
        holds,
    };
    let mut report = CheckReport::from_conditions("equilibrium (restricted)", conditions, degree);
    if report.verdict == Verdict::Satisfied && deg_s >= 0.0 {
        report.verdict = Verdict::InsufficientInformation;
    }
    Ok(report)
}
