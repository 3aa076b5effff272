//! Compatibility `Curl Curl E = 0`, incompatibility `Curl Curl E = N`, and the Cesàro loop.

use crate::coeff::Coeff;
use crate::error::CheckError;
use crate::field_algebra::{
    curl, curl_curl, degree_of_divergence, Codomain, MultiIndex, Parity, PointPart, Series, SingularField,
};
use crate::testfn_quadrature::{circle_quadrature, make_w_alpha, pair, QuadratureSpec, TestFunction};

use super::equilibrium::probe_order;
use super::report::{CheckReport, Condition, DegreeReport};
use super::{exact_size, oracle_tolerance, require_codomain, test_support};

/// Charges of an isolated point defect read off the Cesàro loop.
#[derive(Clone, Debug, PartialEq)]
pub struct DefectCharges {
    /// `(−N^{(0,1)}, N^{(1,0)})`.
    pub burgers: [f64; 2],
    /// `N^{(0,0)}`.
    pub disclination: f64,
    /// Entries of `Curl Curl E` at order ≥ 2 for the canonical extension of `E0`.
    pub higher: PointPart,
    /// False when `deg(E0) ≥ 0`: other extensions of `E0` carry different multipoles.
    pub higher_resolved: bool,
}

/// Exact ε-independent pieces of the Cesàro loop: the integral equals
/// `translation + rotation · e₃ × x`.
#[derive(Clone, Debug, PartialEq)]
pub struct CesaroParts {
    pub translation: [Coeff; 2],
    pub rotation: Coeff,
}

/// `Σ c ε^{k+1+extra} (ln ε)^p` over the angular means of `s`.
fn loop_value(s: &Series, eps: f64, extra: i32, ell: f64) -> f64 {
    s.angular_mean_terms()
        .iter()
        .map(|(&(k, p), c)| c.eval(ell) * eps.powi(k + 1 + extra) * eps.ln().powi(p as i32))
        .sum()
}

/// Coefficient of `ε^0` in the same sum.
fn loop_constant(s: &Series, extra: i32) -> Coeff {
    s.angular_mean_terms()
        .into_iter()
        .filter(|&((k, p), _)| k + 1 + extra == 0 && p == 0)
        .fold(Coeff::zero(), |acc, (_, c)| &acc + &c)
}

/// Integrand series `[E t]₁, [E t]₂, c·t, t₁ (c·t), t₂ (c·t)` with `t = (−sinθ, cosθ)`.
fn loop_integrands(e0: &SingularField) -> Result<[Series; 5], CheckError> {
    let smooth = e0.restrict().as_tensor();
    let c = curl(&smooth)?.restrict();
    let times_t = |a: &Series, b: &Series| a.mul_trig(1, Parity::Sin).neg().add(&b.mul_trig(1, Parity::Cos));
    let e = |i: usize| smooth.component_series(i);
    let ct = times_t(c.component_series(0), c.component_series(1));
    Ok([
        times_t(e(0), e(1)),
        times_t(e(2), e(3)),
        ct.clone(),
        ct.mul_trig(1, Parity::Sin).neg(),
        ct.mul_trig(1, Parity::Cos),
    ])
}

fn require_smooth_compatible(e0: &SingularField) -> Result<(), CheckError> {
    require_codomain(e0, &[Codomain::SymTensor, Codomain::Tensor], "strain")?;
    let cc = curl_curl(&e0.restrict())?;
    if cc.has_smooth_part() {
        return Err(CheckError::Precondition("curl curl E0 does not vanish on Ω−O".into()));
    }
    Ok(())
}

/// Exact translation and rotation parts of the Cesàro loop.
pub fn cesaro_parts(e0: &SingularField) -> Result<CesaroParts, CheckError> {
    require_smooth_compatible(e0)?;
    let [a1, a2, ct, b1, b2] = loop_integrands(e0)?;
    Ok(CesaroParts {
        translation: [
            &loop_constant(&a1, 0) - &loop_constant(&b1, 1),
            &loop_constant(&a2, 0) - &loop_constant(&b2, 1),
        ],
        rotation: loop_constant(&ct, 0),
    })
}

/// `∮_{∂B_ε} E dy − (e₃×(y − x)) (c·dy)` with `c_j = (Curl E)_j`, in closed form.
pub fn cesaro_integral(e0: &SingularField, x: [f64; 2], eps: f64) -> Result<[f64; 2], CheckError> {
    require_smooth_compatible(e0)?;
    if !(eps > 0.0 && eps < e0.domain_radius()) {
        return Err(CheckError::Precondition(format!("loop radius {eps} outside (0, R)")));
    }
    let ell = e0.ell();
    let [a1, a2, ct, b1, b2] = loop_integrands(e0)?;
    let rot = loop_value(&ct, eps, 0, ell);
    Ok([
        loop_value(&a1, eps, 0, ell) - loop_value(&b1, eps, 1, ell) - x[1] * rot,
        loop_value(&a2, eps, 0, ell) - loop_value(&b2, eps, 1, ell) + x[0] * rot,
    ])
}

/// The Cesàro loop by trapezoid rule on pointwise values.
pub fn cesaro_integral_quadrature(e0: &SingularField, x: [f64; 2], eps: f64, nodes: usize) -> Result<[f64; 2], CheckError> {
    require_codomain(e0, &[Codomain::SymTensor, Codomain::Tensor], "strain")?;
    if !(eps > 0.0) || nodes == 0 {
        return Err(CheckError::Precondition("loop radius and node count must be positive".into()));
    }
    let smooth = e0.restrict().as_tensor();
    let c = curl(&smooth)?.restrict();
    let v = circle_quadrature(
        &|th| {
            let e = smooth.eval_smooth(eps, th).expect("r > 0");
            let cv = c.eval_smooth(eps, th).expect("r > 0");
            let t = [-th.sin(), th.cos()];
            let d = [eps * th.cos() - x[0], eps * th.sin() - x[1]];
            let ct = cv[0] * t[0] + cv[1] * t[1];
            vec![
                e[0] * t[0] + e[1] * t[1] + d[1] * ct,
                e[2] * t[0] + e[3] * t[1] - d[0] * ct,
            ]
        },
        eps,
        nodes,
    );
    Ok([v[0], v[1]])
}

/// Burgers vector and disclination of the point defect carried by `E0`.
pub fn identify_point_defect(e0: &SingularField) -> Result<DefectCharges, CheckError> {
    let parts = cesaro_parts(e0)?;
    let smooth = e0.restrict();
    let ell = smooth.ell();
    let n = curl_curl(&smooth)?;
    let mut higher = PointPart::new(1);
    for (alpha, v) in n.point().entries() {
        if alpha.order() >= 2 {
            higher.add_entry(*alpha, v);
        }
    }
    Ok(DefectCharges {
        burgers: [parts.translation[0].eval(ell), parts.translation[1].eval(ell)],
        disclination: parts.rotation.eval(ell),
        higher,
        higher_resolved: degree_of_divergence(&smooth) < 0.0,
    })
}

/// `E(𝔸∇²φ)` for a tensor field paired component-wise.
fn pair_amap_hessian(e: &SingularField, phi: &TestFunction, spec: &QuadratureSpec) -> Result<(f64, f64), CheckError> {
    let d = |a: u32, b: u32| phi.derivative(MultiIndex(a, b));
    let e = e.as_tensor();
    let p22 = pair(&e, &d(0, 2), spec)?;
    let p11 = pair(&e, &d(2, 0), spec)?;
    let p12 = pair(&e, &d(1, 1), spec)?;
    let terms = [p22[0], -p12[1], -p12[2], p11[3]];
    let scale = terms.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    Ok((terms.iter().sum(), scale))
}

pub fn check_compatibility(e: &SingularField) -> Result<CheckReport, CheckError> {
    check_compatibility_with(e, &QuadratureSpec::default())
}

/// Full check of `Curl Curl E = 0`; adds the Cesàro shortcut when `deg(E) < 0`.
pub fn check_compatibility_with(e: &SingularField, spec: &QuadratureSpec) -> Result<CheckReport, CheckError> {
    require_codomain(e, &[Codomain::SymTensor], "strain")?;
    let cc = curl_curl(e)?;
    let mut conditions = vec![
        Condition::exact(
            "curl curl E = 0 on Ω−O (symbolic)",
            exact_size(&cc.restrict()),
            !cc.has_smooth_part(),
        ),
        Condition::exact(
            "point part of Curl Curl E (symbolic)",
            exact_size(&cc.point_only()),
            cc.point().is_empty(),
        ),
    ];
    let deg = degree_of_divergence(e);
    if let Some(top) = probe_order(deg, 2.0) {
        let support = test_support(e);
        for alpha in MultiIndex::up_to(top) {
            let w = make_w_alpha(alpha, support)?;
            let (value, scale) = pair_amap_hessian(e, &w, spec)?;
            conditions.push(Condition::numeric(
                format!("E(𝔸∇²w^{alpha}) (oracle)"),
                value,
                oracle_tolerance(scale),
            ));
        }
    }
    if deg < 0.0 && !cc.has_smooth_part() {
        let parts = cesaro_parts(e)?;
        let ell = e.ell();
        let zero = parts.translation.iter().all(Coeff::is_zero) && parts.rotation.is_zero();
        let size = parts
            .translation
            .iter()
            .chain(std::iter::once(&parts.rotation))
            .fold(0.0f64, |m, c| m.max(c.eval(ell).abs()));
        conditions.push(Condition::exact("Cesàro loop of E on Ω−O (closed form)", size, zero));
    }
    let degree = DegreeReport {
        degrees: vec![("E".into(), deg)],
        inequality: "|α| ≤ deg(E) + 2".into(),
        holds: true,
    };
    Ok(CheckReport::from_conditions("compatibility", conditions, degree))
}

pub fn check_incompatibility(e: &SingularField, n: &SingularField) -> Result<CheckReport, CheckError> {
    check_incompatibility_with(e, n, &QuadratureSpec::default())
}

/// Full check of `Curl Curl E = N`.
pub fn check_incompatibility_with(
    e: &SingularField,
    n: &SingularField,
    spec: &QuadratureSpec,
) -> Result<CheckReport, CheckError> {
    require_codomain(e, &[Codomain::SymTensor], "strain")?;
    require_codomain(n, &[Codomain::Scalar], "incompatibility")?;
    let residual = curl_curl(e)?.sub(n)?;
    let mut conditions = vec![
        Condition::exact(
            "curl curl E − N = 0 on Ω−O (symbolic)",
            exact_size(&residual.restrict()),
            !residual.has_smooth_part(),
        ),
        Condition::exact(
            "point part of Curl Curl E − N (symbolic)",
            exact_size(&residual.point_only()),
            residual.point().is_empty(),
        ),
    ];
    let deg_e = degree_of_divergence(e);
    let deg_n = degree_of_divergence(n);
    let holds = deg_n <= deg_e + 2.0;
    conditions.push(Condition::exact("deg(N) ≤ deg(E) + 2", deg_n - deg_e - 2.0, holds));
    if let Some(top) = probe_order(deg_e, 2.0) {
        let support = test_support(e);
        for alpha in MultiIndex::up_to(top) {
            let w = make_w_alpha(alpha, support)?;
            let (lhs, scale) = pair_amap_hessian(e, &w, spec)?;
            let rhs = pair(n, &w, spec)?[0];
            conditions.push(Condition::numeric(
                format!("E(𝔸∇²w^{alpha}) − N(w^{alpha}) (oracle)"),
                lhs - rhs,
                oracle_tolerance(scale.max(rhs.abs())),
            ));
        }
    }
    let degree = DegreeReport {
        degrees: vec![("E".into(), deg_e), ("N".into(), deg_n)],
        inequality: "deg(N) ≤ deg(E) + 2".into(),
        holds,
    };
    Ok(CheckReport::from_conditions("incompatibility", conditions, degree))
}
