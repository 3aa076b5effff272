//! Acceptance harness: one PASS/FAIL line per criterion.
//!
//! The process exits 0 even when a criterion fails so that the remaining test
//! binaries still run; the final line carries the tally.

use std::error::Error;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

use defectfield::checkers::*;
use defectfield::coeff::{rat, Coeff};
use defectfield::defect_force::*;
use defectfield::elasticity::*;
use defectfield::field_algebra::{
    curl, curl_curl, degree_of_divergence, div, finite_part_shift, pv_extension_exists, scaling_degree, restrict,
    Axis, Codomain, Component, MultiIndex, Parity, PointPart, Series, SingularField, SmoothTerm,
};
use defectfield::testfn_quadrature::{
    cutoff_series_extension, cutoff_series_limit, dyadic_grid, estimate_scaling_degree, make_w_alpha, pair,
    pair_scalar, pv_limit, Poly, QuadratureSpec, TestFunction,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Res<T> = Result<T, Box<dyn Error>>;

const R: f64 = 1.0;

// Pinned tolerances.
const LOOP_QUADRATURE_TOL: f64 = 1e-10;
const C1_BUDGET: Duration = Duration::from_secs(5);
const DIV_ORACLE_REL: f64 = 1e-6;
const CESARO_TOL: f64 = 1e-8;
const SOLUTION_ORACLE_REL: f64 = 1e-6;
const C5_BUDGET: Duration = Duration::from_secs(60);
const DEGREE_SLACK: f64 = 0.0;
const FORCE_REL: f64 = 1e-6;
const MIN_DIPOLE_ORDER: f64 = 1.0;
const SDEG_TOL: f64 = 0.1;
const CUTOFF_REL: f64 = 1e-6;
const POLICY_ZERO: f64 = 1e-9;
const POLICY_SHIFT_REL: f64 = 1e-6;

#[derive(Default)]
struct Checks {
    items: Vec<(String, bool)>,
}

impl Checks {
    fn check(&mut self, label: impl Into<String>, ok: bool) {
        self.items.push((label.into(), ok));
    }

    fn passed(&self) -> bool {
        self.items.iter().all(|(_, ok)| *ok)
    }

    fn summary(&self) -> String {
        let failed: Vec<&str> = self.items.iter().filter(|(_, ok)| !ok).map(|(l, _)| l.as_str()).collect();
        if failed.is_empty() {
            format!("{} checks", self.items.len())
        } else {
            format!("{}/{} checks failed: {}", failed.len(), self.items.len(), failed.join("; "))
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + a.abs().max(b.abs()))
}

fn close2(a: [f64; 2], b: [f64; 2], tol: f64) -> bool {
    let scale = 1.0 + b[0].abs().max(b[1].abs());
    (a[0] - b[0]).abs() <= tol * scale && (a[1] - b[1]).abs() <= tol * scale
}

/// Largest oracle residual relative to its own scale.
fn oracle_rel(r: &CheckReport) -> f64 {
    r.conditions
        .iter()
        .filter(|c| c.name.contains("oracle") && c.tolerance > 0.0)
        .map(|c| c.residual.abs() * ORACLE_REL_TOL / c.tolerance)
        .fold(0.0, f64::max)
}

// ---------- fields ----------

fn polar_pair(c: Coeff, k: i32, n: u32, a: Axis, b: Axis) -> SmoothTerm {
    SmoothTerm::exact(c, k, 0, n, Parity::Cos, Component::PolarPair(a, b))
}

fn flamant() -> Res<SingularField> {
    Ok(SingularField::from_terms(
        Codomain::SymTensor,
        R,
        &[polar_pair(Coeff::one(), -1, 1, Axis::R, Axis::R)],
    )?)
}

/// `(1/πr²)(−e_r⊗e_r + e_θ⊗e_θ)`.
fn dilatation_smooth() -> Res<SingularField> {
    let c = Coeff::inv_pi();
    Ok(SingularField::from_terms(
        Codomain::SymTensor,
        R,
        &[
            polar_pair(-&c, -2, 0, Axis::R, Axis::R),
            polar_pair(c, -2, 0, Axis::Theta, Axis::Theta),
        ],
    )?)
}

fn point_force(c: Coeff, comp: usize) -> Res<SingularField> {
    let mut v = vec![Coeff::zero(), Coeff::zero()];
    v[comp] = c;
    Ok(SingularField::delta(Codomain::Vector, R, MultiIndex::ZERO, v)?)
}

fn grad_delta() -> Res<SingularField> {
    let mut p = PointPart::new(2);
    p.add_component(MultiIndex(1, 0), 0, &Coeff::one());
    p.add_component(MultiIndex(0, 1), 1, &Coeff::one());
    Ok(SingularField::zero(Codomain::Vector, R).with_point(p)?)
}

fn log_identity(c: Coeff) -> Res<SingularField> {
    Ok(SingularField::from_terms(
        Codomain::SymTensor,
        R,
        &[
            SmoothTerm::exact(c.clone(), 0, 1, 0, Parity::Cos, Component::CartPair(0, 0)),
            SmoothTerm::exact(c, 0, 1, 0, Parity::Cos, Component::CartPair(1, 1)),
        ],
    )?)
}

fn scalar_delta(alpha: MultiIndex, c: Coeff) -> Res<SingularField> {
    Ok(SingularField::delta(Codomain::Scalar, R, alpha, vec![c])?)
}

fn zero_vector() -> SingularField {
    SingularField::zero(Codomain::Vector, R)
}

fn zero_scalar() -> SingularField {
    SingularField::zero(Codomain::Scalar, R)
}

fn poly_stress(s11: Series, s12: Series, s22: Series) -> Res<SingularField> {
    Ok(SingularField::from_components(
        Codomain::SymTensor,
        R,
        vec![s11, s12.clone(), s12, s22],
        PointPart::new(4),
    )?)
}

fn constant(c: f64) -> Series {
    Series::constant(Coeff::from_f64(c).expect("finite"))
}

fn uniform_stress() -> Res<SingularField> {
    poly_stress(constant(0.75), constant(-0.5), constant(2.0))
}

fn linear_stress() -> Res<SingularField> {
    poly_stress(Series::x2(), Series::zero(), Series::x1())
}

fn airy_stress() -> Res<SingularField> {
    let m = |a, b, c: i64| Series::monomial_xy(a, b).scale(&Coeff::from_int(c));
    poly_stress(m(1, 1, -6), m(2, 0, -3).add(&m(0, 2, 3)), m(1, 1, 6))
}

fn generic_core(min_order: u32, max_order: u32) -> Poly {
    let mut core = Poly::zero();
    let mut i = 0usize;
    for a in MultiIndex::up_to(max_order) {
        if a.order() < min_order {
            continue;
        }
        i += 1;
        core.add_term(a, 1.0 / (1.0 + i as f64) * if i % 3 == 0 { -1.0 } else { 1.0 });
    }
    core
}

// ---------- criteria ----------

fn criterion_1() -> Res<Checks> {
    let start = Instant::now();
    let mut c = Checks::default();
    let sigma = flamant()?;
    let load = point_force(-&Coeff::pi(), 0)?;
    c.check("Flamant with −πe₁δ satisfied", check_equilibrium(&sigma, &load)?.is_satisfied());
    let exact = loop_integral_traction_exact(&sigma)?;
    c.check("closed-form loop is πe₁ exactly", exact[0] == Coeff::pi() && exact[1].is_zero());
    for eps in [0.05, 0.2, 0.45] {
        let q = loop_integral_traction_quadrature(&sigma, eps, 64)?;
        c.check(
            format!("quadrature loop at ε = {eps}"),
            (q[0] - PI).abs() <= LOOP_QUADRATURE_TOL && q[1].abs() <= LOOP_QUADRATURE_TOL,
        );
    }
    let s3 = dilatation_smooth()?;
    let bare = check_equilibrium(&s3, &zero_vector())?;
    let failing: Vec<&Condition> = bare.failed().collect();
    c.check("σ₃ with B = 0 violated", bare.verdict == Verdict::Violated);
    c.check(
        "σ₃ first fails at |α| = 1",
        !failing.is_empty()
            && failing.iter().all(|f| f.name.contains("(1,0)") || f.name.contains("(0,1)") || !f.name.contains("oracle"))
            && bare
                .conditions
                .iter()
                .filter(|f| f.name.contains("oracle") && f.name.contains("(0,0)"))
                .all(|f| f.pass)
            && failing.iter().any(|f| f.name.contains("oracle")),
    );
    let loaded = check_equilibrium(&s3, &grad_delta()?.neg())?;
    c.check("σ₃ with −∇δ satisfied", loaded.is_satisfied());
    c.check(format!("runtime {:.2?} < {C1_BUDGET:?}", start.elapsed()), start.elapsed() < C1_BUDGET);
    Ok(c)
}

fn criterion_2() -> Res<Checks> {
    let mut c = Checks::default();
    let s3 = dilatation_smooth()?;
    let d = div(&s3)?;
    c.check("Div σ₃ = ∇δ symbolically", d == grad_delta()?);
    let spec = QuadratureSpec::default();
    for alpha in [MultiIndex(1, 0), MultiIndex(0, 1)] {
        let w = make_w_alpha(alpha, 0.5 * R)?;
        let symbolic = pair(&d, &w, &spec)?;
        let g1 = pair(&s3, &w.partial(1), &spec)?;
        let g2 = pair(&s3, &w.partial(2), &spec)?;
        let oracle = [-(g1[0] + g2[1]), -(g1[2] + g2[3])];
        c.check(
            format!("oracle pairing with w^{alpha}"),
            rel(symbolic[0], oracle[0]) <= DIV_ORACLE_REL && rel(symbolic[1], oracle[1]) <= DIV_ORACLE_REL,
        );
    }
    Ok(c)
}

fn affine_recovery(c: &mut Checks, label: &str, e: &SingularField, b: [f64; 2], s: f64) -> Res<()> {
    let (eps, nodes) = (0.1, 128);
    let at = |x: [f64; 2]| cesaro_integral_quadrature(e, x, eps, nodes);
    let c0 = at([0.0, 0.0])?;
    let h = 0.3;
    let cx = at([h, 0.0])?;
    let cy = at([0.0, h])?;
    let m = [[(cx[0] - c0[0]) / h, (cy[0] - c0[0]) / h], [(cx[1] - c0[1]) / h, (cy[1] - c0[1]) / h]];
    let expected = [[0.0, -s], [s, 0.0]];
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            worst = worst.max((m[i][j] - expected[i][j]).abs());
        }
    }
    c.check(format!("{label}: rotation block is s·e₃× (err {worst:.1e})"), worst <= CESARO_TOL);
    c.check(format!("{label}: translation is the Burgers vector"), close2(c0, b, CESARO_TOL));
    let x = [0.2, -0.35];
    let cxx = at(x)?;
    let pred = [c0[0] + m[0][0] * x[0] + m[0][1] * x[1], c0[1] + m[1][0] * x[0] + m[1][1] * x[1]];
    c.check(format!("{label}: affine in x"), close2(cxx, pred, CESARO_TOL));
    Ok(())
}

fn criterion_3() -> Res<Checks> {
    let mut c = Checks::default();
    let e = log_identity(Coeff::one())?;
    let bad = check_compatibility(&e)?;
    c.check(
        "ln r I violated through the Cesàro loop",
        bad.verdict == Verdict::Violated && bad.failed().any(|f| f.name.contains("Cesàro")),
    );
    let fixed = e.add(&SingularField::from_terms(
        Codomain::SymTensor,
        R,
        &[polar_pair(Coeff::one(), 0, 0, Axis::R, Axis::R)],
    )?)?;
    c.check("ln r I + e_r⊗e_r satisfied", check_compatibility(&fixed)?.is_satisfied());
    let disclination = log_identity(Coeff::inv_pi().scale(&rat(1, 2)))?;
    affine_recovery(&mut c, "disclination strain", &disclination, [0.0, 0.0], 1.0)?;
    let mixed = defect_strain([0.3, -0.7], 0.5, R)?;
    affine_recovery(&mut c, "mixed defect strain", &mixed, [0.3, -0.7], 0.5)?;
    Ok(c)
}

fn criterion_4() -> Res<Checks> {
    let mut c = Checks::default();
    let mut count = 0;
    for alpha in MultiIndex::up_to(3) {
        let src = scalar_delta(alpha, Coeff::from_rat(rat(3, 2)))?;
        if alpha.order() >= 1 {
            let v = point_antiderivative_div(&src)?;
            c.check(format!("div at {alpha}"), div(&v)? == src && !v.has_smooth_part());
            let w = point_antiderivative_curl(&src)?;
            c.check(format!("curl at {alpha}"), curl(&w)? == src && !w.has_smooth_part());
            count += 2;
        }
        if alpha.order() >= 2 {
            let e = point_antiderivative_curlcurl(&src)?;
            c.check(format!("curl curl at {alpha}"), curl_curl(&e)? == src && !e.has_smooth_part());
            count += 1;
        }
        let v = antiderivative_div_with_tail(&src)?;
        c.check(format!("div with tail at {alpha}"), div(&v)? == src);
        let w = antiderivative_curl_with_tail(&src)?;
        c.check(format!("curl with tail at {alpha}"), curl(&w)? == src);
    }
    let mut p = PointPart::new(1);
    for (i, alpha) in MultiIndex::up_to(3).into_iter().filter(|a| a.order() >= 2).enumerate() {
        p.add_component(alpha, 0, &Coeff::from_int(i as i64 - 3));
    }
    let combo = zero_scalar().with_point(p)?;
    let e = point_antiderivative_curlcurl(&combo)?;
    c.check("curl curl of a combined source", curl_curl(&e)? == combo);
    c.check(format!("{count} point constructions covered"), count == 9 * 2 + 7);
    Ok(c)
}

fn criterion_5() -> Res<Checks> {
    let start = Instant::now();
    let mut c = Checks::default();
    for nu in [0.0, 0.25, 0.49] {
        let m = IsotropicModuli::new(1.0, nu)?;
        let e1 = point_force(Coeff::one(), 0)?;
        let delta = scalar_delta(MultiIndex::ZERO, Coeff::one())?;

        let s1 = kelvin_stress(&m, R)?;
        let c1 = compliance_apply(&s1, &m)?;
        c.check(format!("ν={nu}: Div σ₁ + δe₁ = 0 exactly"), div(&s1)?.add(&e1)?.is_zero());
        c.check(format!("ν={nu}: CurlCurl ℂ⁻¹σ₁ = 0 exactly"), curl_curl(&c1)?.is_zero());
        let eq = check_equilibrium(&s1, &e1)?;
        let inc = check_incompatibility(&c1, &zero_scalar())?;
        c.check(
            format!("ν={nu}: σ₁ oracle residuals"),
            eq.is_satisfied() && inc.is_satisfied() && oracle_rel(&eq).max(oracle_rel(&inc)) <= SOLUTION_ORACLE_REL,
        );

        let s2 = incompatibility_stress(&m, R)?;
        let c2 = compliance_apply(&s2, &m)?;
        c.check(format!("ν={nu}: Div σ₂ = 0 exactly"), div(&s2)?.is_zero());
        c.check(format!("ν={nu}: CurlCurl ℂ⁻¹σ₂ = δ exactly"), curl_curl(&c2)? == delta);
        let eq = check_equilibrium(&s2, &zero_vector())?;
        let inc = check_incompatibility(&c2, &delta)?;
        c.check(
            format!("ν={nu}: σ₂ oracle residuals"),
            eq.is_satisfied() && inc.is_satisfied() && oracle_rel(&eq).max(oracle_rel(&inc)) <= SOLUTION_ORACLE_REL,
        );

        let s3 = dilatation_stress(&m, R)?;
        let n3 = dilatation_incompatibility(&m, R)?;
        let s4 = dipole_body_force_stress(&m, R)?;
        let b4 = dipole_body_force(&m, R)?;
        let c3 = compliance_apply(&s3, &m)?;
        let c4 = compliance_apply(&s4, &m)?;
        c.check(
            format!("ν={nu}: σ₃ sources exact"),
            div(&s3)?.is_zero() && curl_curl(&c3)? == n3,
        );
        c.check(
            format!("ν={nu}: σ₄ sources exact"),
            div(&s4)?.add(&b4)?.is_zero() && curl_curl(&c4)?.is_zero(),
        );
        let eq3 = check_equilibrium(&s3, &zero_vector())?;
        let in3 = check_incompatibility(&c3, &n3)?;
        let eq4 = check_equilibrium(&s4, &b4)?;
        let in4 = check_incompatibility(&c4, &zero_scalar())?;
        let worst = [&eq3, &in3, &eq4, &in4].iter().map(|r| oracle_rel(r)).fold(0.0, f64::max);
        c.check(
            format!("ν={nu}: σ₃/σ₄ oracle residuals (worst {worst:.1e})"),
            [&eq3, &in3, &eq4, &in4].iter().all(|r| r.is_satisfied()) && worst <= SOLUTION_ORACLE_REL,
        );
        c.check(format!("ν={nu}: σ₃ and σ₄ restrict equally"), restrict(&s3) == restrict(&s4));
        let swapped3 = check_equilibrium(&s3, &b4)?.is_satisfied() && check_incompatibility(&c3, &zero_scalar())?.is_satisfied();
        let swapped4 = check_equilibrium(&s4, &zero_vector())?.is_satisfied() && check_incompatibility(&c4, &n3)?.is_satisfied();
        c.check(format!("ν={nu}: swapped sources are rejected"), !swapped3 && !swapped4);
    }
    c.check(format!("runtime {:.2?} < {C5_BUDGET:?}", start.elapsed()), start.elapsed() < C5_BUDGET);
    Ok(c)
}

fn random_point_part(rng: &mut StdRng, width: usize, max_entries: usize) -> PointPart {
    let mut p = PointPart::new(width);
    let values = [-2.0, -1.0, -0.5, 0.25, 0.5, 1.0, 2.0];
    let alphas = MultiIndex::up_to(2);
    for _ in 0..rng.random_range(0..=max_entries) {
        let alpha = alphas[rng.random_range(0..alphas.len())];
        let comp = rng.random_range(0..width);
        let v = values[rng.random_range(0..values.len())];
        p.add_component(alpha, comp, &Coeff::from_f64(v).expect("finite"));
    }
    p
}

fn criterion_6() -> Res<Checks> {
    let mut c = Checks::default();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for trial in 0..4 {
        let nu = [0.1, 0.3, 0.45][rng.random_range(0..3)];
        let m = IsotropicModuli::new(1.0, nu)?;
        let (b1, n1) = (random_point_part(&mut rng, 2, 3), random_point_part(&mut rng, 1, 2));
        let (b2, n2) = (random_point_part(&mut rng, 2, 2), random_point_part(&mut rng, 1, 2));
        let p1 = PointSourceProblem::new(b1.clone(), n1.clone(), m.clone(), R)?;
        let p2 = PointSourceProblem::new(b2.clone(), n2.clone(), m.clone(), R)?;
        let k = Coeff::from_int(3);
        let combo = PointSourceProblem::new(b1.scale(&k).add(&b2), n1.scale(&k).add(&n2), m.clone(), R)?;
        let s1 = general_point_solution(&p1)?;
        let s2 = general_point_solution(&p2)?;
        let s = general_point_solution(&combo)?;
        let (eq, inc) = verify_solution(&s, &combo)?;
        c.check(format!("trial {trial}: verify_solution"), eq.is_satisfied() && inc.is_satisfied());
        c.check(format!("trial {trial}: linear in the sources"), s == s1.scale(&k).add(&s2)?);
        let deg_s = degree_of_divergence(&s);
        let deg_b = degree_of_divergence(&combo.body_force_field()?);
        let deg_n = degree_of_divergence(&combo.incompatibility_field()?);
        let bound = (deg_b - 1.0).max(deg_n - 2.0) + DEGREE_SLACK;
        c.check(
            format!("trial {trial}: deg σ = {deg_s} ≤ {bound}"),
            deg_s <= bound || deg_s == f64::NEG_INFINITY,
        );
    }
    Ok(c)
}

fn loop_force(a: &SingularField, sigma2: &SingularField, m: &IsotropicModuli) -> Res<[f64; 2]> {
    let (beta1, sigma1) = defect_fields(a, m)?;
    let beta2 = smooth_fields(sigma2, m)?;
    let j = interaction_eshelby(&beta1, &sigma1, &beta2, sigma2, m)?;
    Ok(force_loop_oracle(&j, &QuadratureSpec::default())?.0)
}

fn stress_at_origin(s: &SingularField) -> Res<[[f64; 2]; 2]> {
    let v = s.eval_xy(0.0, 1e-300)?;
    Ok([[v[0], v[1]], [v[2], v[3]]])
}

fn criterion_7() -> Res<Checks> {
    let mut c = Checks::default();
    let m = IsotropicModuli::new(1.0, 0.25)?;
    for (label, s) in [("uniform", uniform_stress()?), ("linear", linear_stress()?)] {
        for b in [[1.0, 0.0], [0.5, -0.75]] {
            let lf = loop_force(&dislocation_density(b, R)?, &s, &m)?;
            let pk = peach_koehler(b, stress_at_origin(&s)?);
            c.check(format!("Peach–Koehler b={b:?} in {label} field"), close2(lf, pk, FORCE_REL));
        }
    }
    for (label, s) in [("linear", linear_stress()?), ("Airy", airy_stress()?)] {
        let (b, v) = ([1.0, -0.5], [0.25, 1.0]);
        let lf = loop_force(&dipole_density(b, v, R)?, &s, &m)?;
        let closed = dipole_force_couple(b, v, &s)?.force;
        c.check(format!("dipole force in {label} field"), close2(lf, closed, FORCE_REL));
        let (_, order) = dipole_convergence([1.0, 0.5], [0.6, 0.8], &s)?;
        c.check(format!("finite-separation order {order:.2} in {label} field"), order >= MIN_DIPOLE_ORDER);
    }
    let a = 1.5;
    let s = linear_stress()?;
    let lf = loop_force(&dilation_density(a, R)?, &s, &m)?;
    let closed = dilation_force(a, &s)?.force;
    c.check(
        format!("dilation force: loop {lf:?} vs closed form {closed:?}"),
        close2(lf, closed, FORCE_REL),
    );
    let u = dipole_force_couple([1.0, 0.0], [0.0, 1.0], &uniform_stress()?)?;
    c.check("uniform-field dipole: zero force, nonzero couple", u.force == [0.0, 0.0] && !u.couple.is_empty());
    Ok(c)
}

fn scalar_term(k: i32, n: u32, parity: Parity) -> Res<SingularField> {
    Ok(SingularField::from_terms(
        Codomain::Scalar,
        R,
        &[SmoothTerm::new(1.0, k, 0, n, parity, Component::Scalar)],
    )?)
}

/// Test function whose jet vanishes below `min_order`, so the pairing is exactly homogeneous.
fn probe(min_order: u32) -> Res<TestFunction> {
    Ok(TestFunction::from_core(generic_core(min_order, min_order + 4), 0.5 * R)?)
}

fn criterion_8() -> Res<Checks> {
    let mut c = Checks::default();
    let grid = dyadic_grid();
    let mut worst: f64 = 0.0;
    let mut members = 0;
    for k in -4..=4 {
        for n in 0..=3u32 {
            for parity in [Parity::Cos, Parity::Sin] {
                if n == 0 && parity == Parity::Sin {
                    continue;
                }
                let f = scalar_term(k, n, parity)?;
                let deg = degree_of_divergence(&f);
                let phi = probe(if deg >= 0.0 { deg as u32 + 1 } else { 0 })?;
                let est = estimate_scaling_degree(&f, &phi, &grid)?;
                let err = (est - scaling_degree(&f)).abs();
                worst = worst.max(err);
                members += 1;
                if err > SDEG_TOL {
                    c.check(format!("sd of r^{k} trig({n}θ) estimated {est:.3}"), false);
                }
            }
        }
    }
    for alpha in MultiIndex::up_to(3) {
        let f = scalar_delta(alpha, Coeff::one())?;
        let est = estimate_scaling_degree(&f, &probe(0)?, &grid)?;
        let err = (est - scaling_degree(&f)).abs();
        worst = worst.max(err);
        members += 1;
        if err > SDEG_TOL {
            c.check(format!("sd of ∂^{alpha}δ estimated {est:.3}"), false);
        }
    }
    c.check(format!("scaling degrees on {members} corpus members (worst {worst:.3})"), worst <= SDEG_TOL);

    let spec = QuadratureSpec::default();
    let phi = probe(0)?;
    let mut worst: f64 = 0.0;
    for k in -1..=4 {
        for n in 0..=3u32 {
            let f = scalar_term(k, n, Parity::Cos)?;
            let seq = cutoff_series_extension(&f, &phi, 12)?;
            let steps: Vec<f64> = seq.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
            let shrinking = steps.last().copied().unwrap_or(0.0) <= steps.first().copied().unwrap_or(0.0) + 1e-15;
            let lim = cutoff_series_limit(&f, &phi, 12)?;
            let direct = pair_scalar(&f, &phi, &spec)?;
            worst = worst.max(rel(lim, direct));
            if !shrinking {
                c.check(format!("cutoff series of r^{k} cos({n}θ) not contracting"), false);
            }
        }
    }
    c.check(format!("cutoff-series limits match pairings (worst {worst:.1e})"), worst <= CUTOFF_REL);

    let mut agree = 0;
    for m in 0..=4 {
        for n in 0..=4u32 {
            let term = SmoothTerm::new(1.0, -m, 0, n, Parity::Cos, Component::Scalar);
            let predicted = pv_extension_exists(&term)?;
            let f = SingularField::from_terms(Codomain::Scalar, R, &[term])?;
            let observed = pv_limit(&f, &phi, &spec).is_ok();
            if predicted == observed {
                agree += 1;
            } else {
                c.check(format!("pv of cos({n}θ)/r^{m}: criterion {predicted}, ladder {observed}"), false);
            }
        }
    }
    c.check(format!("pv criterion agrees with the ladder on {agree}/25 terms"), agree == 25);
    Ok(c)
}

fn criterion_9() -> Res<Checks> {
    let mut c = Checks::default();
    let m = IsotropicModuli::new(1.0, 0.3)?;
    let cases = [
        ("Flamant", flamant()?, point_force(-&Coeff::pi(), 0)?),
        ("dilatation", dilatation_smooth()?, grad_delta()?.neg()),
        ("Kelvin", kelvin_stress(&m, R)?, point_force(Coeff::one(), 0)?),
        ("incompatibility", incompatibility_stress(&m, R)?, zero_vector()),
    ];
    let spoil = SingularField::delta_identity(Codomain::SymTensor, R, MultiIndex::ZERO, Coeff::one())?;
    for (label, sigma, b) in cases {
        let spoiled = sigma.add(&spoil)?;
        let before = check_equilibrium(&sigma, &b)?;
        let after = check_equilibrium(&spoiled, &b)?;
        c.check(
            format!("{label}: δI flips the verdict"),
            before.is_satisfied() && after.verdict == Verdict::Violated,
        );
        let r0 = check_equilibrium_restricted(&sigma, b.point())?;
        let r1 = check_equilibrium_restricted(&spoiled, b.point())?;
        c.check(format!("{label}: restricted conditions unchanged"), r0 == r1);
    }

    let spec = QuadratureSpec::default();
    let terms = [
        SmoothTerm::new(1.0, -2, 0, 0, Parity::Cos, Component::Scalar),
        SmoothTerm::new(-0.5, -3, 0, 1, Parity::Sin, Component::Scalar),
        SmoothTerm::new(0.75, -4, 0, 2, Parity::Cos, Component::Scalar),
        SmoothTerm::new(0.25, -4, 0, 0, Parity::Cos, Component::Scalar),
    ];
    let f = SingularField::from_terms(Codomain::Scalar, R, &terms)?;
    let rho_new = 0.25;
    let g = f.with_reference_radius(rho_new)?;
    let deg = degree_of_divergence(&f);
    let shift = finite_part_shift(&f, rho_new)?;
    let mut nonzero_low = false;
    for alpha in MultiIndex::up_to(4) {
        let w = make_w_alpha(alpha, 0.5 * R)?;
        let diff = pair_scalar(&f, &w, &spec)? - pair_scalar(&g, &w, &spec)?;
        if (alpha.order() as f64) > deg {
            c.check(format!("policies agree on w^{alpha} (diff {diff:.1e})"), diff.abs() <= POLICY_ZERO);
        } else {
            let predicted = shift.iter().find(|(a, _)| *a == alpha).map_or(0.0, |(_, v)| v[0]);
            nonzero_low |= diff.abs() > POLICY_ZERO;
            c.check(
                format!("policy difference on w^{alpha} is the point shift"),
                rel(diff, predicted) <= POLICY_SHIFT_REL,
            );
        }
    }
    c.check("policies differ somewhere at |α| ≤ deg", nonzero_low);
    Ok(c)
}

fn main() {
    let criteria: [(&str, fn() -> Res<Checks>); 9] = [
        ("equilibrium examples", criterion_1),
        ("derivative correction of Div", criterion_2),
        ("compatibility and Cesàro structure", criterion_3),
        ("point antiderivatives", criterion_4),
        ("point-source solutions", criterion_5),
        ("general solution linearity and degree", criterion_6),
        ("defect forces", criterion_7),
        ("extension theory", criterion_8),
        ("insufficiency of restrictions", criterion_9),
    ];
    let mut passed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = match run() {
            Ok(c) => (c.passed(), c.summary()),
            Err(e) => (false, format!("error: {e}")),
        };
        passed += ok as usize;
        println!(
            "{} criterion {}: {title} [{:.1?}] {detail}",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed()
        );
    }
    println!("acceptance: {passed}/{} criteria passed", criteria.len());
}
