//! Numerical pairing oracle: annular quadrature on an ε-ladder, extrapolated to ε → 0.
//!
//! Independent of the symbolic calculus: it evaluates the smooth part point by
//! point, integrates with a trapezoid rule in θ and adaptive Gauss–Kronrod in r,
//! and fits the ladder with the asymptotic basis `{1} ∪ {ε^a (ln ε)^q}`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::QuadratureError;
use crate::field_algebra::{degree_of_divergence, Codomain, Parity, Series, SingularField};

use super::testfn::{rescale_test, TestFunction};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureSpec {
    /// Ladder `ε_j = R_φ / 2^{j+2}`, `j = 0..levels`.
    pub levels: usize,
    /// Trapezoid nodes beyond `2·(max mode + test degree)`.
    pub angular_extra: usize,
    /// Relative tolerance of the adaptive radial rule.
    pub radial_tol: f64,
    /// Largest number of unknowns in the ladder fit (constant included).
    pub max_fit_terms: usize,
    /// Accept an extrapolated value when its error estimate is below this (relative).
    pub accept_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            levels: 11,
            angular_extra: 16,
            radial_tol: 1e-14,
            max_fit_terms: 10,
            accept_tol: 1e-7,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<(), QuadratureError> {
        if self.levels < 4 {
            return Err(QuadratureError::InvalidSpec("need at least 4 ladder levels".into()));
        }
        if !(self.radial_tol > 0.0) || !(self.accept_tol > 0.0) {
            return Err(QuadratureError::InvalidSpec("tolerances must be positive".into()));
        }
        if self.max_fit_terms < 2 {
            return Err(QuadratureError::InvalidSpec("fit needs at least 2 unknowns".into()));
        }
        Ok(())
    }

    /// Strictly decreasing inner radii.
    pub fn ladder(&self, support: f64) -> Vec<f64> {
        (0..self.levels)
            .map(|j| support / 2f64.powi(j as i32 + 2))
            .collect()
    }
}

// Gauss–Kronrod 7/15 abscissae and weights.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[i] * s;
        if i % 2 == 1 {
            gauss += WG[i / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Adaptive Gauss–Kronrod on `[a, b]`; the tolerance is relative to `∫|f|`.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    integrate_with_floor(f, a, b, rel_tol, 0.0)
}

/// As [`integrate`], never refining below the absolute error `floor`.
pub fn integrate_with_floor(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64, floor: f64) -> f64 {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, whole: (f64, f64), tol: f64, depth: u32) -> f64 {
        let (v, e) = whole;
        if e <= tol || depth == 0 || !e.is_finite() {
            return v;
        }
        let m = 0.5 * (a + b);
        let l = gk15(f, a, m);
        let r = gk15(f, m, b);
        rec(f, a, m, l, 0.5 * tol, depth - 1) + rec(f, m, b, r, 0.5 * tol, depth - 1)
    }
    if a == b {
        return 0.0;
    }
    let first = gk15(f, a, b);
    let abs = gk15(&|x| f(x).abs(), a, b).0.abs();
    let tol = (rel_tol * abs.max(first.0.abs()))
        .max(floor)
        .max(f64::MIN_POSITIVE);
    rec(f, a, b, first, tol, 30)
}

/// Trapezoid rule for `∮_{∂B_ε} g dl` with `nodes` points.
pub fn circle_quadrature(g: &dyn Fn(f64) -> Vec<f64>, eps: f64, nodes: usize) -> Vec<f64> {
    let mut acc: Vec<f64> = Vec::new();
    for j in 0..nodes {
        let th = 2.0 * PI * j as f64 / nodes as f64;
        let v = g(th);
        if acc.is_empty() {
            acc = vec![0.0; v.len()];
        }
        for (a, x) in acc.iter_mut().zip(v) {
            *a += x;
        }
    }
    acc.iter().map(|a| a * eps * 2.0 * PI / nodes as f64).collect()
}

/// One term as plain numbers.
#[derive(Clone, Copy, Debug)]
struct NumTerm {
    c: f64,
    k: i32,
    p: u8,
    n: u32,
    parity: Parity,
}

impl NumTerm {
    fn eval(&self, r: f64, lr: f64, cs: &[(f64, f64)]) -> f64 {
        let (cn, sn) = cs[self.n as usize];
        let ang = match self.parity {
            Parity::Cos => cn,
            Parity::Sin => sn,
        };
        self.c * r.powi(self.k) * lr.powi(self.p as i32) * ang
    }
}

/// Terms sharing one Taylor-subtraction degree.
struct Group {
    terms: Vec<NumTerm>,
    /// Subtract `T_d φ` inside `B_ρ` when set.
    sub: Option<i32>,
}

fn groups_of(s: &Series, ell: f64, finite_part: bool) -> Vec<Group> {
    let mut out: Vec<Group> = Vec::new();
    for (m, c) in s.terms() {
        let t = NumTerm {
            c: c.eval(ell),
            k: m.k,
            p: m.p,
            n: m.n,
            parity: m.parity,
        };
        let sub = if finite_part && m.k <= -2 { Some(-m.k - 2) } else { None };
        match out.iter_mut().find(|g| g.sub == sub) {
            Some(g) => g.terms.push(t),
            None => out.push(Group { terms: vec![t], sub }),
        }
    }
    out
}

/// `∫_a^b r ∫_0^{2π} f φ dθ dr` for one component, optionally Taylor-subtracted.
struct Annular<'a> {
    groups: Vec<Group>,
    phi: &'a TestFunction,
    taylor: Vec<Option<TestFunction>>,
    rho: f64,
    nodes: usize,
    max_n: u32,
    tol: f64,
}

impl<'a> Annular<'a> {
    fn new(s: &Series, ell: f64, rho: f64, phi: &'a TestFunction, spec: &QuadratureSpec, finite_part: bool) -> Self {
        let groups = groups_of(s, ell, finite_part);
        let taylor = groups
            .iter()
            .map(|g| {
                g.sub.map(|d| {
                    TestFunction::from_core(phi.core().truncate(d), phi.support_radius())
                        .expect("support already validated")
                })
            })
            .collect();
        let max_n = s.max_mode();
        let nodes = 2 * (max_n as usize + phi.degree() as usize) + spec.angular_extra;
        Self {
            groups,
            phi,
            taylor,
            rho,
            nodes,
            max_n,
            tol: spec.radial_tol,
        }
    }

    fn angular(&self, r: f64) -> f64 {
        self.angular_parts(r).0
    }

    /// `(∫ f w dθ, ∫ |f w| dθ)`; the second bounds the cancellation noise.
    fn angular_parts(&self, r: f64) -> (f64, f64) {
        let Some(h) = self.phi.profile(r) else {
            // Outside supp φ, only the Taylor polynomial can contribute.
            if r >= self.rho || self.taylor.iter().all(Option::is_none) {
                return (0.0, 0.0);
            }
            return self.angular_with(r, None);
        };
        self.angular_with(r, Some(&h))
    }

    fn angular_with(&self, r: f64, h: Option<&Vec<f64>>) -> (f64, f64) {
        let lr = r.ln();
        let mut acc = 0.0;
        let mut mag = 0.0;
        let mut cs = vec![(1.0, 0.0); self.max_n as usize + 1];
        for j in 0..self.nodes {
            let th = 2.0 * PI * j as f64 / self.nodes as f64;
            for (n, slot) in cs.iter_mut().enumerate() {
                *slot = ((n as f64 * th).cos(), (n as f64 * th).sin());
            }
            let (x, y) = (r * th.cos(), r * th.sin());
            let phi = h.map(|h| self.phi.eval_with(x, y, h)).unwrap_or(0.0);
            for (g, t) in self.groups.iter().zip(&self.taylor) {
                let f: f64 = g.terms.iter().map(|t| t.eval(r, lr, &cs)).sum();
                let mut w = phi;
                if let Some(tp) = t {
                    if r < self.rho {
                        w -= tp.core().eval(x, y);
                    }
                }
                acc += f * w;
                mag += (f * w).abs() + f.abs() * phi.abs();
            }
        }
        let h = 2.0 * PI / self.nodes as f64;
        (acc * h, mag * h)
    }

    /// `∫_a^b r A(r) dr`, split at the discontinuities of the integrand.
    fn radial(&self, a: f64, b: f64) -> f64 {
        let mut cuts = vec![a, b];
        for c in [self.rho, 0.5 * self.phi.support_radius(), self.phi.support_radius()] {
            if c > a && c < b {
                cuts.push(c);
            }
        }
        cuts.sort_by(f64::total_cmp);
        let f = |r: f64| r * self.angular(r);
        let g = |r: f64| r * self.angular_parts(r).1;
        cuts.windows(2)
            .map(|w| {
                let floor = 1e-15 * integrate_with_floor(&g, w[0], w[1], 1e-3, 0.0).abs();
                integrate_with_floor(&f, w[0], w[1], self.tol, floor)
            })
            .sum()
    }

    /// Outer limit of the integrand: the support, or `ρ` when subtraction reaches beyond it.
    fn outer(&self) -> f64 {
        if self.taylor.iter().any(Option::is_some) {
            self.phi.support_radius().max(self.rho)
        } else {
            self.phi.support_radius()
        }
    }

    /// Asymptotic exponents `(a, q)` of `I(ε) − I(0)`.
    fn exponents(&self) -> Vec<(i32, u8)> {
        let degs: Vec<u32> = self.phi.core().terms().map(|(a, _)| a.order()).collect();
        let mut out = Vec::new();
        for g in &self.groups {
            let d = g.sub.unwrap_or(-1);
            for t in &g.terms {
                for &j in &degs {
                    if (j as i32) <= d || j < t.n || (j - t.n) % 2 != 0 {
                        continue;
                    }
                    let a = t.k + 2 + j as i32;
                    for q in 0..=t.p {
                        if !out.contains(&(a, q)) {
                            out.push((a, q));
                        }
                    }
                }
            }
        }
        out.sort();
        out
    }
}

/// Cumulative values `I(ε_j) = ∫_{r>ε_j} …` over the ladder.
fn ladder_values(an: &Annular<'_>, eps: &[f64]) -> Vec<f64> {
    let mut acc = an.radial(eps[0], an.outer());
    let mut out = vec![acc];
    for w in eps.windows(2) {
        acc += an.radial(w[1], w[0]);
        out.push(acc);
    }
    out
}

/// Least-squares fit of `I(ε) = I₀ + Σ c ε^a (ln ε)^q`; returns `(I₀, error estimate)`.
pub(crate) fn extrapolate(eps: &[f64], vals: &[f64], basis: &[(i32, u8)], max_terms: usize) -> (f64, f64) {
    let fit = |pts: usize, nb: usize| -> f64 {
        let start = eps.len() - pts;
        let nb = nb.min(pts.saturating_sub(2));
        let cols = 1 + nb;
        let mut m = DMatrix::<f64>::zeros(pts, cols);
        let mut rhs = DVector::<f64>::zeros(pts);
        for i in 0..pts {
            let e = eps[start + i];
            m[(i, 0)] = 1.0;
            for (c, (a, q)) in basis.iter().take(nb).enumerate() {
                m[(i, c + 1)] = e.powi(*a) * e.ln().powi(*q as i32);
            }
            rhs[i] = vals[start + i];
        }
        let mut scales = vec![1.0; cols];
        for c in 0..cols {
            let s = (0..pts).map(|i| m[(i, c)].abs()).fold(0.0, f64::max);
            if s > 0.0 {
                scales[c] = s;
                for i in 0..pts {
                    m[(i, c)] /= s;
                }
            }
        }
        let svd = m.svd(true, true);
        match svd.solve(&rhs, 1e-14) {
            Ok(x) => x[0] / scales[0],
            Err(_) => vals[vals.len() - 1],
        }
    };
    let n = eps.len();
    let nb = basis.len().min(max_terms - 1);
    let best = fit(n, nb);
    let alt1 = fit(n - 1, nb);
    let alt2 = fit(n - 2, nb);
    let err = (best - alt1).abs().max((best - alt2).abs());
    (best, err)
}

/// Empirical decay exponent of successive ladder differences.
pub fn ladder_exponent(vals: &[f64]) -> f64 {
    let d: Vec<f64> = vals.windows(2).map(|w| w[1] - w[0]).collect();
    let n = d.len();
    if n < 2 {
        return f64::INFINITY;
    }
    let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    let (a, b) = (d[n - 2].abs(), d[n - 1].abs());
    if b <= 1e-13 * scale {
        return f64::INFINITY;
    }
    if a == 0.0 {
        return f64::NEG_INFINITY;
    }
    -(b / a).log2()
}

fn check_support(f: &SingularField, phi: &TestFunction) -> Result<(), QuadratureError> {
    if phi.support_radius() > f.domain_radius() {
        return Err(QuadratureError::SupportTooLarge {
            support: phi.support_radius(),
            domain: f.domain_radius(),
        });
    }
    Ok(())
}

/// Extrapolated pairing of one component's smooth part, with an error estimate.
fn smooth_pairing(
    f: &SingularField,
    comp: usize,
    phi: &TestFunction,
    spec: &QuadratureSpec,
) -> (f64, f64, f64) {
    let s = f.component_series(comp);
    if s.is_zero() {
        return (0.0, 0.0, f64::INFINITY);
    }
    let rho = f.reference_radius();
    let an = Annular::new(s, f.ell(), rho, phi, spec, true);
    let eps = spec.ladder(phi.support_radius());
    let vals = ladder_values(&an, &eps);
    // Only ladder points inside both B_ρ and the polynomial core follow the model.
    let limit = rho.min(0.5 * phi.support_radius()) * (1.0 + 1e-12);
    let first = eps.iter().position(|e| *e <= limit).unwrap_or(eps.len());
    let (e, v) = (&eps[first..], &vals[first..]);
    let exponent = ladder_exponent(&vals);
    if e.len() < 4 {
        return (vals[vals.len() - 1], f64::INFINITY, exponent);
    }
    let (val, err) = extrapolate(e, v, &an.exponents(), spec.max_fit_terms);
    (val, err, exponent)
}

/// `F(φ)` per Cartesian component.
pub fn pair(f: &SingularField, phi: &TestFunction, spec: &QuadratureSpec) -> Result<Vec<f64>, QuadratureError> {
    spec.validate()?;
    check_support(f, phi)?;
    let point = f.point().pair_with(f.ell(), |a| vec![phi.derivative_at_origin(a); f.codomain().len()]);
    let mut out = point;
    for (c, slot) in out.iter_mut().enumerate() {
        let (v, err, exponent) = smooth_pairing(f, c, phi, spec);
        if err > spec.accept_tol * (1.0 + v.abs()) {
            return Err(QuadratureError::NonConvergent { exponent });
        }
        *slot += v;
    }
    Ok(out)
}

/// `F(φ)` for a scalar field.
pub fn pair_scalar(f: &SingularField, phi: &TestFunction, spec: &QuadratureSpec) -> Result<f64, QuadratureError> {
    if f.codomain() != Codomain::Scalar {
        return Err(QuadratureError::InvalidSpec(format!(
            "pair_scalar needs a scalar field, got {:?}",
            f.codomain()
        )));
    }
    Ok(pair(f, phi, spec)?[0])
}

/// Raw truncated integrals `∫_{r>ε_j} f φ da` (no regularization), per component.
pub fn pv_ladder(
    f: &SingularField,
    phi: &TestFunction,
    spec: &QuadratureSpec,
) -> Result<Vec<(f64, Vec<f64>)>, QuadratureError> {
    spec.validate()?;
    check_support(f, phi)?;
    let eps = spec.ladder(phi.support_radius());
    let cols: Vec<Vec<f64>> = f
        .components()
        .iter()
        .map(|s| {
            let an = Annular::new(s, f.ell(), f.reference_radius(), phi, spec, false);
            if s.is_zero() {
                vec![0.0; eps.len()]
            } else {
                ladder_values(&an, &eps)
            }
        })
        .collect();
    Ok(eps
        .iter()
        .enumerate()
        .map(|(j, e)| (*e, cols.iter().map(|c| c[j]).collect()))
        .collect())
}

/// `lim_{ε→0} ∫_{r>ε} f φ da` for a scalar field, or the divergence exponent.
///
/// Ladder steps that fall below the angular cancellation noise are dropped before
/// the decay exponent is read off, so fast convergence is not mistaken for noise.
pub fn pv_limit(f: &SingularField, phi: &TestFunction, spec: &QuadratureSpec) -> Result<f64, QuadratureError> {
    spec.validate()?;
    check_support(f, phi)?;
    let s = f.component_series(0);
    if s.is_zero() {
        return Ok(0.0);
    }
    let an = Annular::new(s, f.ell(), f.reference_radius(), phi, spec, false);
    let eps = spec.ladder(phi.support_radius());
    let vals = ladder_values(&an, &eps);
    let g = |r: f64| r * an.angular_parts(r).1;
    let mut clean = 1;
    while clean < vals.len() {
        let noise = 1e-13 * integrate_with_floor(&g, eps[clean], an.outer(), 1e-3, 0.0).abs();
        if (vals[clean] - vals[clean - 1]).abs() <= noise {
            break;
        }
        clean += 1;
    }
    let (eps, vals) = (&eps[..clean], &vals[..clean]);
    let exponent = ladder_exponent(vals);
    if exponent < 0.4 {
        return Err(QuadratureError::NonConvergent { exponent });
    }
    let basis: Vec<(i32, u8)> = an.exponents().into_iter().filter(|(a, _)| *a > 0).collect();
    let first = eps.iter().position(|e| *e <= 0.5 * phi.support_radius()).unwrap_or(0);
    if eps.len() - first < 3 {
        return Ok(vals[vals.len() - 1]);
    }
    Ok(extrapolate(&eps[first..], &vals[first..], &basis, spec.max_fit_terms).0)
}

/// `T^j(φ) = ∫ f (1 − ϑ(2^j x)) φ da`, `j = 0..=j_max`, for a scalar smooth field of negative degree.
pub fn cutoff_series_extension(
    f0: &SingularField,
    phi: &TestFunction,
    j_max: usize,
) -> Result<Vec<f64>, QuadratureError> {
    let spec = QuadratureSpec::default();
    check_support(f0, phi)?;
    if f0.codomain() != Codomain::Scalar || !f0.point().is_empty() {
        return Err(QuadratureError::InvalidSpec(
            "cutoff series needs a scalar field without point part".into(),
        ));
    }
    if !f0.has_smooth_part() {
        return Ok(vec![0.0; j_max + 1]);
    }
    let deg = degree_of_divergence(f0);
    if deg >= 0.0 {
        return Err(QuadratureError::NotCauchy(deg));
    }
    let an = Annular::new(f0.component_series(0), f0.ell(), f0.reference_radius(), phi, &spec, false);
    let r0 = 0.5 * phi.support_radius();
    let cutoff = TestFunction::from_core(super::testfn::Poly::monomial(crate::field_algebra::MultiIndex::ZERO, 1.0), r0)
        .expect("positive radius");
    let mut out = Vec::with_capacity(j_max + 1);
    let mut outer = 0.0;
    let mut prev_inner = an.outer();
    for j in 0..=j_max {
        let scale = 2f64.powi(j as i32);
        let (lo, hi) = (r0 / (2.0 * scale), r0 / scale);
        outer += an.radial(hi, prev_inner);
        prev_inner = hi;
        let g = |r: f64| r * an.angular(r) * (1.0 - cutoff.eval(r * scale, 0.0));
        let m = |r: f64| r * an.angular_parts(r).1;
        let floor = 1e-15 * integrate_with_floor(&m, lo, hi, 1e-3, 0.0).abs();
        let band = integrate_with_floor(&g, lo, hi, spec.radial_tol, floor);
        out.push(outer + band);
    }
    Ok(out)
}

/// Extrapolated limit of the cutoff series.
pub fn cutoff_series_limit(f0: &SingularField, phi: &TestFunction, j_max: usize) -> Result<f64, QuadratureError> {
    let seq = cutoff_series_extension(f0, phi, j_max)?;
    if !f0.has_smooth_part() {
        return Ok(0.0);
    }
    let spec = QuadratureSpec::default();
    let an = Annular::new(f0.component_series(0), f0.ell(), f0.reference_radius(), phi, &spec, false);
    let r0 = 0.5 * phi.support_radius();
    let eps: Vec<f64> = (0..seq.len()).map(|j| r0 / 2f64.powi(j as i32)).collect();
    Ok(extrapolate(&eps, &seq, &an.exponents(), spec.max_fit_terms).0)
}

/// `−slope` of `ln |F(φ_λ)|` against `ln λ`.
pub fn estimate_scaling_degree(
    f: &SingularField,
    phi: &TestFunction,
    lambda_grid: &[f64],
) -> Result<f64, QuadratureError> {
    let spec = QuadratureSpec::default();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &l in lambda_grid {
        let phil = rescale_test(phi, l)?;
        let v = pair(f, &phil, &spec)?;
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        xs.push(l.ln());
        ys.push(norm);
    }
    let peak = ys.iter().cloned().fold(0.0, f64::max);
    if peak < 1e-14 {
        return Err(QuadratureError::Indeterminate);
    }
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(&ys)
        .filter(|(_, y)| **y > 1e-12 * peak)
        .map(|(x, y)| (*x, y.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(QuadratureError::Indeterminate);
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(-sxy / sxx)
}

/// Default dyadic grid `λ = 2^{-1} … 2^{-8}`.
pub fn dyadic_grid() -> Vec<f64> {
    (1..=8).map(|j| 2f64.powi(-j)).collect()
}
