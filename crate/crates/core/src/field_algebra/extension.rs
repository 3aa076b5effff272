//! Extensions of non-integrable terms across `O`.
//!
//! A term `f = c r^k (ln r)^p trig(nθ)` with `k ≤ −2` is extended by
//! `T^ρ_f(ψ) = ∫_{B_ρ} f (ψ − T_d ψ) da + ∫_{r>ρ} f ψ da`, `d = −k − 2`,
//! where `T_d ψ` is the Taylor polynomial of `ψ` at `O`. When the principal
//! value exists the subtracted moments vanish and the two agree.

use serde::{Deserialize, Serialize};

use crate::error::FieldError;

use super::field::{SingularField, SmoothTerm};
use super::series::{Mono, Series};
use super::{Codomain, MultiIndex};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ExtensionPolicy {
    Pv,
    FinitePart { rho: f64 },
}

/// Whether `lim_{ε→0} ∫_{Ω−B_ε} f ψ` exists for every test function.
pub fn pv_extension_exists(t: &SmoothTerm) -> Result<bool, FieldError> {
    if t.p != 0 {
        return Err(FieldError::UnsupportedPolicy(t.p));
    }
    Ok(mono_has_pv(&t.mono()))
}

fn mono_has_pv(m: &Mono) -> bool {
    if m.k >= -1 {
        return true;
    }
    let order = -m.k;
    m.p == 0 && (m.n as i32) > order - 2
}

impl SingularField {
    /// Policy of every non-integrable Cartesian term, as `(component, term, policy)`.
    pub fn policies(&self) -> Vec<(usize, Mono, ExtensionPolicy)> {
        let rho = self.reference_radius();
        let mut out = Vec::new();
        for (c, s) in self.components().iter().enumerate() {
            for (m, _) in s.terms() {
                if m.k >= -1 {
                    continue;
                }
                let policy = if mono_has_pv(m) {
                    ExtensionPolicy::Pv
                } else {
                    ExtensionPolicy::FinitePart { rho }
                };
                out.push((c, *m, policy));
            }
        }
        out
    }
}

/// Extension with empty point part and the default reference radius `R/2`.
pub fn canonical_extension(
    codomain: Codomain,
    smooth_terms: &[SmoothTerm],
    domain_radius: f64,
) -> Result<SingularField, FieldError> {
    SingularField::from_terms(codomain, domain_radius, smooth_terms)
}

/// Extension with an explicit reference radius `ρ ∈ (0, R)`.
pub fn canonical_extension_with(
    codomain: Codomain,
    smooth_terms: &[SmoothTerm],
    domain_radius: f64,
    rho: f64,
) -> Result<SingularField, FieldError> {
    canonical_extension(codomain, smooth_terms, domain_radius)?.with_reference_radius(rho)
}

/// `∫_a^b r^j (ln r)^p dr`.
fn radial_moment(j: i32, p: u8, a: f64, b: f64) -> f64 {
    let anti = |r: f64| {
        let l = r.ln();
        if j == -1 {
            return l.powi(p as i32 + 1) / (p as f64 + 1.0);
        }
        let jp1 = j as f64 + 1.0;
        let mut acc = 0.0;
        let mut falling = 1.0;
        for i in 0..=p {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            acc += sign * falling * l.powi((p - i) as i32) / jp1.powi(i as i32 + 1);
            falling *= (p - i) as f64;
        }
        r.powf(jp1) * acc
    };
    anti(b) - anti(a)
}

/// Point part `T^{ρ} − T^{ρ'}` between the field's current reference radius
/// `ρ` and `rho_new`: `c_γ = −∫_{ρ'<r<ρ} f w^γ da` for `|γ| ≤ d`.
pub fn finite_part_shift(
    f: &SingularField,
    rho_new: f64,
) -> Result<Vec<(MultiIndex, Vec<f64>)>, FieldError> {
    if !(rho_new > 0.0 && rho_new < f.domain_radius()) {
        return Err(FieldError::InvalidDomain(format!(
            "reference radius {rho_new} must lie in (0, {})",
            f.domain_radius()
        )));
    }
    let rho = f.reference_radius();
    let ell = f.ell();
    let width = f.codomain().len();
    let Some(kmin) = f.min_k() else {
        return Ok(Vec::new());
    };
    if kmin > -2 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for gamma in MultiIndex::up_to((-kmin - 2) as u32) {
        let g = gamma.order() as i32;
        let mut value = vec![0.0; width];
        for (c, s) in f.components().iter().enumerate() {
            let part = s.filter(|m| m.k + 2 + g <= 0);
            let prod = part.mul(&Series::w_core(gamma))?;
            for ((k, p), coeff) in prod.angular_mean_terms() {
                value[c] -= coeff.eval(ell) * radial_moment(k + 1, p, rho_new, rho);
            }
        }
        if value.iter().any(|v| *v != 0.0) {
            out.push((gamma, value));
        }
    }
    Ok(out)
}
