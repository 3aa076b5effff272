//! Executable equilibrium and compatibility conditions, plus point-supported antiderivatives.

mod antiderivative;
mod compatibility;
mod equilibrium;
mod report;

pub use antiderivative::{
    antiderivative_curl_with_tail, antiderivative_div_with_tail, defect_strain, incompatibility_from_sources,
    point_antiderivative_curl, point_antiderivative_curlcurl, point_antiderivative_div,
};
pub use compatibility::{
    cesaro_integral, cesaro_parts, cesaro_integral_quadrature, check_compatibility, check_compatibility_with, check_incompatibility,
    check_incompatibility_with, identify_point_defect, CesaroParts, DefectCharges,
};
pub use equilibrium::{
    check_equilibrium, check_equilibrium_restricted, check_equilibrium_with, loop_integral_traction,
    loop_integral_traction_exact, loop_integral_traction_quadrature,
};
pub use report::{CheckReport, Condition, DegreeReport, Verdict};

use crate::error::CheckError;
use crate::field_algebra::{Codomain, SingularField};

/// Relative slack for oracle pairings: `|r| ≤ 1e-8 (1 + scale)`.
pub const ORACLE_REL_TOL: f64 = 1e-8;

pub(crate) fn oracle_tolerance(scale: f64) -> f64 {
    ORACLE_REL_TOL * (1.0 + scale.abs())
}

/// Test functions are supported in half the domain.
pub(crate) fn test_support(f: &SingularField) -> f64 {
    0.5 * f.domain_radius()
}

/// Largest evaluated coefficient, used as an informational residual for exact conditions.
pub(crate) fn exact_size(f: &SingularField) -> f64 {
    let ell = f.ell();
    let smooth = f
        .components()
        .iter()
        .flat_map(|s| s.terms().map(|(_, c)| c.eval(ell).abs()).collect::<Vec<_>>())
        .fold(0.0f64, f64::max);
    f.point_values()
        .iter()
        .flat_map(|(_, v)| v.iter().map(|x| x.abs()))
        .fold(smooth, f64::max)
}

pub(crate) fn require_codomain(f: &SingularField, allowed: &[Codomain], role: &str) -> Result<(), CheckError> {
    if allowed.contains(&f.codomain()) {
        Ok(())
    } else {
        Err(CheckError::Precondition(format!(
            "{role} must be {:?}, got {:?}",
            allowed,
            f.codomain()
        )))
    }
}
