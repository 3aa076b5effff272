//! Exact distributional calculus for planar elastic fields with a single point
//! singularity, with a numerical pairing oracle for cross-checks.

pub mod checkers;
pub mod coeff;
pub mod defect_force;
pub mod elasticity;
pub mod error;
pub mod field_algebra;
pub mod testfn_quadrature;

pub use coeff::{Coeff, Rational};
pub use error::{CheckError, FieldError, MechanicsError, QuadratureError};
pub use field_algebra::{Codomain, MultiIndex, PointPart, SingularField, SmoothTerm};
