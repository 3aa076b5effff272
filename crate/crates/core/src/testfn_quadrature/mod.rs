//! Test functions and the numerical pairing oracle.

mod jet;
mod oracle;
mod testfn;

pub use jet::Jet;
pub use oracle::{
    circle_quadrature, integrate_with_floor, cutoff_series_extension, cutoff_series_limit, dyadic_grid,
    estimate_scaling_degree, integrate, ladder_exponent, pair, pair_scalar, pv_ladder, pv_limit,
    QuadratureSpec,
};
pub use testfn::{make_w_alpha, rescale_test, scaling_probe, Poly, TestFunction};
