//! Benchmark fixtures.

use defectfield::coeff::Coeff;
use defectfield::elasticity::{IsotropicModuli, PointSourceProblem};
use defectfield::field_algebra::{MultiIndex, PointPart};

pub fn moduli() -> IsotropicModuli {
    IsotropicModuli::new(1.0, 0.3).expect("valid moduli")
}

/// Mixed body force and incompatibility sources up to second order.
pub fn order_two_problem() -> PointSourceProblem {
    let one = Coeff::from_f64(1.0).expect("finite");
    let mut load = PointPart::new(2);
    load.add_component(MultiIndex(0, 0), 0, &one);
    load.add_component(MultiIndex(1, 0), 1, &one);
    load.add_component(MultiIndex(0, 2), 0, &one);
    PointSourceProblem::new(load, PointPart::scalar(MultiIndex(1, 1), one), moduli(), 1.0).expect("valid problem")
}
