//! Exact point-singular fields on a disk and their distributional calculus.

mod algebra;
mod calculus;
mod extension;
mod field;
mod point;
mod series;

use serde::{Deserialize, Serialize};

pub use algebra::{
    amap, constant_tensor, double_dot, mat_vec, mul_scalar, scalar_times, symmetrize, tensor_product,
    times_identity, trace, transpose,
};
pub use calculus::{
    curl, curl_curl, div, gradient_potential, grad, laplacian, partial_derivative, rotate_quarter,
    symmetric_gradient,
};
pub use extension::{
    canonical_extension, canonical_extension_with, finite_part_shift, pv_extension_exists,
    ExtensionPolicy,
};
pub use field::{
    degree_of_divergence, linear_combine, linear_combine_exact, restrict, scaling_degree, Axis,
    Component, SingularField, SmoothTerm,
};
pub use point::PointPart;
pub use series::{binomial, trig_product, Mono, Parity, Series, MAX_LOG_POWER};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Codomain {
    Scalar,
    Vector,
    Tensor,
    SymTensor,
}

impl Codomain {
    /// Number of Cartesian components (tensors stored row-major, `2i + j`).
    pub fn len(self) -> usize {
        match self {
            Codomain::Scalar => 1,
            Codomain::Vector => 2,
            Codomain::Tensor | Codomain::SymTensor => 4,
        }
    }

    pub fn is_tensor(self) -> bool {
        matches!(self, Codomain::Tensor | Codomain::SymTensor)
    }
}

/// Two-dimensional multi-index `α = (α₁, α₂)`.
#[derive(
    Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
pub struct MultiIndex(pub u32, pub u32);

impl MultiIndex {
    pub const ZERO: MultiIndex = MultiIndex(0, 0);

    pub fn order(self) -> u32 {
        self.0 + self.1
    }

    pub fn factorial(self) -> u64 {
        fact(self.0) * fact(self.1)
    }

    /// `α + e_i` for direction `i ∈ {1, 2}`.
    pub fn bump(self, dir: u8) -> MultiIndex {
        match dir {
            1 => MultiIndex(self.0 + 1, self.1),
            _ => MultiIndex(self.0, self.1 + 1),
        }
    }

    /// `α − e_i`, if non-negative.
    pub fn lower(self, dir: u8) -> Option<MultiIndex> {
        match dir {
            1 if self.0 > 0 => Some(MultiIndex(self.0 - 1, self.1)),
            2 if self.1 > 0 => Some(MultiIndex(self.0, self.1 - 1)),
            _ => None,
        }
    }

    pub fn le(self, other: MultiIndex) -> bool {
        self.0 <= other.0 && self.1 <= other.1
    }

    /// All multi-indices with `|α| ≤ max_order`, ordered by `|α|` then `α₁` descending.
    pub fn up_to(max_order: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        for n in 0..=max_order {
            for a in (0..=n).rev() {
                out.push(MultiIndex(a, n - a));
            }
        }
        out
    }

    /// All `β ≤ α` component-wise.
    pub fn below(self) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        for a in 0..=self.0 {
            for b in 0..=self.1 {
                out.push(MultiIndex(a, b));
            }
        }
        out
    }
}

impl std::fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

fn fact(n: u32) -> u64 {
    (1..=n as u64).product()
}
