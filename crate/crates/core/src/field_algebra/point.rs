//! Delta multipoles `Σ c_α ∂^α δ_O`.

use std::collections::BTreeMap;

use crate::coeff::{rat_int, Coeff};

use super::MultiIndex;

/// Finite map `α ↦ c_α`, with `c_α` a vector of Cartesian components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointPart {
    width: usize,
    entries: BTreeMap<MultiIndex, Vec<Coeff>>,
}

impl PointPart {
    pub fn new(width: usize) -> Self {
        Self {
            width,
            entries: BTreeMap::new(),
        }
    }

    /// `value · ∂^α δ_O`.
    pub fn single(alpha: MultiIndex, value: Vec<Coeff>) -> Self {
        let mut p = Self::new(value.len());
        p.add_entry(alpha, &value);
        p
    }

    /// Scalar `c · ∂^α δ_O`.
    pub fn scalar(alpha: MultiIndex, c: Coeff) -> Self {
        Self::single(alpha, vec![c])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&MultiIndex, &Vec<Coeff>)> {
        self.entries.iter()
    }

    pub fn get(&self, alpha: MultiIndex) -> Option<&Vec<Coeff>> {
        self.entries.get(&alpha)
    }

    /// Coefficient of one component, zero if absent.
    pub fn coeff(&self, alpha: MultiIndex, comp: usize) -> Coeff {
        self.entries
            .get(&alpha)
            .map(|v| v[comp].clone())
            .unwrap_or_default()
    }

    /// Largest `|α|` present.
    pub fn order(&self) -> Option<u32> {
        self.entries.keys().map(|a| a.order()).max()
    }

    pub fn add_entry(&mut self, alpha: MultiIndex, value: &[Coeff]) {
        assert_eq!(value.len(), self.width, "point-part width mismatch");
        let slot = self
            .entries
            .entry(alpha)
            .or_insert_with(|| vec![Coeff::zero(); value.len()]);
        for (s, v) in slot.iter_mut().zip(value) {
            *s += v;
        }
        if slot.iter().all(Coeff::is_zero) {
            self.entries.remove(&alpha);
        }
    }

    pub fn add_component(&mut self, alpha: MultiIndex, comp: usize, c: &Coeff) {
        let mut v = vec![Coeff::zero(); self.width];
        v[comp] = c.clone();
        self.add_entry(alpha, &v);
    }

    pub fn add(&self, other: &PointPart) -> PointPart {
        let mut out = self.clone();
        for (a, v) in &other.entries {
            out.add_entry(*a, v);
        }
        out
    }

    pub fn scale(&self, c: &Coeff) -> PointPart {
        let mut out = PointPart::new(self.width);
        for (a, v) in &self.entries {
            let scaled: Vec<Coeff> = v.iter().map(|x| x * c).collect();
            out.add_entry(*a, &scaled);
        }
        out
    }

    pub fn neg(&self) -> PointPart {
        self.scale(&Coeff::from_int(-1))
    }

    /// `∂_i` of the multipole: `α ↦ α + e_i`.
    pub fn shift(&self, dir: u8) -> PointPart {
        PointPart {
            width: self.width,
            entries: self
                .entries
                .iter()
                .map(|(a, v)| (a.bump(dir), v.clone()))
                .collect(),
        }
    }

    /// Scalar point part of one component.
    pub fn component(&self, comp: usize) -> PointPart {
        let mut out = PointPart::new(1);
        for (a, v) in &self.entries {
            out.add_entry(*a, std::slice::from_ref(&v[comp]));
        }
        out
    }

    /// Stack scalar point parts into one vector-valued part.
    pub fn stack(parts: &[PointPart]) -> PointPart {
        let mut out = PointPart::new(parts.len());
        for (c, p) in parts.iter().enumerate() {
            for (a, v) in &p.entries {
                out.add_component(*a, c, &v[0]);
            }
        }
        out
    }

    /// Numeric coefficients, given `ℓ = ln ρ`.
    pub fn eval(&self, ell: f64) -> Vec<(MultiIndex, Vec<f64>)> {
        self.entries
            .iter()
            .map(|(a, v)| (*a, v.iter().map(|c| c.eval(ell)).collect()))
            .collect()
    }

    /// `∂^α δ_O` acting on a function whose Taylor data at `O` is given
    /// by `derivs(α) = ∂^α ψ(O)`, component-wise.
    pub fn pair_with(&self, ell: f64, derivs: impl Fn(MultiIndex) -> Vec<f64>) -> Vec<f64> {
        let mut acc = vec![0.0; self.width];
        for (a, v) in &self.entries {
            let d = derivs(*a);
            let sign = if a.order() % 2 == 0 { 1.0 } else { -1.0 };
            for (k, c) in v.iter().enumerate() {
                acc[k] += sign * c.eval(ell) * d[k];
            }
        }
        acc
    }

    /// Rotate the multipole by a quarter turn: `∂^α δ ↦ (−1)^{α₂} ∂^{(α₂, α₁)} δ`.
    pub fn rotate_indices(&self) -> PointPart {
        let mut out = PointPart::new(self.width);
        for (a, v) in &self.entries {
            let s = Coeff::from_rat(rat_int(if a.1 % 2 == 0 { 1 } else { -1 }));
            let scaled: Vec<Coeff> = v.iter().map(|x| x * &s).collect();
            out.add_entry(MultiIndex(a.1, a.0), &scaled);
        }
        out
    }
}
