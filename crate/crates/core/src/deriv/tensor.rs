//! Symmetric multilinear forms and the multiplier chains built from them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest tensor order accepted in an explicit chain.
pub const MAX_TENSOR_ORDER: usize = 4;
/// Largest dimension accepted for explicit tensors.
pub const MAX_TENSOR_DIM: usize = 6;

/// Non-decreasing index tuples of length `order` over `0..dim`, in lexicographic order.
pub fn multi_indices(order: usize, dim: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, left: usize, dim: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..dim {
            cur.push(i);
            rec(i, left - 1, dim, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, order, dim, &mut Vec::with_capacity(order), &mut out);
    out
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Number of distinct orderings of a sorted multi-index.
fn multiplicity(alpha: &[usize]) -> f64 {
    let mut denom = 1.0;
    let mut run = 1;
    for w in alpha.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            denom *= factorial(run);
            run = 1;
        }
    }
    denom *= factorial(run);
    factorial(alpha.len()) / denom
}

/// A symmetric `order`-linear form on `R^dim`.
///
/// Only one coefficient per multiset of argument slots is stored, so symmetry
/// holds by construction. `apply(u)` is the diagonal evaluation `T(u)(u)…(u)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TensorRepr", into = "TensorRepr")]
pub struct SymTensor {
    order: usize,
    dim: usize,
    entries: Vec<f64>,
    indices: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct TensorRepr {
    order: usize,
    dim: usize,
    entries: Vec<f64>,
}

impl From<SymTensor> for TensorRepr {
    fn from(t: SymTensor) -> Self {
        TensorRepr { order: t.order, dim: t.dim, entries: t.entries }
    }
}

impl TryFrom<TensorRepr> for SymTensor {
    type Error = Error;

    fn try_from(r: TensorRepr) -> Result<Self> {
        let mut t = SymTensor::zeros(r.order, r.dim)?;
        if t.entries.len() != r.entries.len() {
            return Err(Error::DimensionMismatch { expected: t.entries.len(), got: r.entries.len() });
        }
        t.entries = r.entries;
        Ok(t)
    }
}

impl SymTensor {
    fn check_capacity(order: usize, dim: usize) -> Result<()> {
        if order == 0 {
            return Err(Error::OrderTooSmall { min: 1, got: 0 });
        }
        if order > MAX_TENSOR_ORDER || dim > MAX_TENSOR_DIM || dim == 0 {
            return Err(Error::Capacity(format!(
                "tensor of order {order} on R^{dim} (limits: order <= {MAX_TENSOR_ORDER}, 1 <= dim <= {MAX_TENSOR_DIM})"
            )));
        }
        Ok(())
    }

    pub fn zeros(order: usize, dim: usize) -> Result<Self> {
        Self::check_capacity(order, dim)?;
        let indices = multi_indices(order, dim);
        Ok(SymTensor { order, dim, entries: vec![0.0; indices.len()], indices })
    }

    /// Builds the tensor from its value on each sorted multi-index
    /// (the mixed partial `∂^α` for derivative tensors).
    pub fn from_fn(order: usize, dim: usize, mut coef: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        Self::check_capacity(order, dim)?;
        let indices = multi_indices(order, dim);
        let entries = indices.iter().map(|a| coef(a)).collect();
        Ok(SymTensor { order, dim, entries, indices })
    }

    /// `scale · Σ u_i²` as an order-2 tensor.
    pub fn scaled_identity(dim: usize, scale: f64) -> Result<Self> {
        Self::from_fn(2, dim, |a| if a[0] == a[1] { scale } else { 0.0 })
    }

    /// Order-1 tensor from a covector.
    pub fn linear(coefs: &[f64]) -> Result<Self> {
        Self::from_fn(1, coefs.len(), |a| coefs[a[0]])
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&c| c == 0.0)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        SymTensor {
            order: self.order,
            dim: self.dim,
            entries: self.entries.iter().map(|c| c * factor).collect(),
            indices: self.indices.clone(),
        }
    }

    /// Coefficient on the multiset `alpha` (any ordering).
    pub fn get(&self, alpha: &[usize]) -> Option<f64> {
        let mut key = alpha.to_vec();
        key.sort_unstable();
        self.indices.iter().position(|a| *a == key).map(|i| self.entries[i])
    }

    fn contract(&self, u: &[f64], absolute: bool) -> f64 {
        self.indices
            .iter()
            .zip(&self.entries)
            .filter(|(_, c)| **c != 0.0)
            .map(|(alpha, c)| {
                let prod: f64 = alpha.iter().map(|&i| if absolute { u[i].abs() } else { u[i] }).product();
                let c = if absolute { c.abs() } else { *c };
                multiplicity(alpha) * c * prod
            })
            .sum()
    }

    /// `T(u)(u)…(u)`.
    pub fn apply(&self, u: &[f64]) -> f64 {
        debug_assert_eq!(u.len(), self.dim);
        self.contract(u, false)
    }

    /// Same contraction with every coefficient and coordinate replaced by its
    /// absolute value; an upper bound on `|apply(v)|` for `|v_i| <= |u_i|`.
    pub fn abs_apply(&self, u: &[f64]) -> f64 {
        self.contract(u, true)
    }
}

/// The forms `x_1*, …, x_{n-1}*` subtracted inside the order-`n` difference quotient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MultiplierChain {
    /// All-zero chain of the given derivative order; needs no tensor storage.
    Zero { order: usize },
    /// Explicit tensors of orders `1, 2, …, n-1`.
    Tensors { tensors: Vec<SymTensor> },
}

impl MultiplierChain {
    pub fn zero(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::OrderTooSmall { min: 1, got: 0 });
        }
        Ok(MultiplierChain::Zero { order })
    }

    pub fn new(tensors: Vec<SymTensor>) -> Result<Self> {
        let dim = tensors.first().map(|t| t.dim());
        for (k, t) in tensors.iter().enumerate() {
            if t.order() != k + 1 {
                return Err(Error::OrderMismatch { expected: k + 1, got: t.order() });
            }
            if Some(t.dim()) != dim {
                return Err(Error::DimensionMismatch { expected: dim.unwrap_or(0), got: t.dim() });
            }
        }
        Ok(MultiplierChain::Tensors { tensors })
    }

    /// Derivative order `n` this chain belongs to.
    pub fn order(&self) -> usize {
        match self {
            MultiplierChain::Zero { order } => *order,
            MultiplierChain::Tensors { tensors } => tensors.len() + 1,
        }
    }

    pub fn dim(&self) -> Option<usize> {
        match self {
            MultiplierChain::Zero { .. } => None,
            MultiplierChain::Tensors { tensors } => tensors.first().map(|t| t.dim()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            MultiplierChain::Zero { .. } => true,
            MultiplierChain::Tensors { tensors } => tensors.iter().all(SymTensor::is_zero),
        }
    }

    /// `Σ_{i=1}^{n-1} t^i / i! · x_i*(u)^i`.
    pub fn taylor_sum(&self, t: f64, u: &[f64]) -> f64 {
        match self {
            MultiplierChain::Zero { .. } => 0.0,
            MultiplierChain::Tensors { tensors } => tensors
                .iter()
                .enumerate()
                .map(|(k, x)| {
                    let i = k + 1;
                    t.powi(i as i32) / factorial(i) * x.apply(u)
                })
                .sum(),
        }
    }

    /// Magnitudes `|x_i*|(|u|)^i / i!` for `i = 1..n-1`, used by the step floor.
    pub fn magnitudes(&self, u: &[f64]) -> Vec<f64> {
        match self {
            MultiplierChain::Zero { order } => vec![0.0; order.saturating_sub(1)],
            MultiplierChain::Tensors { tensors } => {
                tensors.iter().enumerate().map(|(k, x)| x.abs_apply(u) / factorial(k + 1)).collect()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn index_counts() {
        assert_eq!(multi_indices(2, 2), vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(multi_indices(4, 6).len(), 126);
        assert_eq!(multiplicity(&[0, 0, 1, 2]), 12.0);
    }

    #[test]
    fn identity_quadratic() {
        let t = SymTensor::scaled_identity(2, 2.0).unwrap();
        assert_eq!(t.apply(&[1.0, 1.0]), 4.0);
        assert_eq!(t.get(&[1, 0]), Some(0.0));
    }

    #[test]
    fn capacity_is_enforced() {
        assert!(matches!(SymTensor::zeros(5, 2), Err(Error::Capacity(_))));
        assert!(matches!(SymTensor::zeros(2, 7), Err(Error::Capacity(_))));
    }

    #[test]
    fn chain_validation() {
        let g = SymTensor::linear(&[1.0, 0.0]).unwrap();
        let h = SymTensor::scaled_identity(2, 2.0).unwrap();
        assert_eq!(MultiplierChain::new(vec![g.clone(), h.clone()]).unwrap().order(), 3);
        assert!(MultiplierChain::new(vec![h, g]).is_err());
        assert_eq!(MultiplierChain::new(vec![]).unwrap().order(), 1);
        assert_eq!(MultiplierChain::zero(5).unwrap().order(), 5);
    }

    #[test]
    fn mixed_cubic_matches_dense_expansion() {
        // T = sym(e0⊗e0⊗e1): T(u)^3 = 3 u0^2 u1
        let t = SymTensor::from_fn(3, 2, |a| if a == [0, 0, 1] { 1.0 } else { 0.0 }).unwrap();
        assert!((t.apply(&[2.0, 5.0]) - 3.0 * 4.0 * 5.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn apply_is_homogeneous(order in 1usize..=4, dim in 1usize..=3, seed in 0u64..1000,
                                u in prop::collection::vec(-2.0f64..2.0, 3), tau in 0.1f64..4.0) {
            let mut s = seed;
            let t = SymTensor::from_fn(order, dim, |_| {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((s >> 33) as f64 / (1u64 << 31) as f64) - 1.0
            }).unwrap();
            let u = &u[..dim];
            let scaled: Vec<f64> = u.iter().map(|x| tau * x).collect();
            let lhs = t.apply(&scaled);
            let rhs = tau.powi(order as i32) * t.apply(u);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
        }
    }
}
