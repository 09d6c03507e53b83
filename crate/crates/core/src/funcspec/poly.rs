//! Polynomials with exact Fréchet derivatives.

use serde::{Deserialize, Serialize};

use crate::deriv::tensor::factorial;
use crate::deriv::{multi_indices, MultiplierChain, SymTensor};
use crate::error::{Error, Result};
use crate::extreal::ExtReal;

use super::ChainConvention;

/// Highest derivative order served by [`PolyTensorData::exact_frechet`].
pub const POLY_ORDER_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Monomial {
    coef: f64,
    exps: Vec<u32>,
}

/// `Σ c · x^e` over a list of monomials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyTensorData {
    dim: usize,
    terms: Vec<Monomial>,
}

fn falling(e: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (e - j) as f64)
}

impl PolyTensorData {
    pub fn new(dim: usize, terms: Vec<(f64, Vec<u32>)>) -> Result<Self> {
        let mut out = Vec::with_capacity(terms.len());
        for (coef, exps) in terms {
            if exps.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: exps.len() });
            }
            if !coef.is_finite() {
                return Err(Error::NonFiniteCoefficient);
            }
            out.push(Monomial { coef, exps });
        }
        Ok(PolyTensorData { dim, terms: out })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cap(&self) -> usize {
        POLY_ORDER_CAP
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|m| m.coef * m.exps.iter().zip(x).map(|(&e, &v)| v.powi(e as i32)).product::<f64>()).sum()
    }

    /// Mixed partial `∂^α p(x)` where `alpha` lists variable indices with repetition.
    pub fn partial(&self, alpha: &[usize], x: &[f64]) -> f64 {
        let mut counts = vec![0u32; self.dim];
        for &i in alpha {
            counts[i] += 1;
        }
        self.terms
            .iter()
            .map(|m| {
                let mut c = m.coef;
                for ((&e, &k), &v) in m.exps.iter().zip(&counts).zip(x) {
                    if k > e {
                        return 0.0;
                    }
                    c *= falling(e, k) * v.powi((e - k) as i32);
                }
                c
            })
            .sum()
    }

    fn check(&self, m: usize, x: &[f64], u: &[f64]) -> Result<()> {
        if m == 0 {
            return Err(Error::OrderTooSmall { min: 1, got: 0 });
        }
        if m > POLY_ORDER_CAP {
            return Err(Error::OrderBeyondCap { order: m, cap: POLY_ORDER_CAP });
        }
        for v in [x, u] {
            if v.len() != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, got: v.len() });
            }
        }
        Ok(())
    }

    /// `∇^m p(x)(u)…(u)`, computed as `m!` times the `s^m` coefficient of `p(x + s·u)`.
    pub fn exact_frechet(&self, m: usize, x: &[f64], u: &[f64]) -> Result<ExtReal> {
        self.check(m, x, u)?;
        let mut coef_m = 0.0;
        for mono in &self.terms {
            // univariate expansion truncated at degree m
            let mut acc = vec![0.0; m + 1];
            acc[0] = mono.coef;
            for ((&e, &xi), &ui) in mono.exps.iter().zip(x).zip(u) {
                if e == 0 {
                    continue;
                }
                let mut factor = vec![0.0; m + 1];
                let mut binom = 1.0;
                for (j, slot) in factor.iter_mut().enumerate().take((e as usize).min(m) + 1) {
                    if j > 0 {
                        binom = binom * (e as usize + 1 - j) as f64 / j as f64;
                    }
                    *slot = binom * xi.powi(e as i32 - j as i32) * ui.powi(j as i32);
                }
                let mut next = vec![0.0; m + 1];
                for (a, &ca) in acc.iter().enumerate() {
                    if ca == 0.0 {
                        continue;
                    }
                    for (b, &fb) in factor.iter().enumerate().take(m + 1 - a) {
                        next[a + b] += ca * fb;
                    }
                }
                acc = next;
            }
            coef_m += acc[m];
        }
        ExtReal::from_f64(factorial(m) * coef_m)
    }

    /// `∇^m p(x)` as a symmetric tensor (subject to the tensor capacity limits).
    pub fn tensor(&self, m: usize, x: &[f64]) -> Result<SymTensor> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        SymTensor::from_fn(m, self.dim, |alpha| self.partial(alpha, x))
    }

    /// Chain `(∇p(x), …, ∇^{n-1}p(x))` for the order-`n` quotient.
    pub fn frechet_chain(&self, n: usize, x: &[f64]) -> Result<MultiplierChain> {
        if n == 0 {
            return Err(Error::OrderTooSmall { min: 1, got: 0 });
        }
        let tensors = (1..n).map(|m| self.tensor(m, x)).collect::<Result<Vec<_>>>()?;
        if tensors.is_empty() {
            return MultiplierChain::zero(1);
        }
        MultiplierChain::new(tensors)
    }

    /// Whether every partial derivative of order `k` vanishes at `x`.
    pub fn derivatives_vanish(&self, k: usize, x: &[f64]) -> bool {
        multi_indices(k, self.dim).iter().all(|a| self.partial(a, x) == 0.0)
    }

    /// Exact lower derivative of order `n`: always for the Fréchet chain, and for
    /// the zero chain when every lower-order derivative vanishes at `x`.
    pub fn oracle(&self, n: usize, conv: ChainConvention, x: &[f64], u: &[f64]) -> Option<ExtReal> {
        if conv == ChainConvention::Zero && !(1..n).all(|k| self.derivatives_vanish(k, x)) {
            return None;
        }
        self.exact_frechet(n, x, u).ok()
    }
}

/// Free-function form of [`PolyTensorData::exact_frechet`].
pub fn exact_frechet(data: &PolyTensorData, m: usize, x: &[f64], u: &[f64]) -> Result<ExtReal> {
    data.exact_frechet(m, x, u)
}
