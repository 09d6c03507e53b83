//! Membership tests for the order-`n` subdifferential of Hadamard type.
//!
//! A form `x*` of order `n` belongs to the subdifferential with chain
//! `(x_1*, …, x_{n-1}*)` when `x*(u)…(u)` stays below the order-`n` lower
//! derivative in every direction. Directions are sampled, so "holds" means
//! "holds on every sampled direction"; the reported margin says how close it was.

use serde::{Deserialize, Serialize};

use crate::deriv::{hadamard_deriv, LiminfSchedule, MultiplierChain, SymTensor};
use crate::error::{Error, Result};
use crate::extreal::{ext_affine_combine, ExtReal};
use crate::funcspec::FunctionSpec;
use crate::probe::{probe_directions, Probe};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

/// Outcome of a sampled universal check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriState {
    pub verdict: Verdict,
    /// A direction where the condition is violated (present iff `Fails`).
    pub witness: Option<Vec<f64>>,
    /// Smallest `estimate - candidate` seen over the checked directions.
    pub margin: ExtReal,
    /// Derivative order the verdict refers to.
    pub order: usize,
    pub directions_checked: usize,
}

impl TriState {
    pub fn new(verdict: Verdict, order: usize, margin: ExtReal, directions_checked: usize) -> Self {
        TriState { verdict, witness: None, margin, order, directions_checked }
    }

    pub fn with_witness(mut self, w: Vec<f64>) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn fails(&self) -> bool {
        self.verdict == Verdict::Fails
    }
}

/// Checks orders `1..n` in turn; `Ok(None)` when all hold.
fn lower_orders(probe: &Probe<'_>, n: usize) -> Result<Option<TriState>> {
    for k in 1..n {
        let t = probe.zero_level(k)?;
        match t.verdict {
            Verdict::Holds => {}
            Verdict::Fails => return Err(Error::LowerOrderSubdiff(k)),
            Verdict::Inconclusive => return Ok(Some(t)),
        }
    }
    Ok(None)
}

/// `0 ∈ ∂^n f(x; 0, …, 0)` over the sampled unit sphere.
///
/// Orders below `n` are checked first; an order that certainly fails there is
/// an error, since the order-`n` set is then not the one asked about.
pub fn zero_in_subdiff(
    f: &FunctionSpec,
    x: &[f64],
    n: usize,
    sched: &LiminfSchedule,
    sphere_samples: usize,
) -> Result<TriState> {
    let probe = Probe::new(f, x, n, sched, sphere_samples)?;
    if let Some(t) = lower_orders(&probe, n)? {
        return Ok(t);
    }
    probe.zero_level(n)
}

/// `cand ∈ ∂^n f(x; chain)` over the sampled unit sphere.
pub fn tensor_in_subdiff(
    f: &FunctionSpec,
    x: &[f64],
    chain: &MultiplierChain,
    cand: &SymTensor,
    sched: &LiminfSchedule,
    sphere_samples: usize,
) -> Result<TriState> {
    let n = chain.order();
    if cand.order() != n {
        return Err(Error::OrderMismatch { expected: n, got: cand.order() });
    }
    if cand.dim() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), got: cand.dim() });
    }
    f.check_point(x)?;
    let dirs = probe_directions(f, x, sphere_samples, sched.seed);
    let mut margin = ExtReal::PosInf;
    let mut unsure = false;
    for (i, u) in dirs.iter().enumerate() {
        let e = hadamard_deriv(f, x, chain, u, sched)?;
        let m = ext_affine_combine(e.value, 1.0, -cand.apply(u))?;
        margin = margin.min(m);
        let ok = match m {
            ExtReal::PosInf => true,
            ExtReal::NegInf => false,
            ExtReal::Finite(v) if v > e.eps_used => true,
            ExtReal::Finite(v) if v < -e.eps_used => false,
            ExtReal::Finite(_) if e.converged => true,
            ExtReal::Finite(_) => {
                unsure = true;
                continue;
            }
        };
        if !ok {
            return Ok(TriState::new(Verdict::Fails, n, margin, i + 1).with_witness(u.clone()));
        }
    }
    let verdict = if unsure { Verdict::Inconclusive } else { Verdict::Holds };
    Ok(TriState::new(verdict, n, margin, dirs.len()))
}

/// A closed interval of the extended line; `empty` when `lo > hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: ExtReal,
    pub hi: ExtReal,
    pub empty: bool,
}

impl Interval {
    pub fn new(lo: ExtReal, hi: ExtReal) -> Self {
        Interval { lo, hi, empty: lo > hi }
    }

    pub fn contains(&self, v: f64) -> bool {
        !self.empty && self.lo <= ExtReal::Finite(v) && ExtReal::Finite(v) <= self.hi
    }
}

fn positive_zero(v: ExtReal) -> ExtReal {
    match v {
        ExtReal::Finite(z) if z == 0.0 => ExtReal::ZERO,
        other => other,
    }
}

/// The order-`n` subdifferential (zero chain) of a function of one variable.
///
/// By homogeneity `a·u^n <= d^n(u)` only has to be checked at `u = ±1`:
/// for even `n` it gives `(-inf, min(d(1), d(-1))]`, for odd `n` it gives
/// `[-d(-1), d(1)]`, which may be empty.
pub fn subdiff_interval_1d(f: &FunctionSpec, x: &[f64], n: usize, sched: &LiminfSchedule) -> Result<Interval> {
    if f.dim() != 1 {
        return Err(Error::NotOneDimensional);
    }
    let probe = Probe::with_directions(f, x, n, sched, vec![vec![1.0], vec![-1.0]])?;
    lower_orders(&probe, n)?;
    let d = |i: usize| probe.hadamard(i, n).map(|e| positive_zero(e.snapped()));
    let (plus, minus) = (d(0)?, d(1)?);
    Ok(if n.is_multiple_of(2) {
        Interval::new(ExtReal::NegInf, plus.min(minus))
    } else {
        Interval::new(positive_zero(minus.neg()), plus)
    })
}
