//! Lazily evaluated derivative estimates at one point over a fixed direction sample.
//!
//! Every classification routine asks for the same handful of estimates many
//! times; a [`Probe`] computes each `(direction, order)` value at most once.

use std::sync::OnceLock;

use crate::deriv::sampling::{merge_directions, sphere_directions};
use crate::deriv::{demyanov_deriv, dini_series, ginchev_series, hadamard_zero, DerivEstimate, LiminfSchedule, Sign};
use crate::error::{Error, Result};
use crate::extreal::ExtReal;
use crate::funcspec::FunctionSpec;
use crate::subdiff::{TriState, Verdict};

type Cell<T> = OnceLock<Result<T>>;

fn get<T>(cell: &Cell<T>, init: impl FnOnce() -> Result<T>) -> Result<&T> {
    cell.get_or_init(init).as_ref().map_err(Clone::clone)
}

/// Unit directions probed at `x`: the deterministic sphere sample (exactly
/// `{+1, -1}` in one dimension) plus the function's spike-hint directions.
pub fn probe_directions(f: &FunctionSpec, x: &[f64], sphere_samples: usize, seed: u64) -> Vec<Vec<f64>> {
    let base = sphere_directions(f.dim(), sphere_samples, seed);
    match f.hint() {
        Some(h) => merge_directions(base, h.directions(x)),
        None => base,
    }
}

fn cells<T>(n: usize) -> Vec<Cell<T>> {
    (0..n).map(|_| OnceLock::new()).collect()
}

pub struct Probe<'f> {
    f: &'f FunctionSpec,
    x: Vec<f64>,
    fx: f64,
    sched: LiminfSchedule,
    max_n: usize,
    dirs: Vec<Vec<f64>>,
    hadamard: Vec<Cell<DerivEstimate>>,
    dini: Vec<Cell<Vec<DerivEstimate>>>,
    ginchev: Vec<Cell<Vec<DerivEstimate>>>,
    demyanov: Vec<Cell<DerivEstimate>>,
}

impl<'f> Probe<'f> {
    pub fn new(
        f: &'f FunctionSpec,
        x: &[f64],
        max_n: usize,
        sched: &LiminfSchedule,
        sphere_samples: usize,
    ) -> Result<Self> {
        f.check_point(x)?;
        let dirs = probe_directions(f, x, sphere_samples, sched.seed);
        Self::with_directions(f, x, max_n, sched, dirs)
    }

    pub fn with_directions(
        f: &'f FunctionSpec,
        x: &[f64],
        max_n: usize,
        sched: &LiminfSchedule,
        dirs: Vec<Vec<f64>>,
    ) -> Result<Self> {
        f.check_point(x)?;
        sched.validate()?;
        if max_n == 0 {
            return Err(Error::OrderTooSmall { min: 1, got: 0 });
        }
        if dirs.is_empty() {
            return Err(Error::EmptySampleSet);
        }
        let fx = f.evaluate(x)?.finite().ok_or(Error::BaseOutsideDomain)?;
        Ok(Probe {
            f,
            x: x.to_vec(),
            fx,
            sched: sched.clone(),
            max_n,
            hadamard: cells(dirs.len() * max_n),
            dini: cells(dirs.len()),
            ginchev: cells(dirs.len()),
            demyanov: cells(max_n),
            dirs,
        })
    }

    pub fn function(&self) -> &FunctionSpec {
        self.f
    }

    pub fn point(&self) -> &[f64] {
        &self.x
    }

    pub fn value(&self) -> f64 {
        self.fx
    }

    pub fn schedule(&self) -> &LiminfSchedule {
        &self.sched
    }

    pub fn max_order(&self) -> usize {
        self.max_n
    }

    pub fn directions(&self) -> &[Vec<f64>] {
        &self.dirs
    }

    fn check_order(&self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::OrderTooSmall { min: 1, got: 0 });
        }
        if n > self.max_n {
            return Err(Error::OrderBeyondCap { order: n, cap: self.max_n });
        }
        Ok(())
    }

    /// Zero-chain Hadamard derivative of order `n` along direction `i`.
    pub fn hadamard(&self, i: usize, n: usize) -> Result<&DerivEstimate> {
        self.check_order(n)?;
        get(&self.hadamard[i * self.max_n + n - 1], || hadamard_zero(self.f, &self.x, n, &self.dirs[i], &self.sched))
    }

    /// Dini derivatives of orders `1..` along direction `i` (shorter than
    /// `max_order` when a lower order is infinite).
    pub fn dini(&self, i: usize) -> Result<&[DerivEstimate]> {
        get(&self.dini[i], || dini_series(self.f, &self.x, self.max_n, &self.dirs[i], &self.sched)).map(Vec::as_slice)
    }

    /// Ginchev derivatives of orders `0..` along direction `i`.
    pub fn ginchev(&self, i: usize) -> Result<&[DerivEstimate]> {
        get(&self.ginchev[i], || ginchev_series(self.f, &self.x, self.max_n, &self.dirs[i], &self.sched))
            .map(Vec::as_slice)
    }

    pub fn demyanov(&self, n: usize) -> Result<&DerivEstimate> {
        self.check_order(n)?;
        get(&self.demyanov[n - 1], || demyanov_deriv(self.f, &self.x, n, &self.sched))
    }

    /// Whether `0` lies in the order-`n` subdifferential over the sampled
    /// directions, without looking at lower orders.
    pub fn zero_level(&self, n: usize) -> Result<TriState> {
        let mut margin = ExtReal::PosInf;
        let mut unsure = false;
        for i in 0..self.dirs.len() {
            let e = self.hadamard(i, n)?;
            margin = margin.min(e.value);
            match e.sign {
                Sign::Negative => {
                    return Ok(TriState::new(Verdict::Fails, n, margin, i + 1).with_witness(self.dirs[i].clone()))
                }
                Sign::Inconclusive => unsure = true,
                _ => {}
            }
        }
        let verdict = if unsure { Verdict::Inconclusive } else { Verdict::Holds };
        Ok(TriState::new(verdict, n, margin, self.dirs.len()))
    }
}
