//! Liminf estimators for the derivative families.
//!
//! Every estimator walks the shells of a [`LiminfSchedule`], takes the
//! minimum of the sampled quotients in each shell and reports the minimum of
//! the last `tail` shells. Shells are evaluated in parallel; the per-shell
//! reduction runs in sample order, so results do not depend on thread count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extreal::{ext_min, ExtReal};
use crate::funcspec::FunctionSpec;

use super::sampling::{ball_directions, merge_directions, sphere_directions};
use super::schedule::{LiminfSchedule, Shell};
use super::tensor::{factorial, MultiplierChain};

const CONVERGENCE_TOL: f64 = 1e-4;
const SIGN_TOL: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Positive,
    Zero,
    Negative,
    Inconclusive,
}

impl Sign {
    /// Certainly `>= 0`.
    pub fn is_nonnegative(self) -> bool {
        matches!(self, Sign::Positive | Sign::Zero)
    }

    /// Certainly `<= 0`.
    pub fn is_nonpositive(self) -> bool {
        matches!(self, Sign::Negative | Sign::Zero)
    }
}

/// Result of one liminf estimation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivEstimate {
    pub order: usize,
    pub value: ExtReal,
    pub shell_minima: Vec<ExtReal>,
    pub converged: bool,
    pub sign: Sign,
    pub eps_used: f64,
    /// Smallest step actually used (the clip level when it was active).
    pub t_floor: f64,
}

impl DerivEstimate {
    fn from_minima(order: usize, shell_minima: Vec<ExtReal>, tail: usize, t_floor: f64) -> Result<Self> {
        let window = &shell_minima[shell_minima.len() - tail.min(shell_minima.len())..];
        let value = ext_min(window.iter().copied())?;
        let hi = window.iter().copied().max().expect("non-empty window");
        let (converged, eps_used) = match (value, hi) {
            (ExtReal::Finite(v), ExtReal::Finite(h)) => {
                (h - v <= CONVERGENCE_TOL * (1.0 + v.abs()), SIGN_TOL * (1.0 + v.abs()))
            }
            (v, h) => (v == h, SIGN_TOL),
        };
        let sign = match value {
            ExtReal::PosInf => Sign::Positive,
            ExtReal::NegInf => Sign::Negative,
            ExtReal::Finite(v) if v > eps_used => Sign::Positive,
            ExtReal::Finite(v) if v < -eps_used => Sign::Negative,
            ExtReal::Finite(_) if converged => Sign::Zero,
            ExtReal::Finite(_) => Sign::Inconclusive,
        };
        Ok(DerivEstimate { order, value, shell_minima, converged, sign, eps_used, t_floor })
    }

    /// The value with zero-sign estimates snapped to exactly `0`.
    pub fn snapped(&self) -> ExtReal {
        if self.sign == Sign::Zero {
            ExtReal::ZERO
        } else {
            self.value
        }
    }
}

fn base_value(f: &FunctionSpec, x: &[f64]) -> Result<f64> {
    f.evaluate(x)?.finite().ok_or(Error::BaseOutsideDomain)
}

fn check_direction(f: &FunctionSpec, u: &[f64]) -> Result<()> {
    f.check_point(u)
}

fn check_chain(f: &FunctionSpec, chain: &MultiplierChain) -> Result<()> {
    match chain.dim() {
        Some(d) if d != f.dim() => Err(Error::DimensionMismatch { expected: f.dim(), got: d }),
        _ => Ok(()),
    }
}

fn step(x: &[f64], t: f64, u: &[f64]) -> Vec<f64> {
    x.iter().zip(u).map(|(a, b)| a + t * b).collect()
}

/// `(y - x) / t`: the direction actually realised by the rounded point `y`.
fn realised(x: &[f64], y: &[f64], t: f64) -> Vec<f64> {
    y.iter().zip(x).map(|(a, b)| (a - b) / t).collect()
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt()
}

/// Quotient for a finite value `f(y)` at step `t` along realised direction `u''`.
type QuotientFn<'a> = dyn Fn(f64, f64, &[f64]) -> f64 + Sync + 'a;

#[derive(Clone, Copy)]
enum Sampling {
    /// `u' = u` only.
    Fixed,
    /// Ball around `u`, plus spike-hint points.
    Ball { dense: bool },
}

fn sample(f: &FunctionSpec, y: &[f64], quotient: impl FnOnce(f64) -> f64) -> Result<ExtReal> {
    match f.evaluate(y)? {
        ExtReal::Finite(v) => ExtReal::from_f64(quotient(v)),
        other => Ok(other),
    }
}

fn shell_min(
    f: &FunctionSpec,
    x: &[f64],
    u: &[f64],
    sched: &LiminfSchedule,
    shell: Shell,
    mode: Sampling,
    q: &QuotientFn<'_>,
) -> Result<ExtReal> {
    let Shell { t, radius } = shell;
    let mut best = ExtReal::PosInf;
    let mut eval = |y: Vec<f64>| -> Result<()> {
        let upp = realised(x, &y, t);
        let v = sample(f, &y, |fy| q(fy, t, &upp))?;
        best = best.min(v);
        Ok(())
    };
    match mode {
        Sampling::Fixed => eval(step(x, t, u))?,
        Sampling::Ball { dense } => {
            for up in ball_directions(u, radius, sched.directions_per_shell(f.dim()), sched.seed, dense) {
                eval(step(x, t, &up))?;
            }
            if let Some(h) = f.hint() {
                for y in h.points_near(&step(x, t, u)) {
                    if y.len() == x.len() && distance(&realised(x, &y, t), u) <= radius {
                        eval(y)?;
                    }
                }
            }
        }
    }
    Ok(best)
}

fn run(
    f: &FunctionSpec,
    x: &[f64],
    u: &[f64],
    sched: &LiminfSchedule,
    order: usize,
    magnitudes: &[f64],
    mode: Sampling,
    q: &QuotientFn<'_>,
) -> Result<DerivEstimate> {
    sched.validate()?;
    let shells = sched.steps(order, magnitudes);
    let minima = shells.par_iter().map(|&s| shell_min(f, x, u, sched, s, mode, q)).collect::<Result<Vec<_>>>()?;
    let t_floor = shells.last().map(|s| s.t).unwrap_or(0.0);
    DerivEstimate::from_minima(order, minima, sched.tail, t_floor)
}

/// `scale · t^{-n} · [f(x + t u'') - f(x) - Σ t^i/i! x_i*(u'')^i]`.
fn chain_quotient<'a>(fx: f64, chain: &'a MultiplierChain, scale: f64) -> impl Fn(f64, f64, &[f64]) -> f64 + Sync + 'a {
    let n = chain.order() as i32;
    move |fy, t, upp| (fy - fx - chain.taylor_sum(t, upp)) / t.powi(n) * scale
}

/// The Hadamard quotient `Δ_n` at a single `(t, u')`.
pub fn delta_n(f: &FunctionSpec, x: &[f64], chain: &MultiplierChain, t: f64, u_prime: &[f64]) -> Result<ExtReal> {
    check_chain(f, chain)?;
    check_direction(f, u_prime)?;
    let fx = base_value(f, x)?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidSchedule(format!("step must be positive and finite, got {t}")));
    }
    let q = chain_quotient(fx, chain, factorial(chain.order()));
    let y = step(x, t, u_prime);
    let upp = realised(x, &y, t);
    sample(f, &y, |fy| q(fy, t, &upp))
}

/// Lower Hadamard derivative of order `chain.order()` in direction `u`.
pub fn hadamard_deriv(
    f: &FunctionSpec,
    x: &[f64],
    chain: &MultiplierChain,
    u: &[f64],
    sched: &LiminfSchedule,
) -> Result<DerivEstimate> {
    hadamard_scan(f, x, chain, u, sched, factorial(chain.order()), false)
}

/// Order-`n` Hadamard derivative with the all-zero chain.
pub fn hadamard_zero(
    f: &FunctionSpec,
    x: &[f64],
    n: usize,
    u: &[f64],
    sched: &LiminfSchedule,
) -> Result<DerivEstimate> {
    hadamard_deriv(f, x, &MultiplierChain::zero(n)?, u, sched)
}

fn hadamard_scan(
    f: &FunctionSpec,
    x: &[f64],
    chain: &MultiplierChain,
    u: &[f64],
    sched: &LiminfSchedule,
    scale: f64,
    dense: bool,
) -> Result<DerivEstimate> {
    check_chain(f, chain)?;
    check_direction(f, u)?;
    let fx = base_value(f, x)?;
    let mut mags = vec![fx.abs()];
    mags.extend(chain.magnitudes(u));
    let q = chain_quotient(fx, chain, scale);
    run(f, x, u, sched, chain.order(), &mags, Sampling::Ball { dense }, &q)
}

/// Studniarski derivative `liminf t^{-n}[f(x + t u') - f(x)]`; samples the
/// same points as [`hadamard_zero`], so the two differ by exactly `n!`.
pub fn studniarski_deriv(
    f: &FunctionSpec,
    x: &[f64],
    n: usize,
    u: &[f64],
    sched: &LiminfSchedule,
) -> Result<DerivEstimate> {
    hadamard_scan(f, x, &MultiplierChain::zero(n)?, u, sched, 1.0, false)
}

/// Reference value from a much denser fixed grid: the shells of `fine` are
/// each split ten ways and twenty times as many directions are drawn (a dense
/// lattice in one dimension). The sample set contains the one used by
/// [`hadamard_deriv`] with the same schedule, so the result is never larger.
pub fn brute_liminf(
    f: &FunctionSpec,
    x: &[f64],
    chain: &MultiplierChain,
    u: &[f64],
    fine: &LiminfSchedule,
) -> Result<ExtReal> {
    let dense = fine.refined(10, 20);
    Ok(hadamard_scan(f, x, chain, u, &dense, factorial(chain.order()), true)?.value)
}

/// Unit directions used for Demyanov sampling at `x`: the sphere sample plus
/// spike-hint directions.
pub fn demyanov_directions(f: &FunctionSpec, x: &[f64], sched: &LiminfSchedule) -> Vec<Vec<f64>> {
    let base = sphere_directions(f.dim(), sched.directions_per_shell(f.dim()), sched.seed);
    match f.hint() {
        Some(h) => merge_directions(base, h.directions(x)),
        None => base,
    }
}

/// Demyanov derivative `liminf_{y→x} (f(y) - f(x)) / |y - x|^n`.
pub fn demyanov_deriv(f: &FunctionSpec, x: &[f64], n: usize, sched: &LiminfSchedule) -> Result<DerivEstimate> {
    if n == 0 {
        return Err(Error::OrderTooSmall { min: 1, got: 0 });
    }
    sched.validate()?;
    let fx = base_value(f, x)?;
    let dirs = demyanov_directions(f, x, sched);
    let shells = sched.steps(n, &[fx.abs()]);
    let hint = f.hint();
    let minima = shells
        .par_iter()
        .map(|&Shell { t, radius }| {
            let mut best = ExtReal::PosInf;
            let mut eval = |y: &[f64]| -> Result<()> {
                let r = distance(y, x);
                if r > 0.0 {
                    best = best.min(sample(f, y, |fy| (fy - fx) / r.powi(n as i32))?);
                }
                Ok(())
            };
            for w in &dirs {
                let y = step(x, t, w);
                eval(&y)?;
                if let Some(h) = hint {
                    // only spike points in this shell's ball keep |y - x| ~ t
                    for z in h.points_near(&y) {
                        if z.len() == x.len() && distance(&z, &y) <= radius * t {
                            eval(&z)?;
                        }
                    }
                }
            }
            Ok(best)
        })
        .collect::<Result<Vec<_>>>()?;
    let t_floor = shells.last().map(|s| s.t).unwrap_or(0.0);
    DerivEstimate::from_minima(n, minima, sched.tail, t_floor)
}

/// Dini derivatives of orders `1..=max_n` along the fixed direction `u`.
///
/// Stops after the first infinite value, since higher orders are undefined;
/// lower-order values with sign zero enter the bracket as exactly `0`.
pub fn dini_series(
    f: &FunctionSpec,
    x: &[f64],
    max_n: usize,
    u: &[f64],
    sched: &LiminfSchedule,
) -> Result<Vec<DerivEstimate>> {
    check_direction(f, u)?;
    let fx = base_value(f, x)?;
    let mut out: Vec<DerivEstimate> = Vec::with_capacity(max_n);
    for n in 1..=max_n {
        if out.last().is_some_and(|e| !e.value.is_finite()) {
            break;
        }
        let lower: Vec<f64> = out.iter().map(|e| e.snapped().to_f64()).collect();
        let mut mags = vec![fx.abs()];
        mags.extend(lower.iter().enumerate().map(|(k, d)| d.abs() / factorial(k + 1)));
        let scale = factorial(n);
        let q = |fy: f64, t: f64, _: &[f64]| {
            let taylor: f64 = lower.iter().enumerate().map(|(k, d)| t.powi(k as i32 + 1) / factorial(k + 1) * d).sum();
            (fy - fx - taylor) / t.powi(n as i32) * scale
        };
        out.push(run(f, x, u, sched, n, &mags, Sampling::Fixed, &q)?);
    }
    Ok(out)
}

/// Dini derivative of order `n >= 1`.
pub fn dini_deriv(f: &FunctionSpec, x: &[f64], n: usize, u: &[f64], sched: &LiminfSchedule) -> Result<DerivEstimate> {
    if n == 0 {
        return Err(Error::OrderTooSmall { min: 1, got: 0 });
    }
    let mut s = dini_series(f, x, n, u, sched)?;
    if s.len() < n {
        return Err(Error::DiniUndefined(n));
    }
    Ok(s.pop().expect("non-empty series"))
}

/// Ginchev derivatives of orders `0..=max_n`; stops after the first infinite value.
///
/// The order-0 value is snapped to `f(x)` when it agrees within the sign
/// tolerance (lower semicontinuity), and later values with sign zero to `0`.
pub fn ginchev_series(
    f: &FunctionSpec,
    x: &[f64],
    max_n: usize,
    u: &[f64],
    sched: &LiminfSchedule,
) -> Result<Vec<DerivEstimate>> {
    check_direction(f, u)?;
    let fx = base_value(f, x)?;
    let mut out: Vec<DerivEstimate> = Vec::with_capacity(max_n + 1);
    let ident = |fy: f64, _: f64, _: &[f64]| fy;
    out.push(run(f, x, u, sched, 0, &[], Sampling::Ball { dense: false }, &ident)?);
    for n in 1..=max_n {
        if out.last().is_some_and(|e| !e.value.is_finite()) {
            break;
        }
        let g0 = ginchev_base(&out[0], fx).to_f64();
        let lower: Vec<f64> = out[1..].iter().map(|e| e.snapped().to_f64()).collect();
        let mut mags = vec![g0.abs()];
        mags.extend(lower.iter().enumerate().map(|(k, g)| g.abs() / factorial(k + 1)));
        let scale = factorial(n);
        let q = |fy: f64, t: f64, _: &[f64]| {
            let taylor: f64 = lower.iter().enumerate().map(|(k, g)| t.powi(k as i32 + 1) / factorial(k + 1) * g).sum();
            (fy - g0 - taylor) / t.powi(n as i32) * scale
        };
        out.push(run(f, x, u, sched, n, &mags, Sampling::Ball { dense: false }, &q)?);
    }
    Ok(out)
}

/// Order-0 Ginchev value with the lower-semicontinuity snap applied.
pub fn ginchev_base(g0: &DerivEstimate, fx: f64) -> ExtReal {
    match g0.value {
        ExtReal::Finite(v) if g0.converged && (v - fx).abs() <= SIGN_TOL * (1.0 + fx.abs()) => ExtReal::Finite(fx),
        v => v,
    }
}

/// Ginchev derivative of order `n >= 0`.
pub fn ginchev_deriv(
    f: &FunctionSpec,
    x: &[f64],
    n: usize,
    u: &[f64],
    sched: &LiminfSchedule,
) -> Result<DerivEstimate> {
    let mut s = ginchev_series(f, x, n, u, sched)?;
    if s.len() < n + 1 {
        return Err(Error::GinchevUndefined(n));
    }
    Ok(s.pop().expect("non-empty series"))
}
