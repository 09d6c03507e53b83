//! Classification of a point from its derivative estimates: stationarity
//! order, critical directions, necessary and sufficient minimality
//! conditions, isolation order and the four-family condition table.
//!
//! Each public function builds its own [`Probe`]; the `*_with` variants take
//! an existing probe so a full report shares one set of estimates.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::deriv::{ginchev_base, DerivEstimate, LiminfSchedule, Sign};
use crate::error::{Error, Result};
use crate::extreal::{ext_min, ExtReal};
use crate::funcspec::FunctionSpec;
use crate::probe::Probe;
use crate::subdiff::{TriState, Verdict};

/// Outcome of the stationarity scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stationarity {
    /// Largest order through which `0` is certainly in every subdifferential.
    pub order: usize,
    /// The scan stopped at an order that could not be decided.
    pub inconclusive: bool,
    /// First order that certainly fails.
    pub failed_order: Option<usize>,
    pub witness: Option<Vec<f64>>,
}

pub fn stationary_order_with(probe: &Probe<'_>, max_n: usize) -> Result<Stationarity> {
    let mut s = Stationarity { order: 0, inconclusive: false, failed_order: None, witness: None };
    for k in 1..=max_n.min(probe.max_order()) {
        let t = probe.zero_level(k)?;
        match t.verdict {
            Verdict::Holds => s.order = k,
            Verdict::Fails => {
                s.failed_order = Some(k);
                s.witness = t.witness;
                break;
            }
            Verdict::Inconclusive => {
                s.inconclusive = true;
                break;
            }
        }
    }
    Ok(s)
}

/// Largest `n <= max_n` such that `x` is stationary of every order up to `n`.
pub fn stationary_order(
    f: &FunctionSpec,
    x: &[f64],
    max_n: usize,
    sched: &LiminfSchedule,
    sphere_samples: usize,
) -> Result<Stationarity> {
    stationary_order_with(&Probe::new(f, x, max_n, sched, sphere_samples)?, max_n)
}

/// Indices of sampled directions along which every derivative of order `<= m`
/// is certainly non-positive.
fn critical_indices(probe: &Probe<'_>, m: usize) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    'dirs: for i in 0..probe.directions().len() {
        for k in 1..=m {
            if !probe.hadamard(i, k)?.sign.is_nonpositive() {
                continue 'dirs;
            }
        }
        out.push(i);
    }
    Ok(out)
}

pub fn critical_directions_with(probe: &Probe<'_>, m: usize) -> Result<Vec<Vec<f64>>> {
    if m == 0 {
        return Err(Error::OrderTooSmall { min: 1, got: 0 });
    }
    if m > 1 {
        let s = stationary_order_with(probe, m - 1)?;
        if s.order < m - 1 {
            return Err(Error::Precondition(format!(
                "critical directions of order {m} need stationarity of order {}, established only through {}",
                m - 1,
                s.order
            )));
        }
    }
    Ok(critical_indices(probe, m)?.into_iter().map(|i| probe.directions()[i].clone()).collect())
}

/// Sampled critical directions of order `m`.
pub fn critical_directions(
    f: &FunctionSpec,
    x: &[f64],
    m: usize,
    sched: &LiminfSchedule,
    sphere_samples: usize,
) -> Result<Vec<Vec<f64>>> {
    critical_directions_with(&Probe::new(f, x, m, sched, sphere_samples)?, m)
}

pub fn check_necessary_with(probe: &Probe<'_>, max_n: usize) -> Result<TriState> {
    let s = stationary_order_with(probe, max_n)?;
    let n_dirs = probe.directions().len();
    Ok(if s.order == max_n {
        TriState::new(Verdict::Holds, max_n, ExtReal::ZERO, n_dirs)
    } else if let Some(k) = s.failed_order {
        let margin = probe.zero_level(k)?.margin;
        TriState::new(Verdict::Fails, k, margin, n_dirs).with_witness(s.witness.expect("failure carries a witness"))
    } else {
        TriState::new(Verdict::Inconclusive, s.order + 1, ExtReal::ZERO, n_dirs)
    })
}

/// Necessary conditions for a local minimum: `0` in the subdifferentials of
/// orders `1..=max_n` (zero chains).
pub fn check_necessary(
    f: &FunctionSpec,
    x: &[f64],
    max_n: usize,
    sched: &LiminfSchedule,
    sphere_samples: usize,
) -> Result<TriState> {
    check_necessary_with(&Probe::new(f, x, max_n, sched, sphere_samples)?, max_n)
}

/// Per-direction order `n(u)` found by the sufficiency check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionOrder {
    pub direction: Vec<f64>,
    pub order: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrictSufficient {
    pub verdict: TriState,
    pub n_u: Vec<DirectionOrder>,
}

pub fn check_strict_sufficient_with(probe: &Probe<'_>, max_n: usize) -> Result<StrictSufficient> {
    let s = stationary_order_with(probe, max_n)?;
    let limit = max_n.min(s.order + 1);
    let mut n_u = Vec::with_capacity(probe.directions().len());
    let mut margin = ExtReal::PosInf;
    let mut failed: Option<(usize, Vec<f64>)> = None;
    let mut unsure = false;
    for (i, u) in probe.directions().iter().enumerate() {
        let mut found = None;
        for k in 1..=limit {
            let e = probe.hadamard(i, k)?;
            if e.sign == Sign::Positive {
                found = Some(k);
                margin = margin.min(e.value);
                break;
            }
        }
        if found.is_none() {
            // either the orders ran out or stationarity broke down first
            if s.failed_order.is_some() && s.order < max_n {
                if failed.is_none() {
                    failed = Some((s.order + 1, u.clone()));
                }
            } else {
                unsure = true;
            }
        }
        n_u.push(DirectionOrder { direction: u.clone(), order: found });
    }
    let checked = probe.directions().len();
    let verdict = match failed {
        Some((k, w)) => TriState::new(Verdict::Fails, k, margin, checked).with_witness(w),
        None if unsure => TriState::new(Verdict::Inconclusive, limit, margin, checked),
        None => TriState::new(Verdict::Holds, n_u.iter().filter_map(|d| d.order).max().unwrap_or(1), margin, checked),
    };
    Ok(StrictSufficient { verdict, n_u })
}

/// Sufficient condition for a strict local minimum: every sampled direction
/// has some order `n(u) <= max_n` with `0` in all lower subdifferentials and a
/// positive derivative of order `n(u)`.
pub fn check_strict_sufficient(
    f: &FunctionSpec,
    x: &[f64],
    max_n: usize,
    sched: &LiminfSchedule,
    sphere_samples: usize,
) -> Result<StrictSufficient> {
    check_strict_sufficient_with(&Probe::new(f, x, max_n, sched, sphere_samples)?, max_n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IsolationMode {
    /// Positive order-`n` derivative in every sampled direction.
    FullSphere,
    /// Positive order-`n` derivative along critical directions of the given order.
    CriticalOnly { critical_order: usize },
}

impl IsolationMode {
    pub fn critical(n: usize) -> Self {
        IsolationMode::CriticalOnly { critical_order: n }
    }
}

pub fn check_isolated_with(probe: &Probe<'_>, n: usize, mode: IsolationMode) -> Result<TriState> {
    if n == 0 {
        return Err(Error::OrderTooSmall { min: 1, got: 0 });
    }
    for k in 1..n {
        let t = probe.zero_level(k)?;
        if t.verdict != Verdict::Holds {
            return Ok(t);
        }
    }
    let dirs: Vec<usize> = match mode {
        IsolationMode::FullSphere => (0..probe.directions().len()).collect(),
        IsolationMode::CriticalOnly { critical_order } => {
            // undecided directions are kept: they might be critical
            let mut out = Vec::new();
            'dirs: for i in 0..probe.directions().len() {
                for k in 1..=critical_order {
                    if matches!(probe.hadamard(i, k)?.sign, Sign::Positive) {
                        continue 'dirs;
                    }
                }
                out.push(i);
            }
            out
        }
    };
    let mut margin = ExtReal::PosInf;
    let mut unsure = false;
    for (c, &i) in dirs.iter().enumerate() {
        let e = probe.hadamard(i, n)?;
        margin = margin.min(e.value);
        match e.sign {
            Sign::Positive => {}
            Sign::Inconclusive => unsure = true,
            Sign::Zero | Sign::Negative => {
                return Ok(TriState::new(Verdict::Fails, n, margin, c + 1).with_witness(probe.directions()[i].clone()))
            }
        }
    }
    let verdict = if unsure { Verdict::Inconclusive } else { Verdict::Holds };
    Ok(TriState::new(verdict, n, margin, dirs.len()))
}

/// Whether `x` is an isolated local minimiser of order `n`, judged through
/// stationarity of orders `< n` and positivity of the order-`n` derivative.
pub fn check_isolated(
    f: &FunctionSpec,
    x: &[f64],
    n: usize,
    sched: &LiminfSchedule,
    sphere_samples: usize,
    mode: IsolationMode,
) -> Result<TriState> {
    let top = match mode {
        IsolationMode::FullSphere => n,
        IsolationMode::CriticalOnly { critical_order } => n.max(critical_order),
    };
    check_isolated_with(&Probe::new(f, x, top, sched, sphere_samples)?, n, mode)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LeastStatus {
    /// A positive Demyanov value was found after zero lower orders.
    Found,
    /// All orders up to the cap are zero.
    NoneUpToCap,
    /// Some Demyanov value is negative: not a local minimiser.
    NotCandidate,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeastIsolated {
    pub order: Option<usize>,
    pub status: LeastStatus,
    /// Demyanov values of orders `1..` as far as the scan went.
    pub demyanov: Vec<DerivEstimate>,
}

pub fn least_isolated_order_with(probe: &Probe<'_>, max_n: usize) -> Result<LeastIsolated> {
    let mut table = Vec::new();
    let mut status = LeastStatus::NoneUpToCap;
    let mut order = None;
    for k in 1..=max_n.min(probe.max_order()) {
        let e = probe.demyanov(k)?.clone();
        let sign = e.sign;
        table.push(e);
        match sign {
            Sign::Zero => continue,
            Sign::Positive => {
                order = Some(k);
                status = LeastStatus::Found;
            }
            Sign::Negative => status = LeastStatus::NotCandidate,
            Sign::Inconclusive => status = LeastStatus::Inconclusive,
        }
        break;
    }
    Ok(LeastIsolated { order, status, demyanov: table })
}

/// Least `n` with `f↓_k(x) = 0` for `k < n` and `f↓_n(x) > 0`.
pub fn least_isolated_order(
    f: &FunctionSpec,
    x: &[f64],
    max_n: usize,
    sched: &LiminfSchedule,
) -> Result<LeastIsolated> {
    least_isolated_order_with(&Probe::with_directions(f, x, max_n, sched, vec![vec![0.0; f.dim()]])?, max_n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellStatus {
    Holds,
    Fails,
    Inconclusive,
    Undefined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub status: CellStatus,
    pub witness: Option<Vec<f64>>,
}

impl Condition {
    fn new(status: CellStatus) -> Self {
        Condition { status, witness: None }
    }

    fn failing(w: &[f64]) -> Self {
        Condition { status: CellStatus::Fails, witness: Some(w.to_vec()) }
    }
}

/// Conditions `D` (Dini), `N` (necessary, Hadamard), `S` (sufficient) and
/// `G` (Ginchev) for orders `1..=max_order`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionTable {
    pub max_order: usize,
    pub rows: BTreeMap<String, BTreeMap<usize, Condition>>,
}

impl ConditionTable {
    pub fn get(&self, family: &str, k: usize) -> Option<&Condition> {
        self.rows.get(family).and_then(|r| r.get(&k))
    }

    pub fn status(&self, family: &str, k: usize) -> Option<CellStatus> {
        self.get(family, k).map(|c| c.status)
    }
}

/// Accumulates per-direction outcomes into one cell.
#[derive(Default)]
struct Tally {
    witness: Option<Vec<f64>>,
    unsure: bool,
}

impl Tally {
    fn fail(&mut self, u: &[f64]) {
        if self.witness.is_none() {
            self.witness = Some(u.to_vec());
        }
    }

    fn finish(self) -> Condition {
        match self.witness {
            Some(w) => Condition::failing(&w),
            None if self.unsure => Condition::new(CellStatus::Inconclusive),
            None => Condition::new(CellStatus::Holds),
        }
    }
}

fn dini_condition(probe: &Probe<'_>, k: usize) -> Result<Condition> {
    let mut tally = Tally::default();
    for (i, u) in probe.directions().iter().enumerate() {
        let series = probe.dini(i)?;
        if series.len() < k {
            continue; // an infinite lower order: the premise is false
        }
        let lower = &series[..k - 1];
        if lower.iter().any(|e| matches!(e.sign, Sign::Positive | Sign::Negative)) {
            continue;
        }
        let certain = lower.iter().all(|e| e.sign == Sign::Zero);
        match series[k - 1].sign {
            Sign::Negative if certain => tally.fail(u),
            Sign::Negative | Sign::Inconclusive => tally.unsure = true,
            _ => {}
        }
    }
    Ok(tally.finish())
}

fn necessary_condition(probe: &Probe<'_>, k: usize, lower: &[Condition]) -> Result<Condition> {
    if lower.iter().any(|c| c.status == CellStatus::Fails) {
        return Ok(Condition::new(CellStatus::Undefined));
    }
    let t = probe.zero_level(k)?;
    Ok(match t.verdict {
        Verdict::Fails => Condition::failing(&t.witness.expect("failure carries a witness")),
        Verdict::Inconclusive => Condition::new(CellStatus::Inconclusive),
        Verdict::Holds if lower.iter().any(|c| c.status != CellStatus::Holds) => {
            Condition::new(CellStatus::Inconclusive)
        }
        Verdict::Holds => Condition::new(CellStatus::Holds),
    })
}

fn sufficient_condition(probe: &Probe<'_>, k: usize, necessary: &[Condition]) -> Result<Condition> {
    if let Some(c) = necessary[..k - 1].iter().find(|c| c.status != CellStatus::Holds) {
        return Ok(match c.status {
            CellStatus::Fails => Condition::failing(c.witness.as_deref().unwrap_or_default()),
            _ => Condition::new(CellStatus::Inconclusive),
        });
    }
    let mut tally = Tally::default();
    for (i, u) in probe.directions().iter().enumerate() {
        match probe.hadamard(i, k)?.sign {
            Sign::Positive => {}
            Sign::Inconclusive => tally.unsure = true,
            Sign::Zero | Sign::Negative => tally.fail(u),
        }
    }
    Ok(tally.finish())
}

/// Whether direction `u` satisfies one of the Ginchev conditions of order `<= k`:
/// `Some(true)`/`Some(false)` when decided, `None` when an estimate is undecided.
fn ginchev_satisfied(series: &[DerivEstimate], fx: f64, k: usize) -> Option<bool> {
    let g0 = ginchev_base(&series[0], fx);
    let tol = 1e-5 * (1.0 + fx.abs());
    if g0 > ExtReal::Finite(fx + tol) {
        return Some(true);
    }
    if g0 != ExtReal::Finite(fx) {
        return if g0 < ExtReal::Finite(fx - tol) { Some(false) } else { None };
    }
    for e in series.iter().skip(1).take(k) {
        match e.sign {
            Sign::Positive => return Some(true),
            Sign::Zero => continue,
            Sign::Negative => return Some(false),
            Sign::Inconclusive => return None,
        }
    }
    Some(false)
}

fn ginchev_condition(probe: &Probe<'_>, k: usize) -> Result<Condition> {
    let mut tally = Tally::default();
    for (i, u) in probe.directions().iter().enumerate() {
        match ginchev_satisfied(probe.ginchev(i)?, probe.value(), k) {
            Some(true) => {}
            Some(false) => tally.fail(u),
            None => tally.unsure = true,
        }
    }
    Ok(tally.finish())
}

pub fn condition_table_with(probe: &Probe<'_>, max_n: usize) -> Result<ConditionTable> {
    let max_n = max_n.min(probe.max_order());
    let mut d = BTreeMap::new();
    let mut g = BTreeMap::new();
    let mut s = BTreeMap::new();
    let mut nec: Vec<Condition> = Vec::with_capacity(max_n);
    for k in 1..=max_n {
        d.insert(k, dini_condition(probe, k)?);
        let c = necessary_condition(probe, k, &nec)?;
        nec.push(c);
        s.insert(k, sufficient_condition(probe, k, &nec)?);
        g.insert(k, ginchev_condition(probe, k)?);
    }
    let n: BTreeMap<usize, Condition> = nec.into_iter().enumerate().map(|(i, c)| (i + 1, c)).collect();
    let rows = [("D", d), ("N", n), ("S", s), ("G", g)].into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    Ok(ConditionTable { max_order: max_n, rows })
}

pub fn condition_table(
    f: &FunctionSpec,
    x: &[f64],
    max_n: usize,
    sched: &LiminfSchedule,
    sphere_samples: usize,
) -> Result<ConditionTable> {
    condition_table_with(&Probe::new(f, x, max_n, sched, sphere_samples)?, max_n)
}

/// One entry of a derivative table: the smallest estimate over the sampled
/// directions, with its sign and the direction attaining it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableCell {
    pub value: Option<ExtReal>,
    pub sign: Option<Sign>,
    pub direction: Option<Vec<f64>>,
}

impl TableCell {
    fn from_estimates<'a>(items: impl IntoIterator<Item = (&'a DerivEstimate, Option<&'a Vec<f64>>)>) -> Self {
        let mut best: Option<(&DerivEstimate, Option<&Vec<f64>>)> = None;
        for (e, u) in items {
            if best.is_none_or(|(b, _)| e.value < b.value) {
                best = Some((e, u));
            }
        }
        match best {
            Some((e, u)) => TableCell { value: Some(e.value), sign: Some(e.sign), direction: u.cloned() },
            None => TableCell { value: None, sign: None, direction: None },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdicts {
    pub necessary: TriState,
    pub strict_sufficient: StrictSufficient,
    pub isolated: BTreeMap<usize, TriState>,
    pub least_isolated_order: LeastIsolated,
    pub demyanov_values: BTreeMap<usize, ExtReal>,
}

impl Verdicts {
    /// Whether any verdict is undecided.
    pub fn any_inconclusive(&self) -> bool {
        self.necessary.verdict == Verdict::Inconclusive
            || self.strict_sufficient.verdict.verdict == Verdict::Inconclusive
            || self.isolated.values().any(|t| t.verdict == Verdict::Inconclusive)
            || self.least_isolated_order.status == LeastStatus::Inconclusive
    }
}

/// Full classification record for one point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointReport {
    pub point: Vec<f64>,
    pub schedule: LiminfSchedule,
    pub seed: u64,
    pub sphere_samples: usize,
    pub max_order: usize,
    pub tables: BTreeMap<String, BTreeMap<usize, TableCell>>,
    pub stationary_order: usize,
    pub stationary_inconclusive: bool,
    pub critical_dirs: BTreeMap<usize, Vec<Vec<f64>>>,
    pub verdicts: Verdicts,
}

pub fn analyze_with(probe: &Probe<'_>, sphere_samples: usize) -> Result<PointReport> {
    let max_n = probe.max_order();
    let dirs = probe.directions();
    let mut tables: BTreeMap<String, BTreeMap<usize, TableCell>> = BTreeMap::new();
    for k in 1..=max_n {
        let had =
            (0..dirs.len()).map(|i| probe.hadamard(i, k).map(|e| (e, Some(&dirs[i])))).collect::<Result<Vec<_>>>()?;
        let stud: Vec<DerivEstimate> = had
            .iter()
            .map(|(e, _)| {
                let scale = crate::deriv::tensor::factorial(k);
                let value = match e.value {
                    ExtReal::Finite(v) => ExtReal::Finite(v / scale),
                    inf => inf,
                };
                DerivEstimate { value, eps_used: e.eps_used / scale, ..(*e).clone() }
            })
            .collect();
        let mut dini = Vec::new();
        let mut ginchev = Vec::new();
        for (i, u) in dirs.iter().enumerate() {
            if let Some(e) = probe.dini(i)?.get(k - 1) {
                dini.push((e, Some(u)));
            }
            if let Some(e) = probe.ginchev(i)?.get(k) {
                ginchev.push((e, Some(u)));
            }
        }
        let dem = probe.demyanov(k)?;
        tables.entry("hadamard".into()).or_default().insert(k, TableCell::from_estimates(had.iter().copied()));
        tables
            .entry("studniarski".into())
            .or_default()
            .insert(k, TableCell::from_estimates(stud.iter().zip(dirs).map(|(e, u)| (e, Some(u)))));
        tables.entry("dini".into()).or_default().insert(k, TableCell::from_estimates(dini));
        tables.entry("ginchev".into()).or_default().insert(k, TableCell::from_estimates(ginchev));
        tables.entry("demyanov".into()).or_default().insert(k, TableCell::from_estimates([(dem, None)]));
    }
    let st = stationary_order_with(probe, max_n)?;
    let mut critical_dirs = BTreeMap::new();
    for m in 1..=max_n.min(st.order + 1) {
        critical_dirs.insert(m, critical_directions_with(probe, m)?);
    }
    let isolated = (1..=max_n)
        .map(|n| check_isolated_with(probe, n, IsolationMode::FullSphere).map(|t| (n, t)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let least = least_isolated_order_with(probe, max_n)?;
    let demyanov_values = (1..=max_n).map(|k| probe.demyanov(k).map(|e| (k, e.value))).collect::<Result<_>>()?;
    Ok(PointReport {
        point: probe.point().to_vec(),
        schedule: probe.schedule().clone(),
        seed: probe.schedule().seed,
        sphere_samples,
        max_order: max_n,
        tables,
        stationary_order: st.order,
        stationary_inconclusive: st.inconclusive,
        critical_dirs,
        verdicts: Verdicts {
            necessary: check_necessary_with(probe, max_n)?,
            strict_sufficient: check_strict_sufficient_with(probe, max_n)?,
            isolated,
            least_isolated_order: least,
            demyanov_values,
        },
    })
}

/// Builds the full [`PointReport`] for `(f, x)`.
pub fn analyze(
    f: &FunctionSpec,
    x: &[f64],
    max_n: usize,
    sched: &LiminfSchedule,
    sphere_samples: usize,
) -> Result<PointReport> {
    analyze_with(&Probe::new(f, x, max_n, sched, sphere_samples)?, sphere_samples)
}

/// Smallest value of a list of estimates (helper for reports and tests).
pub fn min_value(estimates: &[DerivEstimate]) -> Result<ExtReal> {
    ext_min(estimates.iter().map(|e| e.value))
}
