//! Grid-scale check of invexity of order `n`: a function is invex of order
//! `n` exactly when each of its stationary points of order `n` is a global
//! minimiser. The scan can refute that on a box, or corroborate it.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::stationary_order_with;
use crate::deriv::LiminfSchedule;
use crate::error::{Error, Result};
use crate::extreal::ExtReal;
use crate::funcspec::CorpusEntry;
use crate::probe::Probe;
use crate::subdiff::{TriState, Verdict};

/// A grid node that is (or may be) stationary of the requested order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub point: Vec<f64>,
    pub stationary_order: usize,
    /// Stationarity could not be decided beyond `stationary_order`.
    pub undecided: bool,
    pub value: f64,
    /// `Holds` when the value is globally minimal.
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvexReport {
    pub name: String,
    pub order: usize,
    pub verdict: TriState,
    /// Minimum the candidates are compared against.
    pub reference_min: f64,
    /// `"label"` or `"grid"`.
    pub reference_source: String,
    pub grid: usize,
    pub bounds: Vec<(f64, f64)>,
    pub points_scanned: usize,
    pub candidates: Vec<Candidate>,
}

fn axis(lo: f64, hi: f64, g: usize) -> Vec<f64> {
    if g == 1 {
        return vec![0.5 * (lo + hi)];
    }
    (0..g).map(|i| lo + (hi - lo) * i as f64 / (g - 1) as f64).collect()
}

fn grid_points(bounds: &[(f64, f64)], g: usize) -> Vec<Vec<f64>> {
    let axes: Vec<Vec<f64>> = bounds.iter().map(|&(lo, hi)| axis(lo, hi, g)).collect();
    let mut pts = vec![Vec::new()];
    for a in &axes {
        pts = pts.into_iter().flat_map(|p| a.iter().map(move |&v| [p.clone(), vec![v]].concat())).collect();
    }
    pts
}

/// Scans a `grid^d` lattice of `bounds` for stationary points of order `n`
/// and compares their values with the global minimum (the entry's label when
/// present, the grid minimum otherwise).
pub fn check_invex_order(
    entry: &CorpusEntry,
    n: usize,
    bounds: &[(f64, f64)],
    grid: usize,
    sched: &LiminfSchedule,
    sphere_samples: usize,
) -> Result<InvexReport> {
    let f = &entry.spec;
    if grid == 0 {
        return Err(Error::EmptyGrid);
    }
    if n == 0 {
        return Err(Error::OrderTooSmall { min: 1, got: 0 });
    }
    if bounds.len() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), got: bounds.len() });
    }
    if let Some(&(lo, hi)) = bounds.iter().find(|&&(lo, hi)| !(lo.is_finite() && hi.is_finite() && lo < hi)) {
        return Err(Error::DegenerateBox(format!("[{lo}, {hi}]")));
    }
    sched.validate()?;
    let pts = grid_points(bounds, grid);
    let values = pts.par_iter().map(|p| f.evaluate(p)).collect::<Result<Vec<_>>>()?;
    let label_min = f.labels().and_then(|l| l.global_min_value);
    let grid_min = values.iter().filter_map(|v| v.finite()).fold(f64::INFINITY, f64::min);
    if !grid_min.is_finite() && label_min.is_none() {
        return Err(Error::EmptyDomain(entry.name.clone()));
    }
    let (reference_min, reference_source) = match label_min {
        Some(v) => (v, "label"),
        None => (grid_min, "grid"),
    };
    let tol = 1e-6 * (1.0 + reference_min.abs());
    let found = pts
        .par_iter()
        .zip(&values)
        .map(|(p, v)| -> Result<Option<Candidate>> {
            let ExtReal::Finite(value) = *v else { return Ok(None) };
            let probe = Probe::new(f, p, n, sched, sphere_samples)?;
            let st = stationary_order_with(&probe, n)?;
            if st.order < n && !st.inconclusive {
                return Ok(None);
            }
            let minimal = value <= reference_min + tol;
            let verdict = match (minimal, st.inconclusive) {
                (true, _) => Verdict::Holds,
                (false, false) => Verdict::Fails,
                (false, true) => Verdict::Inconclusive,
            };
            Ok(Some(Candidate {
                point: p.clone(),
                stationary_order: st.order,
                undecided: st.inconclusive,
                value,
                verdict,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    let candidates: Vec<Candidate> = found.into_iter().flatten().collect();
    let margin = candidates.iter().map(|c| ExtReal::Finite(reference_min - c.value)).min().unwrap_or(ExtReal::PosInf);
    let verdict = if let Some(c) = candidates.iter().find(|c| c.verdict == Verdict::Fails) {
        TriState::new(Verdict::Fails, n, margin, pts.len()).with_witness(c.point.clone())
    } else if candidates.iter().any(|c| c.verdict == Verdict::Inconclusive) {
        TriState::new(Verdict::Inconclusive, n, margin, pts.len())
    } else {
        TriState::new(Verdict::Holds, n, margin, pts.len())
    };
    Ok(InvexReport {
        name: entry.name.clone(),
        order: n,
        verdict,
        reference_min,
        reference_source: reference_source.to_string(),
        grid,
        bounds: bounds.to_vec(),
        points_scanned: pts.len(),
        candidates,
    })
}
