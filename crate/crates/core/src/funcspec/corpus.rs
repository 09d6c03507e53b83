//! Built-in test functions with ground-truth labels.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use crate::deriv::tensor::factorial;
use crate::error::{Error, Result};
use crate::extreal::ExtReal;

use super::expr::Expr;
use super::{ChainConvention, FunctionSpec, Labels, PolyTensorData, SpikeHint, StationaryLabel};

/// A point with its expected function value.
#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub point: Vec<f64>,
    pub value: ExtReal,
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub spec: FunctionSpec,
    pub provenance: String,
    pub checkpoints: Vec<Checkpoint>,
}

fn ipow(x: f64, n: usize) -> f64 {
    (0..n).fold(1.0, |acc, _| acc * x)
}

fn zero_at_origin(x: &[f64]) -> bool {
    x.iter().all(|&v| v == 0.0)
}

/// Spike set `{x2 = x1^2}`.
struct ParabolaHint;

impl SpikeHint for ParabolaHint {
    fn points_near(&self, target: &[f64]) -> Vec<Vec<f64>> {
        let s = target[0];
        let mut out = vec![vec![s, s * s]];
        if target[1] > 0.0 {
            let r = target[1].sqrt();
            out.push(vec![r, r * r]);
            out.push(vec![-r, r * r]);
        }
        out
    }

    fn directions(&self, x: &[f64]) -> Vec<Vec<f64>> {
        if x[1] == x[0] * x[0] {
            vec![vec![1.0, 2.0 * x[0]], vec![-1.0, -2.0 * x[0]]]
        } else {
            Vec::new()
        }
    }
}

/// Spike set `{x1 = x2^3}`, tangent to the `x2`-axis at the origin.
struct CuspHint;

impl SpikeHint for CuspHint {
    fn points_near(&self, target: &[f64]) -> Vec<Vec<f64>> {
        let s = target[1];
        let c = target[0].cbrt();
        vec![vec![s * s * s, s], vec![c * c * c, c]]
    }

    fn directions(&self, x: &[f64]) -> Vec<Vec<f64>> {
        if x[0] == x[1] * x[1] * x[1] {
            let slope = 3.0 * x[1] * x[1];
            vec![vec![slope, 1.0], vec![-slope, -1.0]]
        } else {
            Vec::new()
        }
    }
}

/// Value of a zero-chain derivative of order `k` when the quotient behaves like
/// `k!·t^{m-k}·g` with `g = coef` near the point.
fn blow_up(k: usize, m: usize, coef: f64) -> ExtReal {
    use std::cmp::Ordering::*;
    match k.cmp(&m) {
        Less => ExtReal::ZERO,
        Equal => ExtReal::Finite(factorial(m) * coef),
        Greater => match coef.partial_cmp(&0.0) {
            Some(Greater) => ExtReal::PosInf,
            Some(Less) => ExtReal::NegInf,
            _ => ExtReal::ZERO,
        },
    }
}

fn labels(point: Vec<f64>, probes: Vec<Vec<f64>>) -> Labels {
    Labels { probes, ..Labels::at(point) }
}

fn minimum(mut l: Labels, strict: bool, least: Option<usize>) -> Labels {
    l.local_min = true;
    l.strict_local_min = strict;
    l.global_min = true;
    l.global_min_value = Some(0.0);
    l.stationary_order = Some(StationaryLabel::Every);
    l.least_isolated_order = least;
    l.invex_from = Some(1);
    l
}

fn poly(dim: usize, terms: &[(f64, &[u32])]) -> PolyTensorData {
    PolyTensorData::new(dim, terms.iter().map(|(c, e)| (*c, e.to_vec())).collect()).expect("well-formed polynomial")
}

fn with_source(spec: FunctionSpec, src: &str) -> FunctionSpec {
    let e = Expr::parse(src, spec.dim()).expect("corpus expression parses");
    spec.with_source(e)
}

fn ex2() -> FunctionSpec {
    let f = FunctionSpec::from_fn(1, |x| if x[0] == 0.0 { 0.0 } else { -(-1.0 / (x[0] * x[0])).exp() }).unwrap();
    let mut l = labels(vec![0.0], vec![vec![0.5], vec![-1.0]]);
    l.global_max = true;
    l.stationary_order = Some(StationaryLabel::Every);
    with_source(f, "piecewise(x1 == 0, 0, -exp(-1/x1^2))")
        .with_oracle(|_, _, x, _| zero_at_origin(x).then_some(ExtReal::ZERO))
        .with_labels(l)
}

/// `x^n` for `x >= 0` and `(-1)^{n-1} x^n` for `x < 0`: increasing, with the
/// origin stationary of order exactly `n - 1`.
fn npc(n: usize) -> FunctionSpec {
    let odd = n % 2 == 1;
    let sign = if (n - 1).is_multiple_of(2) { 1.0 } else { -1.0 };
    let f = FunctionSpec::from_fn(1, move |x| {
        let p = ipow(x[0], n);
        if x[0] >= 0.0 {
            p
        } else {
            sign * p
        }
    })
    .unwrap();
    let mut l = labels(vec![0.0], vec![vec![0.5], vec![-0.75]]);
    l.stationary_order = Some(StationaryLabel::Exactly(n - 1));
    l.invex_from = Some(n);
    let src = format!("piecewise(x1 >= 0, x1^{n}, {}(x1^{n}))", if sign > 0.0 { "" } else { "-" });
    let f = with_source(f, &src).with_labels(l);
    if odd {
        // plain x^n: the polynomial oracle covers both chain conventions
        return f.with_poly(poly(1, &[(1.0, &[n as u32])]));
    }
    f.with_oracle(move |k, conv, x, u| {
        if x[0] != 0.0 || conv != ChainConvention::Zero {
            return None;
        }
        let g = if u[0] >= 0.0 { ipow(u[0], n) } else { -ipow(u[0], n) };
        Some(blow_up(k, n, g))
    })
}

fn exp_2d() -> FunctionSpec {
    let f = FunctionSpec::from_fn(2, |x| {
        let r2 = x[0] * x[0] + x[1] * x[1];
        if r2 == 0.0 {
            0.0
        } else {
            (-1.0 / r2).exp()
        }
    })
    .unwrap();
    let l = minimum(labels(vec![0.0, 0.0], vec![vec![0.5, 0.5], vec![1.0, -0.5]]), true, None);
    with_source(f, "piecewise(x1^2 + x2^2 == 0, 0, exp(-1/(x1^2 + x2^2)))")
        .with_oracle(|_, _, x, _| zero_at_origin(x).then_some(ExtReal::ZERO))
        .with_labels(l)
}

/// `-x2^n` on the parabola `x2 = x1^2`, zero elsewhere.
fn parabola_trap(n: usize) -> FunctionSpec {
    let f = FunctionSpec::from_fn(2, move |x| if x[1] == x[0] * x[0] { -ipow(x[1], n) } else { 0.0 }).unwrap();
    let l = labels(vec![0.0, 0.0], vec![vec![1.0, 1.0], vec![0.5, 0.0]]);
    // along the parabola f = -x1^{2n} and the chord direction tends to (±1, 0)
    with_source(f, &format!("piecewise(x2 == x1^2, -(x2^{n}), 0)"))
        .with_hint(ParabolaHint)
        .with_oracle(move |k, conv, x, u| {
            if !zero_at_origin(x) || conv != ChainConvention::Zero {
                return None;
            }
            let g = if u[1] == 0.0 { -ipow(u[0], 2 * n) } else { 0.0 };
            Some(blow_up(k, 2 * n, g))
        })
        .with_labels(l)
}

/// `-x2^n` on the cusp `x1 = x2^3`, zero elsewhere. Fixed-direction quotients
/// never see the cusp; joint limits along `u' -> (0, ±1)` do.
fn cusp_trap(n: usize) -> FunctionSpec {
    let f = FunctionSpec::from_fn(2, move |x| if x[0] == x[1] * x[1] * x[1] { -ipow(x[1], n) } else { 0.0 }).unwrap();
    let mut l = labels(vec![0.0, 0.0], vec![vec![1.0, 1.0], vec![0.3, -0.4]]);
    l.stationary_order = Some(StationaryLabel::Exactly(n - 1));
    with_source(f, &format!("piecewise(x1 == x2^3, -(x2^{n}), 0)"))
        .with_hint(CuspHint)
        .with_oracle(move |k, conv, x, u| {
            if !zero_at_origin(x) || conv != ChainConvention::Zero {
                return None;
            }
            let g = if u[0] == 0.0 { -ipow(u[1], n) } else { 0.0 };
            Some(blow_up(k, n, g))
        })
        .with_labels(l)
}

fn neg_sphere() -> FunctionSpec {
    let f = FunctionSpec::from_fn(2, |x| -x[0] * x[0] - x[1] * x[1]).unwrap();
    let mut l = labels(vec![0.0, 0.0], vec![vec![1.0, 0.5], vec![-0.3, 0.2]]);
    l.global_max = true;
    l.stationary_order = Some(StationaryLabel::Exactly(1));
    l.invex_from = Some(2);
    with_source(f, "-x1^2 - x2^2").with_poly(poly(2, &[(-1.0, &[2, 0]), (-1.0, &[0, 2])])).with_labels(l)
}

fn sq_norm() -> FunctionSpec {
    let f = FunctionSpec::from_fn(2, |x| x[0] * x[0] + x[1] * x[1]).unwrap();
    let l = minimum(labels(vec![0.0, 0.0], vec![vec![1.0, 0.5], vec![-0.3, 0.2]]), true, Some(2));
    with_source(f, "x1^2 + x2^2").with_poly(poly(2, &[(1.0, &[2, 0]), (1.0, &[0, 2])])).with_labels(l)
}

fn abs_1d() -> FunctionSpec {
    let f = FunctionSpec::from_fn(1, |x| x[0].abs()).unwrap();
    let l = minimum(labels(vec![0.0], vec![vec![0.5], vec![-1.0]]), true, Some(1));
    with_source(f, "abs(x1)")
        .with_oracle(|k, conv, x, u| {
            if x[0] != 0.0 || conv != ChainConvention::Zero {
                return None;
            }
            Some(blow_up(k, 1, u[0].abs()))
        })
        .with_labels(l)
}

fn quartic_1d() -> FunctionSpec {
    let f = FunctionSpec::from_fn(1, |x| ipow(x[0], 4)).unwrap();
    let l = minimum(labels(vec![0.0], vec![vec![0.5], vec![-1.0]]), true, Some(4));
    with_source(f, "x1^4").with_poly(poly(1, &[(1.0, &[4])])).with_labels(l)
}

fn mixed_24() -> FunctionSpec {
    let f = FunctionSpec::from_fn(2, |x| x[0] * x[0] + ipow(x[1], 4)).unwrap();
    let l = minimum(labels(vec![0.0, 0.0], vec![vec![0.5, 0.5], vec![-0.3, 0.2]]), true, Some(4));
    with_source(f, "x1^2 + x2^4").with_poly(poly(2, &[(1.0, &[2, 0]), (1.0, &[0, 4])])).with_labels(l)
}

/// `c·x` with `c = (1, -2)`.
fn linear_c() -> FunctionSpec {
    let f = FunctionSpec::from_fn(2, |x| x[0] - 2.0 * x[1]).unwrap();
    let mut l = labels(vec![0.0, 0.0], vec![vec![1.0, 1.0], vec![-0.5, 2.0]]);
    l.stationary_order = Some(StationaryLabel::Exactly(0));
    l.invex_from = Some(1);
    with_source(f, "x1 - 2*x2").with_poly(poly(2, &[(1.0, &[1, 0]), (-2.0, &[0, 1])])).with_labels(l)
}

fn indicator_halfline() -> FunctionSpec {
    let f = FunctionSpec::from_fn(1, |x| if x[0] >= 0.0 { 0.0 } else { f64::INFINITY }).unwrap();
    let mut l = minimum(labels(vec![0.0], vec![vec![1.0], vec![0.5]]), false, None);
    l.global_min_value = Some(0.0);
    with_source(f, "piecewise(x1 >= 0, 0, inf)")
        .with_oracle(|_, _, x, u| (x[0] == 0.0).then(|| if u[0] >= 0.0 { ExtReal::ZERO } else { ExtReal::PosInf }))
        .with_labels(l)
}

const MAX_PARAM: usize = 12;

fn parametric(name: &str) -> Option<(String, FunctionSpec)> {
    let (stem, n) = name.rsplit_once('-')?;
    let n: usize = n.parse().ok().filter(|n| (1..=MAX_PARAM).contains(n))?;
    let (spec, prov) = match stem {
        "npc" => {
            let neg = if n.is_multiple_of(2) { "-" } else { "" };
            (npc(n), format!("x^{n} for x >= 0, {neg}x^{n} for x < 0; origin stationary of order {}", n - 1))
        }
        "parabola-trap" => (parabola_trap(n), format!("-x2^{n} on the parabola x2 = x1^2, 0 elsewhere")),
        "cusp-trap" => (
            cusp_trap(n),
            format!("-x2^{n} on the cusp x1 = x2^3, 0 elsewhere; invisible to fixed-direction quotients"),
        ),
        _ => return None,
    };
    Some((prov, spec))
}

// generated by an independent script from the closed-form formulas
#[rustfmt::skip]
const CHECKPOINTS: &[(&str, &[(&[f64], f64)])] = &[
    ("ex2", &[
        (&[0.0], 0.0),
        (&[0.5], -0.01831563888873418),
        (&[-0.5], -0.01831563888873418),
        (&[1.0], -0.36787944117144233),
        (&[-2.0], -0.7788007830714049),
        (&[0.1], -3.720075976020889e-44),
        (&[0.3], -1.4945338524781451e-05),
        (&[3.0], -0.8948393168143698),
        (&[-0.05], -1.9151695967141145e-174),
        (&[2.0], -0.7788007830714049),
    ]),
    ("npc-2", &[
        (&[0.0], 0.0),
        (&[1.0], 1.0),
        (&[-1.0], -1.0),
        (&[0.5], 0.25),
        (&[-0.5], -0.25),
        (&[2.0], 4.0),
        (&[-2.0], -4.0),
        (&[0.3], 0.09),
        (&[-1.5], -2.25),
        (&[0.05], 0.0025000000000000005),
    ]),
    ("npc-3", &[
        (&[0.0], 0.0),
        (&[1.0], 1.0),
        (&[-1.0], -1.0),
        (&[0.5], 0.125),
        (&[-0.5], -0.125),
        (&[2.0], 8.0),
        (&[-2.0], -8.0),
        (&[0.3], 0.027),
        (&[-1.5], -3.375),
        (&[0.05], 0.00012500000000000003),
    ]),
    ("npc-4", &[
        (&[0.0], 0.0),
        (&[1.0], 1.0),
        (&[-1.0], -1.0),
        (&[0.5], 0.0625),
        (&[-0.5], -0.0625),
        (&[2.0], 16.0),
        (&[-2.0], -16.0),
        (&[0.3], 0.0081),
        (&[-1.5], -5.0625),
        (&[0.05], 6.250000000000002e-06),
    ]),
    ("npc-5", &[
        (&[0.0], 0.0),
        (&[1.0], 1.0),
        (&[-1.0], -1.0),
        (&[0.5], 0.03125),
        (&[-0.5], -0.03125),
        (&[2.0], 32.0),
        (&[-2.0], -32.0),
        (&[0.3], 0.00243),
        (&[-1.5], -7.59375),
        (&[0.05], 3.1250000000000013e-07),
    ]),
    ("exp-2d", &[
        (&[0.0, 0.0], 0.0),
        (&[0.5, 0.5], 0.1353352832366127),
        (&[1.0, -0.5], 0.44932896411722156),
        (&[0.1, 0.0], 3.720075976020889e-44),
        (&[0.0, -0.2], 1.388794386496407e-11),
        (&[2.0, 1.0], 0.8187307530779818),
        (&[-1.0, -1.0], 0.6065306597126334),
        (&[0.3, 0.4], 0.01831563888873418),
        (&[-0.05, 0.05], 1.3838965267367769e-87),
        (&[3.0, 0.0], 0.8948393168143698),
    ]),
    ("parabola-trap-3", &[
        (&[0.0, 0.0], -0.0),
        (&[1.0, 1.0], -1.0),
        (&[1.0, 0.0], 0.0),
        (&[0.5, 0.5], 0.0),
        (&[0.5, 0.25], -0.015625),
        (&[-0.3, 0.09], -0.0007289999999999999),
        (&[1.5, 2.25], -11.390625),
        (&[-2.0, 4.0], -64.0),
        (&[0.25, 0.062500001], 0.0),
        (&[-1.0, 1.0], -1.0),
    ]),
    ("parabola-trap-4", &[
        (&[0.0, 0.0], -0.0),
        (&[1.0, 1.0], -1.0),
        (&[1.0, 0.0], 0.0),
        (&[0.5, 0.5], 0.0),
        (&[0.5, 0.25], -0.00390625),
        (&[-0.3, 0.09], -6.560999999999999e-05),
        (&[1.5, 2.25], -25.62890625),
        (&[-2.0, 4.0], -256.0),
        (&[0.25, 0.062500001], 0.0),
        (&[-1.0, 1.0], -1.0),
    ]),
    ("cusp-trap-4", &[
        (&[0.0, 0.0], -0.0),
        (&[1.0, 1.0], -1.0),
        (&[0.0, 1.0], 0.0),
        (&[0.3, -0.4], 0.0),
        (&[0.125, 0.5], -0.0625),
        (&[-0.027, -0.3], -0.0081),
        (&[3.375, 1.5], -5.0625),
        (&[-8.0, -2.0], -16.0),
        (&[0.125, 0.500000001], 0.0),
        (&[-1.0, -1.0], -1.0),
    ]),
    ("neg-sphere", &[
        (&[0.0, 0.0], -0.0),
        (&[1.0, 1.0], -2.0),
        (&[3.0, 4.0], -25.0),
        (&[-0.3, 0.2], -0.13),
        (&[1.0, 0.5], -1.25),
        (&[-2.0, -1.5], -6.25),
        (&[0.1, -0.7], -0.49999999999999994),
        (&[0.25, 0.0], -0.0625),
        (&[-1.0, 3.0], -10.0),
        (&[0.6, 0.6], -0.72),
    ]),
    ("sq-norm", &[
        (&[0.0, 0.0], 0.0),
        (&[1.0, 1.0], 2.0),
        (&[3.0, 4.0], 25.0),
        (&[-0.3, 0.2], 0.13),
        (&[1.0, 0.5], 1.25),
        (&[-2.0, -1.5], 6.25),
        (&[0.1, -0.7], 0.49999999999999994),
        (&[0.25, 0.0], 0.0625),
        (&[-1.0, 3.0], 10.0),
        (&[0.6, 0.6], 0.72),
    ]),
    ("abs-1d", &[
        (&[0.0], 0.0),
        (&[1.0], 1.0),
        (&[-1.0], 1.0),
        (&[0.5], 0.5),
        (&[-0.5], 0.5),
        (&[2.0], 2.0),
        (&[-3.0], 3.0),
        (&[0.1], 0.1),
        (&[-0.25], 0.25),
        (&[1.5], 1.5),
    ]),
    ("quartic-1d", &[
        (&[0.0], 0.0),
        (&[1.0], 1.0),
        (&[-1.0], 1.0),
        (&[0.5], 0.0625),
        (&[-0.5], 0.0625),
        (&[2.0], 16.0),
        (&[-3.0], 81.0),
        (&[0.1], 0.00010000000000000003),
        (&[-0.25], 0.00390625),
        (&[1.5], 5.0625),
    ]),
    ("mixed-24", &[
        (&[0.0, 0.0], 0.0),
        (&[1.0, 1.0], 2.0),
        (&[3.0, 4.0], 265.0),
        (&[-0.3, 0.2], 0.0916),
        (&[1.0, 0.5], 1.0625),
        (&[-2.0, -1.5], 9.0625),
        (&[0.1, -0.7], 0.25009999999999993),
        (&[0.25, 0.0], 0.0625),
        (&[-1.0, 3.0], 82.0),
        (&[0.6, 0.6], 0.4896),
    ]),
    ("linear-c", &[
        (&[0.0, 0.0], 0.0),
        (&[1.0, 1.0], -1.0),
        (&[3.0, 4.0], -5.0),
        (&[-0.3, 0.2], -0.7),
        (&[1.0, 0.5], 0.0),
        (&[-2.0, -1.5], 1.0),
        (&[0.1, -0.7], 1.5),
        (&[0.25, 0.0], 0.25),
        (&[-1.0, 3.0], -7.0),
        (&[0.6, 0.6], -0.6),
    ]),
    ("indicator-halfline", &[
        (&[0.0], 0.0),
        (&[-1.0], f64::INFINITY),
        (&[1.0], 0.0),
        (&[0.5], 0.0),
        (&[-0.5], f64::INFINITY),
        (&[2.0], 0.0),
        (&[-1e-09], f64::INFINITY),
        (&[1e-09], 0.0),
        (&[-3.0], f64::INFINITY),
        (&[10.0], 0.0),
    ]),
];

fn checkpoints(name: &str) -> Vec<Checkpoint> {
    CHECKPOINTS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, pts)| {
            pts.iter()
                .map(|(p, v)| Checkpoint {
                    point: p.to_vec(),
                    value: ExtReal::function_value(*v).expect("stored value"),
                })
                .collect()
        })
        .unwrap_or_default()
}

fn entry(name: &str, spec: FunctionSpec, provenance: &str) -> Result<CorpusEntry> {
    let point = spec.labels().map(|l| l.point.clone()).unwrap_or_else(|| vec![0.0; spec.dim()]);
    if !spec.evaluate(&point)?.is_finite() {
        return Err(Error::EmptyDomain(name.to_string()));
    }
    Ok(CorpusEntry { name: name.to_string(), spec, provenance: provenance.to_string(), checkpoints: checkpoints(name) })
}

fn build() -> Result<Vec<CorpusEntry>> {
    let mut out =
        vec![entry("ex2", ex2(), "-exp(-1/x^2), 0 at the origin: flat global maximiser, stationary of every order")?];
    for n in 2..=5 {
        let name = format!("npc-{n}");
        let (prov, spec) = parametric(&name).expect("registered family");
        out.push(entry(&name, spec, &prov)?);
    }
    out.push(entry("exp-2d", exp_2d(), "exp(-1/(x1^2+x2^2)): strict minimiser that is isolated of no order")?);
    for name in ["parabola-trap-3", "parabola-trap-4", "cusp-trap-4"] {
        let (prov, spec) = parametric(name).expect("registered family");
        out.push(entry(name, spec, &prov)?);
    }
    out.push(entry("neg-sphere", neg_sphere(), "-x1^2 - x2^2: second-order invex, not invex")?);
    out.push(entry("sq-norm", sq_norm(), "x1^2 + x2^2")?);
    out.push(entry("abs-1d", abs_1d(), "|x|")?);
    out.push(entry("quartic-1d", quartic_1d(), "x^4: isolated minimiser of order 4")?);
    out.push(entry("mixed-24", mixed_24(), "x1^2 + x2^4: order 2 off the x2-axis, order 4 on it")?);
    out.push(entry("linear-c", linear_c(), "c·x with c = (1, -2)")?);
    out.push(entry("indicator-halfline", indicator_halfline(), "0 on [0, inf), +inf elsewhere")?);
    let mut seen = BTreeSet::new();
    for e in &out {
        if !seen.insert(e.name.clone()) {
            return Err(Error::DuplicateCorpusEntry(e.name.clone()));
        }
    }
    Ok(out)
}

/// All registered entries, in listing order.
pub fn corpus() -> &'static [CorpusEntry] {
    static CORPUS: OnceLock<Vec<CorpusEntry>> = OnceLock::new();
    CORPUS.get_or_init(|| build().expect("built-in corpus is consistent"))
}

/// Looks up a registered entry; the parametric families `npc-<n>`,
/// `parabola-trap-<n>` and `cusp-trap-<n>` accept any `n` in `1..=12`.
pub fn corpus_lookup(name: &str) -> Result<CorpusEntry> {
    if let Some(e) = corpus().iter().find(|e| e.name == name) {
        return Ok(e.clone());
    }
    if let Some((prov, spec)) = parametric(name) {
        return entry(name, spec, &prov);
    }
    Err(Error::UnknownCorpusEntry {
        name: name.to_string(),
        available: corpus().iter().map(|e| e.name.as_str()).collect::<Vec<_>>().join(", "),
    })
}
