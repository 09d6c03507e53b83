//! Functions under analysis.

mod corpus;
mod expr;
mod poly;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extreal::ExtReal;

pub use corpus::{corpus, corpus_lookup, Checkpoint, CorpusEntry};
pub use expr::{parse_function, Expr};
pub use poly::{exact_frechet, PolyTensorData, POLY_ORDER_CAP};

/// Which multiplier chain an exact oracle value refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainConvention {
    /// All multipliers zero.
    Zero,
    /// Multipliers are the Fréchet derivatives `∇f(x), …, ∇^{n-1}f(x)`.
    Frechet,
}

type Evaluator = dyn Fn(&[f64]) -> Result<f64> + Send + Sync;
type Oracle = dyn Fn(usize, ChainConvention, &[f64], &[f64]) -> Option<ExtReal> + Send + Sync;

/// Extra sample locations for functions whose interesting behaviour lives on
/// a set of measure zero (a curve, say) that quasi-random sampling would miss.
pub trait SpikeHint: Send + Sync {
    /// Points of the spike set close to `target`.
    fn points_near(&self, target: &[f64]) -> Vec<Vec<f64>>;
    /// Directions worth probing at `x` (tangents of the spike set, say).
    fn directions(&self, x: &[f64]) -> Vec<Vec<f64>>;
}

/// Stationarity of the labelled point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StationaryLabel {
    Exactly(usize),
    Every,
}

/// Ground truth attached to a corpus entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Labels {
    pub point: Vec<f64>,
    /// Further points used by table-driven property suites.
    pub probes: Vec<Vec<f64>>,
    pub local_min: bool,
    pub strict_local_min: bool,
    pub global_min: bool,
    pub global_max: bool,
    pub stationary_order: Option<StationaryLabel>,
    /// Least `n` with `f(x) >= f(x̄) + C|x - x̄|^n` near `x̄`; `None` if there is none.
    pub least_isolated_order: Option<usize>,
    /// `inf f` over the whole space when it is attained.
    pub global_min_value: Option<f64>,
    /// Least order of invexity; `None` when the function is not invex of any order.
    pub invex_from: Option<usize>,
}

impl Labels {
    pub fn at(point: Vec<f64>) -> Self {
        Labels {
            point,
            probes: Vec::new(),
            local_min: false,
            strict_local_min: false,
            global_min: false,
            global_max: false,
            stationary_order: None,
            least_isolated_order: None,
            global_min_value: None,
            invex_from: None,
        }
    }

    /// Labelled point followed by the probes.
    pub fn points(&self) -> Vec<Vec<f64>> {
        std::iter::once(self.point.clone()).chain(self.probes.iter().cloned()).collect()
    }
}

/// A proper extended-real function on `R^d`.
#[derive(Clone)]
pub struct FunctionSpec {
    dim: usize,
    evaluator: Arc<Evaluator>,
    oracle: Option<Arc<Oracle>>,
    hint: Option<Arc<dyn SpikeHint>>,
    poly: Option<PolyTensorData>,
    labels: Option<Labels>,
    source: Option<Expr>,
}

impl fmt::Debug for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionSpec")
            .field("dim", &self.dim)
            .field("source", &self.source.as_ref().map(|e| e.to_string()))
            .field("has_oracle", &self.oracle.is_some())
            .field("has_hint", &self.hint.is_some())
            .field("labels", &self.labels)
            .finish()
    }
}

impl FunctionSpec {
    /// Wraps an evaluator. It must be deterministic and never return `-inf` or NaN;
    /// `+inf` marks points outside the domain.
    pub fn new(dim: usize, evaluator: impl Fn(&[f64]) -> Result<f64> + Send + Sync + 'static) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        Ok(FunctionSpec {
            dim,
            evaluator: Arc::new(evaluator),
            oracle: None,
            hint: None,
            poly: None,
            labels: None,
            source: None,
        })
    }

    /// Convenience for infallible closures.
    pub fn from_fn(dim: usize, f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Result<Self> {
        Self::new(dim, move |x| Ok(f(x)))
    }

    pub fn with_oracle(
        mut self,
        oracle: impl Fn(usize, ChainConvention, &[f64], &[f64]) -> Option<ExtReal> + Send + Sync + 'static,
    ) -> Self {
        self.oracle = Some(Arc::new(oracle));
        self
    }

    pub fn with_hint(mut self, hint: impl SpikeHint + 'static) -> Self {
        self.hint = Some(Arc::new(hint));
        self
    }

    /// Attaches polynomial data; also installs the matching exact oracle
    /// unless one is already present.
    pub fn with_poly(mut self, poly: PolyTensorData) -> Self {
        if self.oracle.is_none() {
            let p = poly.clone();
            self.oracle = Some(Arc::new(move |n, conv, x: &[f64], u: &[f64]| p.oracle(n, conv, x, u)));
        }
        self.poly = Some(poly);
        self
    }

    pub fn with_labels(mut self, labels: Labels) -> Self {
        self.labels = Some(labels);
        self
    }

    pub(crate) fn with_source(mut self, source: Expr) -> Self {
        self.source = Some(source);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> Option<&Labels> {
        self.labels.as_ref()
    }

    pub fn poly(&self) -> Option<&PolyTensorData> {
        self.poly.as_ref()
    }

    pub fn hint(&self) -> Option<&dyn SpikeHint> {
        self.hint.as_deref()
    }

    /// The DSL expression this function was parsed from, if any.
    pub fn source(&self) -> Option<&Expr> {
        self.source.as_ref()
    }

    pub fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        if x.iter().any(|v| v.is_nan()) {
            return Err(Error::NaN);
        }
        Ok(())
    }

    /// `f(x)`, finite or `+inf`.
    pub fn evaluate(&self, x: &[f64]) -> Result<ExtReal> {
        self.check_point(x)?;
        let v = (self.evaluator)(x)?;
        ExtReal::function_value(v).map_err(|e| match e {
            Error::NaN => Error::Eval(format!("NaN at {x:?}")),
            other => other,
        })
    }

    /// Exact derivative value when the function carries an oracle for it.
    pub fn exact(&self, n: usize, conv: ChainConvention, x: &[f64], u: &[f64]) -> Option<ExtReal> {
        self.oracle.as_ref().and_then(|o| o(n, conv, x, u))
    }

    pub fn has_oracle(&self) -> bool {
        self.oracle.is_some()
    }
}

/// Free-function form of [`FunctionSpec::evaluate`].
pub fn evaluate(spec: &FunctionSpec, x: &[f64]) -> Result<ExtReal> {
    spec.evaluate(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_points_and_values() {
        let f = FunctionSpec::from_fn(2, |x| x[0] - x[1]).unwrap();
        assert!(matches!(f.evaluate(&[1.0]), Err(Error::DimensionMismatch { expected: 2, got: 1 })));
        assert!(matches!(f.evaluate(&[f64::NAN, 0.0]), Err(Error::NaN)));
        let g = FunctionSpec::from_fn(1, |_| f64::NEG_INFINITY).unwrap();
        assert!(matches!(g.evaluate(&[0.0]), Err(Error::NegInfFunctionValue)));
        assert!(FunctionSpec::from_fn(0, |_| 0.0).is_err());
    }
}
