//! Discretisation of `liminf_{t↓0, u'→u}` into geometric shells.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How the smallest admissible step is chosen for a given order.
///
/// The order-`n` quotient multiplies rounding error by `t^{-n}`, so steps are
/// clipped from below. `Scaled` sizes the floor from the magnitudes that are
/// actually cancelled inside the bracket; `Unscaled` is the fixed rule
/// `factor · ε^{1/(n+1)}`; `Off` disables clipping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FloorPolicy {
    Scaled { factor: f64 },
    Unscaled { factor: f64 },
    Off,
}

impl Default for FloorPolicy {
    fn default() -> Self {
        FloorPolicy::Scaled { factor: 10.0 }
    }
}

/// One shell of the sampling schedule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shell {
    pub t: f64,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiminfSchedule {
    pub t0: f64,
    pub ratio: f64,
    pub shells: usize,
    pub dir_radius0: f64,
    /// Directions per shell; `None` means `32·d`.
    #[serde(default)]
    pub dir_samples: Option<usize>,
    pub tail: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub order_floor_policy: FloorPolicy,
    /// Each nominal shell is split into this many sub-shells (`ratio^{1/s}` spacing).
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub subdivision: u32,
    /// Multiplies the per-shell direction count (used by refined schedules).
    #[serde(default = "one_usize", skip_serializing_if = "is_one_usize")]
    pub dir_multiplier: usize,
}

fn one_usize() -> usize {
    1
}

fn is_one_usize(v: &usize) -> bool {
    *v == 1
}

fn one() -> u32 {
    1
}

fn is_one(v: &u32) -> bool {
    *v == 1
}

impl Default for LiminfSchedule {
    fn default() -> Self {
        LiminfSchedule {
            t0: 0.25,
            ratio: 0.7,
            shells: 40,
            dir_radius0: 0.25,
            dir_samples: None,
            tail: 5,
            seed: 0,
            order_floor_policy: FloorPolicy::default(),
            subdivision: 1,
            dir_multiplier: 1,
        }
    }
}

impl LiminfSchedule {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidSchedule(msg.to_string()));
        if !(self.t0.is_finite() && self.t0 > 0.0) {
            return bad("t0 must be positive and finite");
        }
        if !(self.ratio > 0.0 && self.ratio < 1.0) {
            return bad("ratio must lie in (0, 1)");
        }
        if self.shells == 0 {
            return bad("at least one shell is required");
        }
        if self.tail == 0 || self.tail > self.shells {
            return bad("tail must lie in 1..=shells");
        }
        if !(self.dir_radius0.is_finite() && self.dir_radius0 >= 0.0) {
            return bad("dir_radius0 must be finite and non-negative");
        }
        if self.dir_samples == Some(0) {
            return bad("dir_samples must be positive");
        }
        if self.subdivision == 0 || self.dir_multiplier == 0 {
            return bad("refinement factors must be positive");
        }
        match self.order_floor_policy {
            FloorPolicy::Scaled { factor } | FloorPolicy::Unscaled { factor }
                if !(factor.is_finite() && factor > 0.0) =>
            {
                bad("floor factor must be positive")
            }
            _ => Ok(()),
        }
    }

    /// Directions sampled per shell in dimension `dim`.
    pub fn directions_per_shell(&self, dim: usize) -> usize {
        self.dir_samples.unwrap_or(32 * dim) * self.dir_multiplier
    }

    /// A denser schedule whose sample set contains this one's: every shell is
    /// split into `shell_factor` sub-shells (tail scaled alike) and
    /// `dir_factor` times as many directions are drawn.
    pub fn refined(&self, shell_factor: u32, dir_factor: usize) -> Self {
        let s = shell_factor.max(1);
        LiminfSchedule {
            shells: self.shells * s as usize,
            tail: self.tail * s as usize,
            subdivision: self.subdivision * s,
            dir_multiplier: self.dir_multiplier * dir_factor.max(1),
            ..self.clone()
        }
    }

    /// Minimal step for order `n`.
    ///
    /// `magnitudes[0]` is `|f(x)|` (or the order-0 value that is subtracted);
    /// `magnitudes[i]` is the size of the `i`-th subtracted Taylor term at `t = 1`.
    pub fn floor(&self, n: usize, magnitudes: &[f64]) -> f64 {
        let eps = f64::EPSILON;
        match self.order_floor_policy {
            FloorPolicy::Off => 0.0,
            FloorPolicy::Unscaled { factor } => factor * eps.powf(1.0 / (n as f64 + 1.0)),
            FloorPolicy::Scaled { factor } => magnitudes
                .iter()
                .enumerate()
                .take(n.max(1))
                .filter(|(_, s)| s.is_finite() && **s > 0.0)
                .map(|(i, s)| factor * (eps * s).powf(1.0 / ((n - i.min(n)) as f64 + 1.0)))
                .fold(0.0, f64::max),
        }
    }

    /// Shells `(t_j, ρ_j)` for order `n`. Steps are clipped at the floor;
    /// radii keep shrinking.
    pub fn steps(&self, n: usize, magnitudes: &[f64]) -> Vec<Shell> {
        let floor = self.floor(n, magnitudes);
        (0..self.shells)
            .map(|k| {
                let g = self.ratio.powf(k as f64 / self.subdivision as f64);
                Shell { t: (self.t0 * g).max(floor), radius: self.dir_radius0 * g }
            })
            .collect()
    }
}
