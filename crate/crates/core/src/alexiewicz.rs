//! The leaky Alexiewicz norm and decay-weighted (pseudo-)addition.
//!
//! For a train `sum_i a_i delta(t - t_i)` the pseudo-addition is
//! `a_i (+) a_j = exp(-alpha (t_j - t_i)) a_i + a_j`, and the norm is the
//! largest magnitude reached by the running pseudo-sum over all prefixes:
//!
//! ```text
//! ||eta||_{A,alpha} = max_n | sum_{j <= n} a_j exp(-alpha (t_n - t_j)) |
//! ```
//!
//! A discrete-time train is an ordinary train on the grid `t = 0, 1, 2, ...`
//! with per-step decay `decay_weight(alpha, 1.0)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::spike::{Spike, SpikeTrain};

/// Leak rate `alpha` in `[0, inf]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LeakRate {
    Finite(f64),
    /// Memoryless limit: nothing survives a positive time step.
    Infinite,
}

impl LeakRate {
    pub const ZERO: LeakRate = LeakRate::Finite(0.0);

    /// Positive infinity maps to [`LeakRate::Infinite`].
    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() || value < 0.0 {
            return Err(Error::InvalidLeakRate(value.to_string()));
        }
        if value.is_infinite() {
            Ok(LeakRate::Infinite)
        } else {
            Ok(LeakRate::Finite(value))
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, LeakRate::Infinite)
    }

    pub fn as_f64(&self) -> f64 {
        match *self {
            LeakRate::Finite(v) => v,
            LeakRate::Infinite => f64::INFINITY,
        }
    }
}

impl Default for LeakRate {
    fn default() -> Self {
        LeakRate::ZERO
    }
}

impl fmt::Display for LeakRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LeakRate::Finite(v) => write!(f, "{v}"),
            LeakRate::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for LeakRate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.to_ascii_lowercase().as_str() {
            "inf" | "+inf" | "infinity" | "+infinity" => Ok(LeakRate::Infinite),
            _ => {
                let v: f64 = s
                    .parse()
                    .map_err(|_| Error::InvalidLeakRate(s.to_string()))?;
                LeakRate::new(v)
            }
        }
    }
}

impl Serialize for LeakRate {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            LeakRate::Finite(v) => serializer.serialize_f64(*v),
            LeakRate::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for LeakRate {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        let parsed = match Raw::deserialize(deserializer)? {
            Raw::Number(v) => LeakRate::new(v),
            Raw::Text(s) => s.parse(),
        };
        parsed.map_err(serde::de::Error::custom)
    }
}

/// The factor `exp(-alpha * dt)`.
///
/// `alpha = 0` gives 1 for every `dt`; `alpha = inf` gives 0 for `dt > 0`
/// and 1 for `dt = 0`.
pub fn decay_weight(alpha: LeakRate, dt: f64) -> Result<f64> {
    if dt.is_nan() || dt < 0.0 {
        return Err(Error::NegativeTimeStep(dt));
    }
    Ok(decay_unchecked(alpha, dt))
}

#[inline]
pub(crate) fn decay_unchecked(alpha: LeakRate, dt: f64) -> f64 {
    match alpha {
        LeakRate::Finite(a) if a == 0.0 || dt == 0.0 => 1.0,
        LeakRate::Finite(a) => (-a * dt).exp(),
        LeakRate::Infinite if dt == 0.0 => 1.0,
        LeakRate::Infinite => 0.0,
    }
}

/// Streaming pseudo-sum over a time-ordered sequence of spikes.
///
/// After each [`push`](PseudoSum::push) the accumulator holds the running
/// pseudo-sum `s_n` and the running maximum of `|s_k|`, `k <= n`.
#[derive(Debug, Clone, Copy)]
pub struct PseudoSum {
    alpha: LeakRate,
    last_time: Option<f64>,
    sum: f64,
    max_abs: f64,
}

impl PseudoSum {
    pub fn new(alpha: LeakRate) -> Self {
        Self {
            alpha,
            last_time: None,
            sum: 0.0,
            max_abs: 0.0,
        }
    }

    /// Folds one spike in. Times must be non-decreasing.
    pub fn push(&mut self, spike: Spike) -> Result<f64> {
        let dt = match self.last_time {
            Some(t) => spike.time - t,
            None => 0.0,
        };
        let w = decay_weight(self.alpha, dt)?;
        self.accumulate(w, spike);
        Ok(self.sum)
    }

    #[inline]
    fn accumulate(&mut self, weight: f64, spike: Spike) {
        self.sum = weight * self.sum + spike.amplitude;
        self.max_abs = self.max_abs.max(self.sum.abs());
        self.last_time = Some(spike.time);
    }

    pub fn sum(&self) -> f64 {
        self.sum
    }

    pub fn max_abs(&self) -> f64 {
        self.max_abs
    }
}

fn fold(train: &SpikeTrain, alpha: LeakRate) -> PseudoSum {
    let mut acc = PseudoSum::new(alpha);
    let mut prev = None;
    for &spike in train {
        let dt = prev.map_or(0.0, |t| spike.time - t);
        acc.accumulate(decay_unchecked(alpha, dt), spike);
        prev = Some(spike.time);
    }
    acc
}

/// Full pseudo-sum `a_1 (+) a_2 (+) ... (+) a_n`; 0 for the empty train.
pub fn oplus_fold(train: &SpikeTrain, alpha: LeakRate) -> f64 {
    fold(train, alpha).sum()
}

/// Leaky Alexiewicz norm, single pass over the train.
pub fn alexiewicz_norm(train: &SpikeTrain, alpha: LeakRate) -> f64 {
    fold(train, alpha).max_abs()
}

/// Running pseudo-sums `s_1, ..., s_n`.
pub fn prefix_sums(train: &SpikeTrain, alpha: LeakRate) -> Vec<f64> {
    let mut acc = PseudoSum::new(alpha);
    let mut prev = None;
    train
        .iter()
        .map(|&spike| {
            let dt = prev.map_or(0.0, |t| spike.time - t);
            prev = Some(spike.time);
            acc.accumulate(decay_unchecked(alpha, dt), spike);
            acc.sum()
        })
        .collect()
}
