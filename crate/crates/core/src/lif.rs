//! Leaky integrate-and-fire as an operator on spike trains.
//!
//! The membrane integrates weighted impulses with exponential leak
//! `exp(-alpha t)`. Whenever `|u| >= threshold` right after an input event, an
//! output spike is emitted at that event time and the membrane is discharged
//! according to the [`ResetMode`]. Since `|u|` only decays between events,
//! threshold crossings can only happen at input times, so the operator is
//! evaluated event by event.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::alexiewicz::{alexiewicz_norm, decay_unchecked, LeakRate};
use crate::error::{Error, Result};
use crate::spike::{Spike, SpikeTrain};

/// Re-initialization rule applied when the membrane fires.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResetMode {
    /// Emit `sgn(u) * threshold`, then set `u = 0`.
    Zero,
    /// Emit `sgn(u) * threshold`, then subtract it once. A supra-threshold
    /// remainder is carried to the next event.
    Subtract,
    /// Emit `q(u / threshold) * threshold` and subtract it, leaving
    /// `|u| < threshold`.
    Mod,
}

impl ResetMode {
    pub const ALL: [ResetMode; 3] = [ResetMode::Mod, ResetMode::Subtract, ResetMode::Zero];

    pub fn as_str(&self) -> &'static str {
        match self {
            ResetMode::Zero => "zero",
            ResetMode::Subtract => "subtract",
            ResetMode::Mod => "mod",
        }
    }

    /// Stable ordinal, independent of how modes are listed in a config.
    pub fn ordinal(&self) -> u64 {
        match self {
            ResetMode::Zero => 0,
            ResetMode::Subtract => 1,
            ResetMode::Mod => 2,
        }
    }
}

impl fmt::Display for ResetMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ResetMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "zero" => Ok(ResetMode::Zero),
            "subtract" => Ok(ResetMode::Subtract),
            "mod" => Ok(ResetMode::Mod),
            other => Err(format!(
                "unknown reset mode '{other}' (expected zero, subtract or mod)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LifConfig {
    threshold: f64,
    alpha: LeakRate,
    mode: ResetMode,
}

impl LifConfig {
    pub fn new(threshold: f64, alpha: LeakRate, mode: ResetMode) -> Result<Self> {
        if !(threshold.is_finite() && threshold > 0.0) {
            return Err(Error::InvalidThreshold(threshold));
        }
        Ok(Self {
            threshold,
            alpha,
            mode,
        })
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn alpha(&self) -> LeakRate {
        self.alpha
    }

    pub fn mode(&self) -> ResetMode {
        self.mode
    }

    pub fn with_mode(self, mode: ResetMode) -> Self {
        Self { mode, ..self }
    }
}

/// Membrane potential after the most recent event.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MembraneState {
    pub potential: f64,
    /// `None` until the first input event.
    pub last_event_time: Option<f64>,
}

impl MembraneState {
    /// Potential at `time`, decayed from the last event. Zero before any event.
    pub fn potential_at(&self, alpha: LeakRate, time: f64) -> f64 {
        match self.last_event_time {
            Some(t0) => decay_unchecked(alpha, (time - t0).max(0.0)) * self.potential,
            None => 0.0,
        }
    }

    #[inline]
    fn integrate(&mut self, alpha: LeakRate, spike: Spike) {
        let dt = self.last_event_time.map_or(0.0, |t| spike.time - t);
        self.potential = decay_unchecked(alpha, dt) * self.potential + spike.amplitude;
        self.last_event_time = Some(spike.time);
    }
}

/// Integer truncation toward zero, `sgn(x) * floor(|x|)`.
pub fn truncate_quantize(x: f64) -> Result<i64> {
    if !x.is_finite() {
        return Err(Error::NonFiniteValue(x));
    }
    // `as` saturates outside the i64 range
    Ok(x.trunc() as i64)
}

/// `q(u / theta)` for `|u| >= theta`, corrected so that `u - k * theta` keeps
/// the sign of `u` and stays below `theta` in magnitude despite rounding in
/// the division.
fn mod_multiple(u: f64, theta: f64) -> f64 {
    let unit = 1f64.copysign(u);
    let mut k = (u / theta).trunc();
    if k == 0.0 {
        k = unit;
    }
    while (u - k * theta) * unit < 0.0 && k * unit > 1.0 {
        k -= unit;
    }
    while (u - k * theta).abs() >= theta && (u - k * theta) * unit > 0.0 {
        k += unit;
    }
    k
}

/// Single neuron, fed one input spike at a time.
#[derive(Debug, Clone)]
pub struct Neuron {
    config: LifConfig,
    state: MembraneState,
}

impl Neuron {
    pub fn new(config: LifConfig) -> Self {
        Self {
            config,
            state: MembraneState::default(),
        }
    }

    pub fn state(&self) -> MembraneState {
        self.state
    }

    pub fn config(&self) -> &LifConfig {
        &self.config
    }

    /// Integrates one input spike and returns the emitted amplitude, if any.
    ///
    /// Input times must be non-decreasing across calls.
    pub fn step(&mut self, spike: Spike) -> Option<f64> {
        let theta = self.config.threshold;
        self.state.integrate(self.config.alpha, spike);
        let u = self.state.potential;
        if u.abs() < theta {
            return None;
        }
        let unit = theta.copysign(u);
        let (emitted, residual) = match self.config.mode {
            ResetMode::Zero => (unit, 0.0),
            ResetMode::Subtract => (unit, u - unit),
            ResetMode::Mod => {
                let k = mod_multiple(u, theta);
                (k * theta, u - k * theta)
            }
        };
        self.state.potential = residual;
        Some(emitted)
    }
}

/// Runs the operator over a whole train and returns the output train together
/// with the final membrane state.
pub fn lif_run(train: &SpikeTrain, config: &LifConfig) -> (SpikeTrain, MembraneState) {
    let mut neuron = Neuron::new(*config);
    let out = train
        .iter()
        .filter_map(|&s| neuron.step(s).map(|a| Spike::new(s.time, a)))
        .collect();
    (SpikeTrain::from_sorted_unchecked(out), neuron.state())
}

pub fn lif_transform(train: &SpikeTrain, config: &LifConfig) -> SpikeTrain {
    lif_run(train, config).0
}

/// Reference definition of [`ResetMode::Mod`]: after each input event,
/// subtract `sgn(u) * threshold` repeatedly while `|u| >= threshold`, and merge
/// the emissions at that instant into one spike.
///
/// Cost per event is proportional to `|u| / threshold`.
pub fn cascade_oracle(train: &SpikeTrain, threshold: f64, alpha: LeakRate) -> Result<SpikeTrain> {
    if !(threshold.is_finite() && threshold > 0.0) {
        return Err(Error::InvalidThreshold(threshold));
    }
    let mut u = 0.0_f64;
    let mut last: Option<f64> = None;
    let mut out = Vec::new();
    for &spike in train {
        let dt = last.map_or(0.0, |t| spike.time - t);
        u = decay_unchecked(alpha, dt) * u + spike.amplitude;
        last = Some(spike.time);

        let mut emitted = 0.0;
        while u.abs() >= threshold {
            let unit = threshold.copysign(u);
            emitted += unit;
            u -= unit;
        }
        if emitted != 0.0 {
            out.push(Spike::new(spike.time, emitted));
        }
    }
    Ok(SpikeTrain::from_sorted_unchecked(out))
}

/// `|| LIF(train) - train ||_{A,alpha}`.
pub fn quantization_error(train: &SpikeTrain, config: &LifConfig) -> f64 {
    let output = lif_transform(train, config);
    alexiewicz_norm(&output.difference(train), config.alpha)
}

/// Membrane potential sampled at `sample_times` (sorted ascending).
///
/// An event at exactly a sample time is applied before that sample is taken.
pub fn membrane_trace(
    train: &SpikeTrain,
    config: &LifConfig,
    sample_times: &[f64],
) -> Result<Vec<(f64, f64)>> {
    for (index, t) in sample_times.iter().enumerate() {
        if !t.is_finite() {
            return Err(Error::NonFinite {
                index,
                field: "sample time",
            });
        }
        if index > 0 && *t < sample_times[index - 1] {
            return Err(Error::UnsortedSamples { index });
        }
    }
    let mut neuron = Neuron::new(*config);
    let mut events = train.iter().peekable();
    let mut trace = Vec::with_capacity(sample_times.len());
    for &t in sample_times {
        while let Some(&&spike) = events.peek() {
            if spike.time > t {
                break;
            }
            neuron.step(spike);
            events.next();
        }
        trace.push((t, neuron.state().potential_at(config.alpha, t)));
    }
    Ok(trace)
}
