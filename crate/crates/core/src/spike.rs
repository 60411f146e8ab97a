//! Spike trains: finite sums of weighted Dirac impulses.
//!
//! A [`SpikeTrain`] always has strictly increasing spike times. Events that
//! arrive at the same instant are aggregated into one spike when the train is
//! built, since only their sum is observable by a downstream neuron.

use std::cmp::Ordering;

use crate::error::{Error, Result};

/// One weighted impulse `amplitude * delta(t - time)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spike {
    pub time: f64,
    pub amplitude: f64,
}

impl Spike {
    pub fn new(time: f64, amplitude: f64) -> Self {
        Self { time, amplitude }
    }
}

impl From<(f64, f64)> for Spike {
    fn from((time, amplitude): (f64, f64)) -> Self {
        Self { time, amplitude }
    }
}

/// Time-ordered spike train.
///
/// Zero-amplitude spikes only appear in trains returned by
/// [`SpikeTrain::difference`]; [`SpikeTrain::normalize`] removes them.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SpikeTrain {
    spikes: Vec<Spike>,
}

impl SpikeTrain {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a train from unordered `(time, amplitude)` events.
    ///
    /// Events are sorted by time, amplitudes sharing a time are summed, and
    /// aggregates that cancel to exactly zero are dropped.
    pub fn from_events<I, S>(events: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<Spike>,
    {
        let mut spikes: Vec<Spike> = Vec::new();
        for (index, spike) in events.into_iter().map(Into::into).enumerate() {
            if !spike.time.is_finite() {
                return Err(Error::NonFinite {
                    index,
                    field: "time",
                });
            }
            if !spike.amplitude.is_finite() {
                return Err(Error::NonFinite {
                    index,
                    field: "amplitude",
                });
            }
            spikes.push(spike);
        }
        // Stable sort keeps the summation order of simultaneous events
        // equal to their input order.
        spikes.sort_by(|a, b| a.time.total_cmp(&b.time));

        let mut merged: Vec<Spike> = Vec::with_capacity(spikes.len());
        for spike in spikes {
            match merged.last_mut() {
                // total_cmp would keep -0.0 and 0.0 apart
                Some(last) if last.time == spike.time => last.amplitude += spike.amplitude,
                _ => merged.push(spike),
            }
        }
        merged.retain(|s| s.amplitude != 0.0);
        Ok(Self { spikes: merged })
    }

    /// Wraps spikes that are already strictly increasing in time.
    pub(crate) fn from_sorted_unchecked(spikes: Vec<Spike>) -> Self {
        debug_assert!(spikes.windows(2).all(|w| w[0].time < w[1].time));
        Self { spikes }
    }

    /// Weighted superposition `sum_k weights[k] * trains[k]`.
    pub fn superpose(trains: &[SpikeTrain], weights: &[f64]) -> Result<Self> {
        if trains.len() != weights.len() {
            return Err(Error::LengthMismatch {
                trains: trains.len(),
                weights: weights.len(),
            });
        }
        let events = trains.iter().zip(weights).flat_map(|(train, &w)| {
            train
                .spikes
                .iter()
                .map(move |s| Spike::new(s.time, w * s.amplitude))
        });
        Self::from_events(events)
    }

    /// `self - other` on the union of both supports.
    ///
    /// Times where the amplitudes cancel keep an explicit zero spike.
    pub fn difference(&self, other: &SpikeTrain) -> SpikeTrain {
        let (a, b) = (&self.spikes, &other.spikes);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let order = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.time.partial_cmp(&y.time).unwrap_or(Ordering::Equal),
                (Some(_), None) => Ordering::Less,
                (None, _) => Ordering::Greater,
            };
            match order {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(Spike::new(b[j].time, -b[j].amplitude));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push(Spike::new(a[i].time, a[i].amplitude - b[j].amplitude));
                    i += 1;
                    j += 1;
                }
            }
        }
        SpikeTrain::from_sorted_unchecked(out)
    }

    /// Multiplies every amplitude by `c`. `c == 0` yields the empty train.
    pub fn scale(&self, c: f64) -> Result<SpikeTrain> {
        if !c.is_finite() {
            return Err(Error::NonFiniteScale(c));
        }
        let mut spikes = Vec::with_capacity(self.spikes.len());
        for (index, s) in self.spikes.iter().enumerate() {
            let amplitude = c * s.amplitude;
            if !amplitude.is_finite() {
                return Err(Error::NonFinite {
                    index,
                    field: "amplitude",
                });
            }
            if amplitude != 0.0 {
                spikes.push(Spike::new(s.time, amplitude));
            }
        }
        Ok(SpikeTrain::from_sorted_unchecked(spikes))
    }

    /// Drops zero-amplitude spikes.
    pub fn normalize(&self) -> SpikeTrain {
        SpikeTrain::from_sorted_unchecked(
            self.spikes
                .iter()
                .copied()
                .filter(|s| s.amplitude != 0.0)
                .collect(),
        )
    }

    pub fn spikes(&self) -> &[Spike] {
        &self.spikes
    }

    pub fn len(&self) -> usize {
        self.spikes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spikes.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Spike> {
        self.spikes.iter()
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.spikes.iter().map(|s| s.time)
    }

    pub fn amplitudes(&self) -> impl Iterator<Item = f64> + '_ {
        self.spikes.iter().map(|s| s.amplitude)
    }

    /// Keeps the first `n` spikes.
    pub fn truncated(&self, n: usize) -> SpikeTrain {
        SpikeTrain::from_sorted_unchecked(self.spikes[..n.min(self.spikes.len())].to_vec())
    }
}

impl<'a> IntoIterator for &'a SpikeTrain {
    type Item = &'a Spike;
    type IntoIter = std::slice::Iter<'a, Spike>;

    fn into_iter(self) -> Self::IntoIter {
        self.spikes.iter()
    }
}
