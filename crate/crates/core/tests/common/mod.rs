#![allow(dead_code)]

use proptest::prelude::*;
use spikequant::{LeakRate, Spike, SpikeTrain};

/// Events on a coarse time grid so that collisions (and merging) happen.
pub fn events(max_len: usize, amp: f64) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0u32..200, -amp..amp), 0..max_len)
        .prop_map(|v| v.into_iter().map(|(t, a)| (t as f64 * 0.25, a)).collect())
}

pub fn train(max_len: usize, amp: f64) -> impl Strategy<Value = SpikeTrain> {
    events(max_len, amp).prop_map(|e| SpikeTrain::from_events(e).unwrap())
}

pub fn alpha() -> impl Strategy<Value = LeakRate> {
    prop_oneof![
        Just(LeakRate::ZERO),
        Just(LeakRate::Finite(0.1)),
        Just(LeakRate::Finite(1.0)),
        Just(LeakRate::Finite(10.0)),
        Just(LeakRate::Infinite),
        (0.0f64..5.0).prop_map(LeakRate::Finite),
    ]
}

pub fn pairs(t: &SpikeTrain) -> Vec<(f64, f64)> {
    t.iter().map(|s| (s.time, s.amplitude)).collect()
}

/// `max_n |sum_{j <= n} a_j exp(-alpha (t_n - t_j))|`, each prefix summed from
/// scratch.
pub fn brute_force_norm(spikes: &[Spike], alpha: LeakRate) -> f64 {
    let weight = |dt: f64| match alpha {
        LeakRate::Infinite => {
            if dt == 0.0 {
                1.0
            } else {
                0.0
            }
        }
        LeakRate::Finite(a) => (-a * dt).exp(),
    };
    (0..spikes.len())
        .map(|n| {
            spikes[..=n]
                .iter()
                .map(|s| s.amplitude * weight(spikes[n].time - s.time))
                .sum::<f64>()
                .abs()
        })
        .fold(0.0, f64::max)
}

pub fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}
