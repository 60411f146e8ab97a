//! Randomized check of the quantization bound over a grid of thresholds and
//! leak rates, plus agreement with the cascaded-subtraction reference.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::alexiewicz::LeakRate;
use crate::experiments::{derive_seed, sample_train, AmplitudeLaw, Spacing};
use crate::lif::{cascade_oracle, lif_transform, quantization_error, LifConfig, ResetMode};
use crate::spike::SpikeTrain;

pub const ALPHA_GRID: [LeakRate; 5] = [
    LeakRate::ZERO,
    LeakRate::Finite(0.1),
    LeakRate::Finite(1.0),
    LeakRate::Finite(10.0),
    LeakRate::Infinite,
];

pub const THRESHOLD_GRID: [f64; 3] = [0.5, 1.0, 2.0];

/// Absolute amplitude tolerance (in units of the threshold) for comparisons
/// against the reference and for the integer-multiple check.
pub const AMPLITUDE_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct SelftestConfig {
    pub trains: usize,
    pub seed: u64,
    pub mode: ResetMode,
    /// Amplitude half range in units of the threshold.
    pub half_range: f64,
    pub max_spikes: usize,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        Self {
            trains: 10_000,
            seed: 0,
            mode: ResetMode::Mod,
            half_range: 1.5,
            max_spikes: 1000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ViolationKind {
    /// Error norm reached the threshold.
    Bound { error: f64 },
    /// Output differs from the cascaded-subtraction reference.
    Oracle,
    /// An output amplitude is not a nonzero multiple of the threshold.
    Multiple { amplitude: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    /// Seed that regenerates the offending train via [`selftest_train`].
    pub seed: u64,
    pub threshold: f64,
    pub alpha: LeakRate,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, Default)]
pub struct SelftestReport {
    pub bound_checks: usize,
    pub oracle_checks: usize,
    pub violations: Vec<Violation>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, pred: impl Fn(&ViolationKind) -> bool) -> usize {
        self.violations.iter().filter(|v| pred(&v.kind)).count()
    }
}

/// Train for one replay seed, with amplitudes in `[-half_range, half_range]`
/// (units of the threshold) and length uniform in `1..=max_spikes`.
pub fn selftest_train(seed: u64, half_range: f64, max_spikes: usize) -> SpikeTrain {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=max_spikes.max(1));
    sample_train(
        &mut rng,
        n,
        half_range,
        Spacing::Unit,
        AmplitudeLaw::Uniform,
    )
}

/// True when `lhs` and `rhs` have identical times and amplitudes within `tol`.
pub fn same_train(lhs: &SpikeTrain, rhs: &SpikeTrain, tol: f64) -> bool {
    lhs.len() == rhs.len()
        && lhs
            .iter()
            .zip(rhs)
            .all(|(a, b)| a.time == b.time && (a.amplitude - b.amplitude).abs() <= tol)
}

/// Nearest integer to `amplitude / threshold`, if it is nonzero and within
/// tolerance.
pub fn integer_multiple(amplitude: f64, threshold: f64) -> Option<f64> {
    let k = (amplitude / threshold).round();
    (k != 0.0 && (amplitude - k * threshold).abs() <= AMPLITUDE_TOL * threshold).then_some(k)
}

fn check_one(config: &SelftestConfig, seed: u64) -> (usize, usize, Vec<Violation>) {
    let base = selftest_train(seed, config.half_range, config.max_spikes);
    let mut found = Vec::new();
    let (mut bounds, mut oracles) = (0, 0);
    for threshold in THRESHOLD_GRID {
        let train = base.scale(threshold).expect("finite scale");
        for alpha in ALPHA_GRID {
            let lif = LifConfig::new(threshold, alpha, config.mode).expect("valid threshold");
            let mut flag = |kind| {
                found.push(Violation {
                    seed,
                    threshold,
                    alpha,
                    kind,
                })
            };
            bounds += 1;
            let error = quantization_error(&train, &lif);
            if error >= threshold {
                flag(ViolationKind::Bound { error });
            }
            if config.mode == ResetMode::Mod {
                oracles += 1;
                let out = lif_transform(&train, &lif);
                let reference = cascade_oracle(&train, threshold, alpha).expect("valid threshold");
                if !same_train(&out, &reference, AMPLITUDE_TOL * threshold) {
                    flag(ViolationKind::Oracle);
                }
                if let Some(s) = out
                    .iter()
                    .find(|s| integer_multiple(s.amplitude, threshold).is_none())
                {
                    flag(ViolationKind::Multiple {
                        amplitude: s.amplitude,
                    });
                }
            }
        }
    }
    (bounds, oracles, found)
}

pub fn run_selftest(config: &SelftestConfig) -> SelftestReport {
    let results: Vec<_> = (0..config.trains as u64)
        .into_par_iter()
        .map(|i| check_one(config, derive_seed(config.seed, &[i])))
        .collect();
    let mut report = SelftestReport::default();
    for (b, o, v) in results {
        report.bound_checks += b;
        report.oracle_checks += o;
        report.violations.extend(v);
    }
    report
}
