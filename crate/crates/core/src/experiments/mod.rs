//! Seeded Monte-Carlo studies of the quantization error.
//!
//! Every `(mode, alpha, n, run)` trial draws its train from its own RNG
//! substream, keyed by a hash of the base seed and the trial coordinates.
//! Trials can therefore run in any order (or in parallel) and any single cell
//! can be replayed on its own.

mod stats;

pub use stats::{box_stats, quantile_sorted, BoxStats};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Normal, Uniform};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::alexiewicz::LeakRate;
use crate::error::{Error, Result};
use crate::lif::{quantization_error, LifConfig, ResetMode};
use crate::spike::{Spike, SpikeTrain};

/// Inter-spike interval policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    /// Spikes at `t = 0, 1, ..., n - 1`.
    #[default]
    Unit,
    /// First spike at 0, then exponential gaps with rate 1.
    Poisson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AmplitudeLaw {
    /// i.i.d. uniform on `[-r, r]`.
    #[default]
    Uniform,
    /// Normal with sigma `r / 2`, redrawn until it lands in `[-r, r]`.
    Gauss,
}

/// Grid of Monte-Carlo trials. Absent JSON fields take the defaults below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub runs: usize,
    pub spike_counts: Vec<usize>,
    /// Amplitude half range in units of the threshold.
    pub amplitude_half_range: f64,
    pub threshold: f64,
    pub alphas: Vec<LeakRate>,
    pub modes: Vec<ResetMode>,
    pub seed: u64,
    pub spacing: Spacing,
    pub amplitude_law: AmplitudeLaw,
}

pub const DEFAULT_SPIKE_COUNTS: [usize; 5] = [10, 50, 100, 500, 1000];

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            runs: 100,
            spike_counts: DEFAULT_SPIKE_COUNTS.to_vec(),
            amplitude_half_range: 1.0,
            threshold: 1.0,
            alphas: vec![LeakRate::Finite(1.0), LeakRate::Finite(0.1)],
            modes: ResetMode::ALL.to_vec(),
            seed: 42,
            spacing: Spacing::Unit,
            amplitude_law: AmplitudeLaw::Uniform,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::Config(msg.to_string()));
        if self.runs == 0 {
            return fail("runs must be at least 1");
        }
        if self.spike_counts.is_empty() {
            return fail("spike_counts must not be empty");
        }
        if self.spike_counts.contains(&0) {
            return fail("spike_counts must be positive");
        }
        if !(self.amplitude_half_range.is_finite() && self.amplitude_half_range > 0.0) {
            return fail("amplitude_half_range must be positive");
        }
        if !(self.threshold.is_finite() && self.threshold > 0.0) {
            return fail("threshold must be positive");
        }
        if self.alphas.is_empty() {
            return fail("alphas must not be empty");
        }
        if self.modes.is_empty() {
            return fail("modes must not be empty");
        }
        Ok(())
    }
}

/// One trial outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRecord {
    pub mode: ResetMode,
    pub alpha: LeakRate,
    pub n: usize,
    pub run: usize,
    pub error_norm: f64,
}

/// Summary of all runs in one `(mode, alpha, n)` cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub mode: ResetMode,
    pub alpha: LeakRate,
    pub n: usize,
    pub mean: f64,
    pub max: f64,
    /// Runs whose error reached the threshold.
    pub violations: usize,
    pub stats: BoxStats,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Hashes a base seed together with a list of coordinates.
pub fn derive_seed(seed: u64, coords: &[u64]) -> u64 {
    coords
        .iter()
        .fold(splitmix64(seed), |h, &c| splitmix64(h ^ splitmix64(c)))
}

fn alpha_key(alpha: LeakRate) -> u64 {
    match alpha {
        // +0.0 and -0.0 are the same leak rate
        LeakRate::Finite(0.0) => 0,
        LeakRate::Finite(v) => v.to_bits(),
        LeakRate::Infinite => u64::MAX,
    }
}

/// Seed of the RNG substream for one trial.
pub fn trial_seed(seed: u64, mode: ResetMode, alpha: LeakRate, n: usize, run: usize) -> u64 {
    derive_seed(
        seed,
        &[mode.ordinal(), alpha_key(alpha), n as u64, run as u64],
    )
}

/// Draws `n` spikes with the given spacing and amplitude law.
pub fn sample_train<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    half_range: f64,
    spacing: Spacing,
    law: AmplitudeLaw,
) -> SpikeTrain {
    assert!(half_range.is_finite() && half_range > 0.0);
    let uniform = Uniform::new_inclusive(-half_range, half_range).expect("valid range");
    let normal = Normal::new(0.0, half_range / 2.0).expect("valid sigma");

    let mut time = 0.0;
    let mut spikes = Vec::with_capacity(n);
    for i in 0..n {
        if i > 0 {
            time = match spacing {
                Spacing::Unit => i as f64,
                Spacing::Poisson => time + Distribution::<f64>::sample(&Exp1, rng),
            };
        }
        let amplitude: f64 = match law {
            AmplitudeLaw::Uniform => uniform.sample(rng),
            AmplitudeLaw::Gauss => loop {
                let x: f64 = normal.sample(rng);
                if x.abs() <= half_range {
                    break x;
                }
            },
        };
        spikes.push(Spike::new(time, amplitude));
    }
    // a vanishing Poisson gap can produce a tie, which from_events merges
    SpikeTrain::from_events(spikes).expect("finite samples")
}

/// Uniform amplitudes on `[-half_range, half_range]`, fully determined by `seed`.
pub fn random_train(n: usize, half_range: f64, seed: u64, spacing: Spacing) -> SpikeTrain {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_train(&mut rng, n, half_range, spacing, AmplitudeLaw::Uniform)
}

/// Generates the train used by one trial.
pub fn trial_train(
    config: &ExperimentConfig,
    mode: ResetMode,
    alpha: LeakRate,
    n: usize,
    run: usize,
) -> SpikeTrain {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(config.seed, mode, alpha, n, run));
    sample_train(
        &mut rng,
        n,
        config.amplitude_half_range * config.threshold,
        config.spacing,
        config.amplitude_law,
    )
}

/// Runs every trial of the grid.
///
/// Rows are ordered by mode, alpha and n in config order, then by run index,
/// independent of how the work was scheduled.
pub fn run_trials(config: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    config.validate()?;
    let mut jobs = Vec::new();
    for &mode in &config.modes {
        for &alpha in &config.alphas {
            for &n in &config.spike_counts {
                jobs.extend((0..config.runs).map(|run| (mode, alpha, n, run)));
            }
        }
    }
    jobs.into_par_iter()
        .map(|(mode, alpha, n, run)| {
            let lif = LifConfig::new(config.threshold, alpha, mode)?;
            let train = trial_train(config, mode, alpha, n, run);
            Ok(TrialRecord {
                mode,
                alpha,
                n,
                run,
                error_norm: quantization_error(&train, &lif),
            })
        })
        .collect()
}

/// Groups consecutive rows of the same cell and summarizes each group.
pub fn summarize(records: &[TrialRecord], threshold: f64) -> Result<Vec<CellSummary>> {
    let same_cell = |a: &TrialRecord, b: &TrialRecord| {
        a.mode == b.mode && alpha_key(a.alpha) == alpha_key(b.alpha) && a.n == b.n
    };
    records
        .chunk_by(same_cell)
        .map(|cell| {
            let errors: Vec<f64> = cell.iter().map(|r| r.error_norm).collect();
            let stats = box_stats(&errors)?;
            Ok(CellSummary {
                mode: cell[0].mode,
                alpha: cell[0].alpha,
                n: cell[0].n,
                mean: errors.iter().sum::<f64>() / errors.len() as f64,
                max: errors.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                violations: errors.iter().filter(|&&e| e >= threshold).count(),
                stats,
            })
        })
        .collect()
}
