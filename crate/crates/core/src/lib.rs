//! Leaky integrate-and-fire neurons viewed as quantizers of spike trains.
//!
//! * [`spike`]: spike trains and their linear algebra.
//! * [`alexiewicz`]: the leaky Alexiewicz norm used to measure quantization error.
//! * [`lif`]: the LIF operator with reset-to-zero, reset-by-subtraction and
//!   reset-to-mod re-initialization.
//! * [`experiments`]: seeded Monte-Carlo error studies and box statistics.
//! * [`io`], [`svg`], [`cli`], [`selftest`]: command-line front end.

pub mod alexiewicz;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod io;
pub mod lif;
pub mod selftest;
pub mod spike;
pub mod svg;

pub use alexiewicz::{alexiewicz_norm, decay_weight, oplus_fold, prefix_sums, LeakRate, PseudoSum};
pub use error::{Error, Result};
pub use experiments::{
    box_stats, random_train, run_trials, BoxStats, ExperimentConfig, TrialRecord,
};
pub use lif::{
    cascade_oracle, lif_run, lif_transform, membrane_trace, quantization_error, truncate_quantize,
    LifConfig, MembraneState, Neuron, ResetMode,
};
pub use spike::{Spike, SpikeTrain};
