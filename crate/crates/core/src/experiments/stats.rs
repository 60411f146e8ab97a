//! Box-and-whisker summaries.

use crate::error::{Error, Result};

/// Quartiles use linear interpolation between order statistics (R's type 7);
/// whiskers extend to the most extreme samples within 1.5 IQR of the box.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxStats {
    pub n_samples: usize,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub whisker_low: f64,
    pub whisker_high: f64,
    pub outliers: Vec<f64>,
}

impl BoxStats {
    pub fn iqr(&self) -> f64 {
        self.q3 - self.q1
    }
}

/// Linear-interpolation quantile of an ascending slice, `p` in `[0, 1]`.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn box_stats(samples: &[f64]) -> Result<BoxStats> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    if let Some(&bad) = samples.iter().find(|x| !x.is_finite()) {
        return Err(Error::NonFiniteValue(bad));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);

    let q1 = quantile_sorted(&sorted, 0.25);
    let median = quantile_sorted(&sorted, 0.5);
    let q3 = quantile_sorted(&sorted, 0.75);
    let iqr = q3 - q1;
    let (lo_fence, hi_fence) = (q1 - 1.5 * iqr, q3 + 1.5 * iqr);

    let inside = || {
        sorted
            .iter()
            .copied()
            .filter(|&x| x >= lo_fence && x <= hi_fence)
    };
    // the box itself always lies inside the fences, so `inside` is nonempty
    let whisker_low = inside().next().unwrap_or(q1);
    let whisker_high = inside().next_back().unwrap_or(q3);
    let outliers = sorted
        .iter()
        .copied()
        .filter(|&x| x < whisker_low || x > whisker_high)
        .collect();

    Ok(BoxStats {
        n_samples: sorted.len(),
        median,
        q1,
        q3,
        whisker_low,
        whisker_high,
        outliers,
    })
}
