//! Monte Carlo estimate container and the small statistics helpers shared
//! by estimators and experiment drivers.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A scalar Monte Carlo estimate with its provenance.
///
/// `meta` carries run descriptors that matter for reproduction or for
/// judging bias (mesh, truncation counts, retry counts, variant tags).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n: u64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub meta: BTreeMap<String, serde_json::Value>,
}

impl McEstimate {
    /// Mean and standard error of iid samples, summed pairwise in the given
    /// order so the result is independent of how work was scheduled.
    pub fn from_samples(samples: &[f64], seed: u64) -> Self {
        let (mean, se) = mean_and_se(samples);
        Self {
            mean,
            std_error: se,
            n: samples.len() as u64,
            seed,
            meta: BTreeMap::new(),
        }
    }

    /// Binomial proportion estimate with the usual `sqrt(p(1-p)/n)` error.
    pub fn from_indicator(successes: u64, n: u64, seed: u64) -> Self {
        assert!(n > 0, "indicator estimate needs at least one trial");
        let p = successes as f64 / n as f64;
        Self {
            mean: p,
            std_error: (p * (1.0 - p) / n as f64).sqrt(),
            n,
            seed,
            meta: BTreeMap::new(),
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.meta.insert(key.to_owned(), value.into());
        self
    }
}

/// Pairwise (cascade) summation: error grows like log(n) rather than n, and
/// the result depends only on element order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        2 => xs[0] + xs[1],
        n if n <= 32 => xs.iter().sum(),
        n => {
            let (a, b) = xs.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

/// Two-pass mean and standard error of the mean.
pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    assert!(n > 0, "empty sample");
    let mean = pairwise_sum(xs) / n as f64;
    if n == 1 {
        return (mean, f64::INFINITY);
    }
    let sq: Vec<f64> = xs.iter().map(|x| (x - mean) * (x - mean)).collect();
    let var = pairwise_sum(&sq) / (n as f64 - 1.0);
    (mean, (var / n as f64).sqrt())
}

/// Linear-interpolation quantile (type 7) of an ascending-sorted slice.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "empty sample");
    assert!((0.0..=1.0).contains(&p), "quantile level out of range");
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = p * (n - 1) as f64;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
    }
}

/// One-sample Kolmogorov–Smirnov statistic of sorted data against a CDF.
pub fn ks_one_sample(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len();
    assert!(n > 0, "empty sample");
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        let lo = i as f64 / n as f64;
        let hi = (i + 1) as f64 / n as f64;
        d = d.max((f - lo).abs()).max((hi - f).abs());
    }
    d
}

/// Two-sample Kolmogorov–Smirnov statistic of two sorted samples.
///
/// Ties are consumed as whole blocks on both sides before the gap is
/// recorded; comparing mid-block would report a spurious discrepancy on
/// heavily discrete data.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    assert!(!a.is_empty() && !b.is_empty(), "empty sample");
    let (mut i, mut j) = (0usize, 0usize);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let mut d: f64 = 0.0;
    while i < a.len() || j < b.len() {
        let v = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) => x.min(y),
            (Some(&x), None) => x,
            (None, Some(&y)) => y,
            (None, None) => break,
        };
        while i < a.len() && a[i] <= v {
            i += 1;
        }
        while j < b.len() && b[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Standard error of the sample median from the order-statistic bracket
/// `[x_(r-k), x_(r+k)]` with `k = sqrt(n)/2`, i.e. a one-sigma binomial band.
pub fn median_with_se(sorted: &[f64]) -> (f64, f64) {
    let n = sorted.len();
    assert!(n >= 16, "median band needs a reasonable sample");
    let med = quantile_sorted(sorted, 0.5);
    let k = ((n as f64).sqrt() / 2.0).ceil() as usize;
    let r = n / 2;
    let lo = sorted[r.saturating_sub(k)];
    let hi = sorted[(r + k).min(n - 1)];
    (med, ((hi - lo) / 2.0).max(f64::MIN_POSITIVE))
}
