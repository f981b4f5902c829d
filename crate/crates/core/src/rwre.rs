//! Nearest-neighbour walk in a random jump-rate field and its ensemble
//! statistics.
//!
//! The chain starts at the origin and steps right from site `k` with
//! probability `omega_k`. Everything downstream of the trajectory loop
//! (annealed supremum samples, the scaled quantile table, the liminf
//! classifiers) consumes only `WalkStats`, never the path itself.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::environment::{build_environment, EnvError, Environment, StepModel};
use crate::mc::quantile_sorted;
use crate::rng::RandomStream;
use rand::Rng;

/// Doublings attempted before a walk that keeps escaping its environment
/// span is reported as an error.
const MAX_SPAN_DOUBLINGS: u32 = 6;

#[derive(Debug, Error)]
pub enum RwreError {
    #[error("walk reached site {site} after {steps} steps, outside the built span")]
    Range { site: i64, steps: u64 },
    #[error("walk escaped a span of {half} twice doubled {retries} times")]
    SpanExhausted { half: usize, retries: u32 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("critical exponent: classification needs the normal-attraction condition")]
    CriticalCase,
    #[error(transparent)]
    Env(#[from] EnvError),
}

/// Exact summary of one realized trajectory.
///
/// `min <= 0 <= max` always holds because the walk starts at the origin,
/// and `max_abs = max(max, -min)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkStats {
    pub n: u64,
    pub final_position: i64,
    pub max: i64,
    pub min: i64,
    pub max_abs: i64,
}

/// Runs the chain for `n` steps on a fixed environment.
///
/// The jump rate at site `k` must be available for every site the walk
/// visits; the environment is never extended here. A walk that reaches a
/// site without a rate gets `Range` and the caller decides whether to
/// rebuild on a larger span.
pub fn rwre_trajectory(
    env: &Environment,
    n: u64,
    rng: &mut RandomStream,
) -> Result<WalkStats, RwreError> {
    let half = env.half_length() as i64;
    // One exp() per site up front instead of one per step.
    let table: Vec<f64> = (-half..half)
        .map(|k| env.omega(k).expect("site within the built span"))
        .collect();
    let mut z: i64 = 0;
    let mut max: i64 = 0;
    let mut min: i64 = 0;
    for step in 0..n {
        if z < -half || z >= half {
            return Err(RwreError::Range { site: z, steps: step });
        }
        let w = table[(z + half) as usize];
        if rng.random::<f64>() < w {
            z += 1;
            if z > max {
                max = z;
            }
        } else {
            z -= 1;
            if z < min {
                min = z;
            }
        }
    }
    Ok(WalkStats {
        n,
        final_position: z,
        max,
        min,
        max_abs: max.max(-min),
    })
}

/// Annealed sample of the normalized running supremum, with the bookkeeping
/// the estimate needs to be reproduced.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnnealedSample {
    /// `max(sup Z, 0) / a^{-1}(log n)` per walk, in walk order.
    pub normalized_sup: Vec<f64>,
    /// The common denominator `a^{-1}(log n)`.
    pub scale: f64,
    pub n: u64,
    /// Walks that escaped their span and were redrawn on a doubled one.
    pub retries: u64,
    pub seed: u64,
}

fn initial_half_length(n: u64) -> usize {
    let n = n as f64;
    (4.0 * (n * n.ln()).sqrt()).ceil() as usize
}

/// Draws `n_walks` independent (environment, walk) pairs and returns
/// `sup_{k<=n} Z_k / a^{-1}(log n)` for each.
///
/// A walk that runs off its environment is redrawn from a fresh substream
/// on a doubled span, up to [`MAX_SPAN_DOUBLINGS`] times; the redraw count
/// is reported, not hidden. Each walk owns a substream keyed by its index,
/// so the sample does not depend on evaluation order.
pub fn annealed_sup_distribution(
    model: &StepModel,
    n: u64,
    n_walks: usize,
    rng: &mut RandomStream,
) -> Result<AnnealedSample, RwreError> {
    if n < 1_000 {
        return Err(RwreError::InvalidParameter(format!(
            "horizon {n} below 1000; the normalization is meaningless there"
        )));
    }
    if n_walks == 0 {
        return Err(RwreError::InvalidParameter("need at least one walk".into()));
    }
    let scale = model
        .norming()
        .a_inv((n as f64).ln())
        .expect("log n > 1 for n >= 1000");
    let base_half = initial_half_length(n);
    let mut samples = Vec::with_capacity(n_walks);
    let mut retries: u64 = 0;
    for walk in 0..n_walks {
        let walk_stream = rng.substream(walk as u64);
        let mut attempt: u32 = 0;
        let stats = loop {
            let half = base_half << attempt;
            let mut env_rng = walk_stream.substream(2 * attempt as u64);
            let mut step_rng = walk_stream.substream(2 * attempt as u64 + 1);
            let env = build_environment(model, half, &mut env_rng)?;
            match rwre_trajectory(&env, n, &mut step_rng) {
                Ok(stats) => break stats,
                Err(RwreError::Range { .. }) => {
                    if attempt == MAX_SPAN_DOUBLINGS {
                        return Err(RwreError::SpanExhausted {
                            half: base_half,
                            retries: attempt,
                        });
                    }
                    attempt += 1;
                    retries += 1;
                }
                Err(e) => return Err(e),
            }
        };
        samples.push(stats.max.max(0) as f64 / scale);
    }
    Ok(AnnealedSample {
        normalized_sup: samples,
        scale,
        n,
        retries,
        seed: rng.seed(),
    })
}

/// One quantile with an order-statistics confidence interval.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct QuantileBand {
    pub level: f64,
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
}

/// Quantile table row for one `(n, beta)` pair.
///
/// `limsup_scaled` carries the quantiles of
/// `sup / (a^{-1}(log n) * logloglog n)`; it does not depend on `beta`
/// and is repeated across the rows of one horizon so every row is
/// self-contained. `liminf_scaled` carries the quantiles of
/// `sup * (loglog n)^beta / a^{-1}(log n)`; at `beta = 0` this is the
/// plain convergence-in-law normalization.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnvelopeRow {
    pub n: u64,
    pub beta: f64,
    pub limsup_scaled: Vec<QuantileBand>,
    pub liminf_scaled: Vec<QuantileBand>,
}

/// Quantile levels reported by [`envelope_diagnostic`].
pub const ENVELOPE_QUANTILES: [f64; 5] = [0.1, 0.25, 0.5, 0.75, 0.9];

/// 95% order-statistics band around the `p`-quantile of a sorted sample.
fn quantile_band(sorted: &[f64], p: f64) -> QuantileBand {
    let n = sorted.len() as f64;
    let spread = 1.96 * (n * p * (1.0 - p)).sqrt();
    let at = |rank: f64| {
        let idx = rank.clamp(0.0, n - 1.0) as usize;
        sorted[idx]
    };
    QuantileBand {
        level: p,
        value: quantile_sorted(sorted, p),
        lo: at(n * p - spread),
        hi: at(n * p + spread),
    }
}

/// Empirical quantile table of the two scaled supremum families over a
/// grid of horizons.
///
/// For each horizon one annealed ensemble is drawn and reused for every
/// `beta`, so the rows of a horizon differ only in the deterministic
/// rescaling. Rows come out in `(n, beta)` lexicographic order, `n` outer.
pub fn envelope_diagnostic(
    model: &StepModel,
    n_grid: &[u64],
    beta_list: &[f64],
    n_walks: usize,
    rng: &mut RandomStream,
) -> Result<Vec<EnvelopeRow>, RwreError> {
    if n_grid.is_empty() || beta_list.is_empty() {
        return Err(RwreError::InvalidParameter(
            "need at least one horizon and one exponent".into(),
        ));
    }
    if let Some(&n) = n_grid.iter().find(|&&n| n > 10_000_000) {
        return Err(RwreError::InvalidParameter(format!(
            "horizon {n} above the 1e7 budget"
        )));
    }
    let mut rows = Vec::with_capacity(n_grid.len() * beta_list.len());
    for (i, &n) in n_grid.iter().enumerate() {
        let mut ens_rng = rng.substream(i as u64);
        let sample = annealed_sup_distribution(model, n, n_walks, &mut ens_rng)?;
        let loglog = (n as f64).ln().ln();
        let logloglog = loglog.ln();
        let mut limsup: Vec<f64> = sample
            .normalized_sup
            .iter()
            .map(|&s| s / logloglog)
            .collect();
        limsup.sort_by(f64::total_cmp);
        let limsup_scaled: Vec<QuantileBand> = ENVELOPE_QUANTILES
            .iter()
            .map(|&p| quantile_band(&limsup, p))
            .collect();
        for &beta in beta_list {
            let factor = loglog.powf(beta);
            let mut scaled: Vec<f64> = sample
                .normalized_sup
                .iter()
                .map(|&s| s * factor)
                .collect();
            scaled.sort_by(f64::total_cmp);
            rows.push(EnvelopeRow {
                n,
                beta,
                limsup_scaled: limsup_scaled.clone(),
                liminf_scaled: ENVELOPE_QUANTILES
                    .iter()
                    .map(|&p| quantile_band(&scaled, p))
                    .collect(),
            });
        }
    }
    Ok(rows)
}

/// Almost-sure liminf value of a scaled supremum: degenerate at zero or
/// at infinity, nothing in between.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LiminfClass {
    Zero,
    Infinite,
}

/// Classifies `liminf (loglog t)^beta * sup_{s<=t} Z_s / a^{-1}(log t)`
/// for a walk whose ladder exponent is `q`.
///
/// Below the critical exponent `1/q` the liminf vanishes, above it it is
/// infinite. Exactly at `1/q` the answer is infinite only under the
/// normal-attraction condition on the step law; without that flag the
/// critical case is refused rather than guessed.
pub fn liminf_power_classifier(
    beta: f64,
    q: f64,
    normal_attraction: bool,
) -> Result<LiminfClass, RwreError> {
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(RwreError::InvalidParameter(format!(
            "exponent beta = {beta} must be finite and nonnegative"
        )));
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(RwreError::InvalidParameter(format!(
            "ladder exponent q = {q} outside (0, 1)"
        )));
    }
    let critical = 1.0 / q;
    if beta < critical {
        Ok(LiminfClass::Zero)
    } else if beta > critical {
        Ok(LiminfClass::Infinite)
    } else if normal_attraction {
        Ok(LiminfClass::Infinite)
    } else {
        Err(RwreError::CriticalCase)
    }
}

/// Classifies `liminf (loglog t)^beta * sup_{s<=t} |Z_s| / a^{-1}(log t)`
/// for the two-sided-jumps regime, where the critical exponent is `1/2`
/// and the critical case itself vanishes.
pub fn liminf_sqrt_classifier(beta: f64) -> Result<LiminfClass, RwreError> {
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(RwreError::InvalidParameter(format!(
            "exponent beta = {beta} must be finite and nonnegative"
        )));
    }
    if beta <= 0.5 {
        Ok(LiminfClass::Zero)
    } else {
        Ok(LiminfClass::Infinite)
    }
}
