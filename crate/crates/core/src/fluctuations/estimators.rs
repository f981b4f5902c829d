//! Monte Carlo estimators built on walk functionals: renewal counts of the
//! descending ladder, two-sided exit outcomes, and the decay rate of the
//! range-confinement probability.
//!
//! Each estimator has a per-path kernel (taking the stream for that one
//! path) and a serial driver that assigns path `i` the substream `i` of the
//! stream it was handed. Parallel callers can reproduce the driver exactly
//! by fanning the same substreams out across workers.

use crate::environment::StepModel;
use crate::mc::McEstimate;
use crate::norming::NormingError;
use crate::rng::RandomStream;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum EstimatorError {
    #[error("slope fit needs at least two points with enough survivors, found {fit_points}")]
    DegenerateFit { fit_points: usize },
    #[error(transparent)]
    Norming(#[from] NormingError),
}

/// Count of strict descending record levels in `[0, x]`, i.e. ladder
/// epochs with height `<= x`, counted until the walk first passes below
/// `-x`. The origin counts (its height is 0). Truncated paths report the
/// count seen so far.
pub fn renewal_count_one_path(
    model: &StepModel,
    x: f64,
    step_cap: u64,
    rng: &mut RandomStream,
) -> (u64, bool) {
    let mut v = 0.0f64;
    let mut record = 0.0f64;
    let mut count = 1u64;
    for _ in 0..step_cap {
        v += model.sample_step(rng);
        if v < record {
            if v < -x {
                return (count, false);
            }
            record = v;
            count += 1;
        }
    }
    (count, true)
}

/// Estimate of the expected number of record levels in `[0, x]`, the
/// renewal function of the descending ladder heights at `x`.
pub fn renewal_estimate(
    model: &StepModel,
    x: f64,
    n_paths: u64,
    step_cap: u64,
    rng: &RandomStream,
) -> McEstimate {
    let mut counts = Vec::with_capacity(n_paths as usize);
    let mut truncated = 0u64;
    for i in 0..n_paths {
        let mut path_rng = rng.substream(i);
        let (c, trunc) = renewal_count_one_path(model, x, step_cap, &mut path_rng);
        counts.push(c as f64);
        truncated += u64::from(trunc);
    }
    McEstimate::from_samples(&counts, rng.seed())
        .with_meta("x", x)
        .with_meta("step_cap", step_cap)
        .with_meta("truncated_paths", truncated)
}

/// Exit-threshold convention: `Open` exits the open band, i.e. requires a
/// strict overshoot (`Z > y` up, `Z < -x` down); `Closed` accepts touching
/// the levels (`Z >= y`, `Z <= -x`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExitVariant {
    Open,
    Closed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExitOutcome {
    UpFirst,
    DownFirst,
    /// The step budget ran out before either side was reached.
    Undecided,
}

/// Which side of the band `(-x, y)` the walk leaves first.
pub fn exit_outcome(
    model: &StepModel,
    x: f64,
    y: f64,
    variant: ExitVariant,
    max_steps: u64,
    rng: &mut RandomStream,
) -> ExitOutcome {
    assert!(x > 0.0 && y > 0.0, "band must surround the origin");
    let mut v = 0.0f64;
    for _ in 0..max_steps {
        v += model.sample_step(rng);
        let (up, down) = match variant {
            ExitVariant::Open => (v > y, v < -x),
            ExitVariant::Closed => (v >= y, v <= -x),
        };
        if up {
            return ExitOutcome::UpFirst;
        }
        if down {
            return ExitOutcome::DownFirst;
        }
    }
    ExitOutcome::Undecided
}

/// `P(exit up first)` over independent paths; undecided paths are excluded
/// from the proportion and counted in `meta.undecided`.
pub fn exit_probability(
    model: &StepModel,
    x: f64,
    y: f64,
    variant: ExitVariant,
    n_paths: u64,
    max_steps: u64,
    rng: &RandomStream,
) -> McEstimate {
    let mut up = 0u64;
    let mut decided = 0u64;
    for i in 0..n_paths {
        let mut path_rng = rng.substream(i);
        match exit_outcome(model, x, y, variant, max_steps, &mut path_rng) {
            ExitOutcome::UpFirst => {
                up += 1;
                decided += 1;
            }
            ExitOutcome::DownFirst => decided += 1,
            ExitOutcome::Undecided => {}
        }
    }
    McEstimate::from_indicator(up, decided.max(1), rng.seed())
        .with_meta("x", x)
        .with_meta("y", y)
        .with_meta("undecided", n_paths - decided)
}

/// Whether the walk's largest rise stays `<= x` for `v_steps` steps.
pub fn range_survives_one_path(
    model: &StepModel,
    v_steps: u64,
    x: f64,
    rng: &mut RandomStream,
) -> bool {
    let mut v = 0.0f64;
    let mut run_min = 0.0f64;
    for _ in 0..v_steps {
        v += model.sample_step(rng);
        run_min = run_min.min(v);
        if v - run_min > x {
            return false;
        }
    }
    true
}

/// One abscissa of the decay fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RangeDecayPoint {
    /// Walk length in steps.
    pub v: u64,
    /// `v / a^{-1}(x)`, the eigenvalue time scale.
    pub scaled: f64,
    pub survivors: u64,
    pub n: u64,
    /// `-log p_hat`; when no path survives this is the one-sided bound
    /// `log n` and `lower_bound_only` is set.
    pub neg_log_p: f64,
    pub se_neg_log_p: f64,
    pub lower_bound_only: bool,
    /// Whether the point entered the least-squares fit.
    pub in_fit: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangeDecay {
    /// Slope of `-log P(largest rise <= x by time v)` against `v/a^{-1}(x)`.
    pub slope: McEstimate,
    pub intercept: f64,
    pub points: Vec<RangeDecayPoint>,
}

/// Estimate the exponential decay rate of the range-confinement
/// probability. Points with fewer than `min_survivors` surviving paths (or
/// with every path surviving) are excluded from the fit but still reported;
/// the fit is plain least squares, with the slope's error propagated from
/// the per-point binomial errors.
pub fn estimate_range_decay(
    model: &StepModel,
    x: f64,
    v_grid: &[u64],
    n_per_point: u64,
    min_survivors: u64,
    rng: &RandomStream,
) -> Result<RangeDecay, EstimatorError> {
    let a_inv_x = model.norming().a_inv(x)?;
    let mut points = Vec::with_capacity(v_grid.len());
    for (pi, &v) in v_grid.iter().enumerate() {
        let point_rng = rng.substream(pi as u64);
        let mut survivors = 0u64;
        for i in 0..n_per_point {
            let mut path_rng = point_rng.substream(i);
            survivors += u64::from(range_survives_one_path(model, v, x, &mut path_rng));
        }
        let scaled = v as f64 / a_inv_x;
        let (neg_log_p, se, bound_only) = if survivors == 0 {
            ((n_per_point as f64).ln(), f64::INFINITY, true)
        } else {
            let p = survivors as f64 / n_per_point as f64;
            (
                -p.ln(),
                ((1.0 - p) / (n_per_point as f64 * p)).sqrt(),
                false,
            )
        };
        let in_fit = !bound_only && survivors >= min_survivors && survivors < n_per_point;
        points.push(RangeDecayPoint {
            v,
            scaled,
            survivors,
            n: n_per_point,
            neg_log_p,
            se_neg_log_p: se,
            lower_bound_only: bound_only,
            in_fit,
        });
    }

    let fit: Vec<&RangeDecayPoint> = points.iter().filter(|p| p.in_fit).collect();
    if fit.len() < 2 {
        return Err(EstimatorError::DegenerateFit {
            fit_points: fit.len(),
        });
    }
    let m = fit.len() as f64;
    let u_bar = fit.iter().map(|p| p.scaled).sum::<f64>() / m;
    let y_bar = fit.iter().map(|p| p.neg_log_p).sum::<f64>() / m;
    let s_uu: f64 = fit.iter().map(|p| (p.scaled - u_bar).powi(2)).sum();
    let slope_val: f64 = fit
        .iter()
        .map(|p| (p.scaled - u_bar) * (p.neg_log_p - y_bar))
        .sum::<f64>()
        / s_uu;
    let slope_se: f64 = fit
        .iter()
        .map(|p| ((p.scaled - u_bar) / s_uu * p.se_neg_log_p).powi(2))
        .sum::<f64>()
        .sqrt();
    let intercept = y_bar - slope_val * u_bar;
    let slope = McEstimate {
        mean: slope_val,
        std_error: slope_se,
        n: fit.iter().map(|p| p.n).sum(),
        seed: rng.seed(),
        meta: Default::default(),
    }
    .with_meta("x", x)
    .with_meta("fit_points", fit.len() as u64)
    .with_meta("n_per_point", n_per_point);
    Ok(RangeDecay {
        slope,
        intercept,
        points,
    })
}
