//! Random potentials: step models, two-sided environments, and the
//! translation between a potential and the jump-rate field of the walk that
//! lives in it.
//!
//! An [`Environment`] is a two-sided integer-indexed walk `V` with
//! `V_0 = 0`, extended to real arguments as a step function (right
//! continuous for `x >= 0`, left continuous for `x <= 0`). It is built by
//! drawing iid steps from a [`StepModel`]; the leftward steps are the
//! negated draws of an independent sequence, which makes
//! `(-V_{-n})_{n >= 0}` an independent copy of `(V_n)_{n >= 0}` in law.
//!
//! The walk in this potential steps right from site `n` with probability
//! `omega_n = 1 / (1 + exp(V_{n+1} - V_n))`, so the potential's descents
//! are the walk's drifts. [`env_to_omega`] and [`omega_to_env`] convert
//! losslessly (up to floating-point rounding of `ln`/`exp`) in both
//! directions.

use crate::norming::NormingFunctions;
use crate::rng::{RandomStream, StreamKey};
use crate::stable::StableLaw;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum EnvError {
    #[error("position {0} outside the built environment")]
    OutOfSpan(f64),
    #[error("jump rate {value} at site {site} outside (0, 1)")]
    InvalidOmega { site: i64, value: f64 },
    #[error("the two step models must share a stability index")]
    NormingMismatch,
    #[error("environment must have positive half-length")]
    ZeroLength,
    #[error("invalid step-model parameter: {0}")]
    InvalidModel(String),
}

/// Distribution of one potential step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    /// Steps drawn exactly from a strictly stable law.
    ExactStable(StableLaw),
    /// Steps with Pareto tails: `P(|step| > x) ~ x^{-alpha}`, sign `+` with
    /// probability `p`. Centered to mean zero when `alpha > 1`.
    ParetoTail { alpha: f64, p: f64, scale: f64 },
    /// Two-point log-odds steps: the jump rate at each site is `omega` or
    /// `1 - omega` with equal probability, so the step is `+-|log((1 -
    /// omega)/omega)|`.
    SinaiTwoPoint { omega: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepModel {
    kind: StepKind,
    norming: NormingFunctions,
}

impl StepModel {
    pub fn exact_stable(law: StableLaw) -> Self {
        Self {
            kind: StepKind::ExactStable(law),
            norming: law.norming(),
        }
    }

    /// Standard Gaussian-step potential (variance 2 per step).
    pub fn gaussian() -> Self {
        Self::exact_stable(StableLaw::gaussian(1.0).expect("unit scale"))
    }

    pub fn pareto_tail(alpha: f64, p: f64, scale: f64) -> Result<Self, EnvError> {
        if !(alpha > 0.0 && alpha < 2.0) {
            return Err(EnvError::InvalidModel(format!(
                "pareto tail index {alpha} outside (0, 2)"
            )));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(EnvError::InvalidModel(format!(
                "sign probability {p} outside [0, 1]"
            )));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(EnvError::InvalidModel(format!("scale {scale} not positive")));
        }
        if alpha == 1.0 && p != 0.5 {
            return Err(EnvError::InvalidModel(
                "tail index 1 supported only with balanced signs".into(),
            ));
        }
        // Positivity parameter of the limit law, from the tail balance
        // beta = 2p - 1 through the characteristic-exponent slope.
        let zeta = (2.0 * p - 1.0) * (PI * alpha / 2.0).tan();
        let p_limit = 0.5 + zeta.atan() / (PI * alpha);
        let norming = NormingFunctions::new(alpha, (1.0 - p_limit).clamp(1e-12, 1.0 - 1e-12))
            .map_err(|e| EnvError::InvalidModel(e.to_string()))?;
        Ok(Self {
            kind: StepKind::ParetoTail { alpha, p, scale },
            norming,
        })
    }

    /// Two-point environment; `omega = 1/2` is the flat potential.
    pub fn sinai_two_point(omega: f64) -> Result<Self, EnvError> {
        if !(omega > 0.0 && omega < 1.0) {
            return Err(EnvError::InvalidModel(format!(
                "jump rate {omega} outside (0, 1)"
            )));
        }
        Ok(Self {
            kind: StepKind::SinaiTwoPoint { omega },
            norming: NormingFunctions::brownian(),
        })
    }

    /// The two-point model whose log-odds magnitude is `sqrt(2)`, so the
    /// potential has variance 2 per step and the standardized Gaussian
    /// norming applies exactly.
    pub fn sinai_standard() -> Self {
        let omega = 1.0 / (1.0 + std::f64::consts::SQRT_2.exp());
        Self::sinai_two_point(omega).expect("rate in (0, 1)")
    }

    pub fn kind(&self) -> &StepKind {
        &self.kind
    }

    pub fn norming(&self) -> NormingFunctions {
        self.norming
    }

    pub fn sample_step(&self, rng: &mut RandomStream) -> f64 {
        match self.kind {
            StepKind::ExactStable(law) => law.sample(rng),
            StepKind::ParetoTail { alpha, p, scale } => {
                let sign = if rng.random::<f64>() < p { 1.0 } else { -1.0 };
                let u: f64 = loop {
                    let u = rng.random::<f64>();
                    if u > 0.0 {
                        break u;
                    }
                };
                let magnitude = scale * u.powf(-1.0 / alpha);
                let center = if alpha > 1.0 {
                    (2.0 * p - 1.0) * scale * alpha / (alpha - 1.0)
                } else {
                    0.0
                };
                sign * magnitude - center
            }
            StepKind::SinaiTwoPoint { omega } => {
                let c = ((1.0 - omega) / omega).ln().abs();
                if rng.random::<f64>() < 0.5 {
                    c
                } else {
                    -c
                }
            }
        }
    }
}

/// Jump-rate field of a finite environment: `right[k]` is the rate at site
/// `k` for `k = 0 .. half-1`, `left[j]` the rate at site `-(j+1)` for
/// `j = 0 .. half-1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmegaField {
    pub right: Vec<f64>,
    pub left: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "EnvironmentRepr", into = "EnvironmentRepr")]
pub struct Environment {
    model: StepModel,
    provenance: Option<StreamKey>,
    steps_pos: Vec<f64>,
    steps_neg: Vec<f64>,
    v_pos: Vec<f64>,
    v_neg: Vec<f64>,
}

/// Serialized form: steps only; the cumulative sums are rebuilt on load, so
/// a round trip is bit-exact on the steps and therefore on the potential.
#[derive(Serialize, Deserialize)]
struct EnvironmentRepr {
    model: StepModel,
    provenance: Option<StreamKey>,
    steps_pos: Vec<f64>,
    steps_neg: Vec<f64>,
}

impl From<EnvironmentRepr> for Environment {
    fn from(r: EnvironmentRepr) -> Self {
        Environment::from_steps(r.model, r.provenance, r.steps_pos, r.steps_neg)
    }
}

impl From<Environment> for EnvironmentRepr {
    fn from(e: Environment) -> Self {
        EnvironmentRepr {
            model: e.model,
            provenance: e.provenance,
            steps_pos: e.steps_pos,
            steps_neg: e.steps_neg,
        }
    }
}

/// Draw a two-sided environment of the given half-length: `half_length`
/// rightward steps first, then `half_length` leftward steps.
pub fn build_environment(
    model: &StepModel,
    half_length: usize,
    rng: &mut RandomStream,
) -> Result<Environment, EnvError> {
    build_environment_asymmetric(model, model, half_length, rng)
}

/// Two-sided environment whose left side is an independent walk from its
/// own step model. Both models must share a stability index so one norming
/// sequence applies.
pub fn build_environment_asymmetric(
    model_pos: &StepModel,
    model_neg: &StepModel,
    half_length: usize,
    rng: &mut RandomStream,
) -> Result<Environment, EnvError> {
    if half_length == 0 {
        return Err(EnvError::ZeroLength);
    }
    if model_pos.norming().alpha() != model_neg.norming().alpha() {
        return Err(EnvError::NormingMismatch);
    }
    let provenance = Some(rng.key());
    let steps_pos: Vec<f64> = (0..half_length).map(|_| model_pos.sample_step(rng)).collect();
    let steps_neg: Vec<f64> = (0..half_length)
        .map(|_| -model_neg.sample_step(rng))
        .collect();
    Ok(Environment::from_steps(
        *model_pos, provenance, steps_pos, steps_neg,
    ))
}

impl Environment {
    fn from_steps(
        model: StepModel,
        provenance: Option<StreamKey>,
        steps_pos: Vec<f64>,
        steps_neg: Vec<f64>,
    ) -> Self {
        let mut v_pos = Vec::with_capacity(steps_pos.len() + 1);
        v_pos.push(0.0);
        for (k, s) in steps_pos.iter().enumerate() {
            v_pos.push(v_pos[k] + s);
        }
        let mut v_neg = Vec::with_capacity(steps_neg.len() + 1);
        v_neg.push(0.0);
        for (k, s) in steps_neg.iter().enumerate() {
            v_neg.push(v_neg[k] + s);
        }
        Self {
            model,
            provenance,
            steps_pos,
            steps_neg,
            v_pos,
            v_neg,
        }
    }

    pub fn model(&self) -> &StepModel {
        &self.model
    }

    /// Key of the stream the steps were drawn from; `None` for environments
    /// reconstructed from a jump-rate field.
    pub fn provenance(&self) -> Option<StreamKey> {
        self.provenance
    }

    pub fn half_length(&self) -> usize {
        self.steps_pos.len()
    }

    /// `V_k` for integer `k` in `[-half, half]`.
    pub fn potential_at_site(&self, k: i64) -> Result<f64, EnvError> {
        let half = self.half_length() as i64;
        if k < -half || k > half {
            return Err(EnvError::OutOfSpan(k as f64));
        }
        Ok(if k >= 0 {
            self.v_pos[k as usize]
        } else {
            self.v_neg[(-k) as usize]
        })
    }

    /// Step evaluation of the potential: `V(x) = V_floor(x)` for `x >= 0`,
    /// `V(x) = V_ceil(x)` for `x <= 0`.
    pub fn potential_at(&self, x: f64) -> Result<f64, EnvError> {
        let half = self.half_length() as f64;
        if !(x.abs() <= half) {
            return Err(EnvError::OutOfSpan(x));
        }
        Ok(if x >= 0.0 {
            self.v_pos[x.floor() as usize]
        } else {
            self.v_neg[(-x).floor() as usize]
        })
    }

    /// `V_{k+1} - V_k` for `k` in `[-half, half - 1]`.
    pub fn potential_step(&self, k: i64) -> Result<f64, EnvError> {
        let half = self.half_length() as i64;
        if k < -half || k >= half {
            return Err(EnvError::OutOfSpan(k as f64));
        }
        Ok(if k >= 0 {
            self.steps_pos[k as usize]
        } else {
            -self.steps_neg[(-k - 1) as usize]
        })
    }

    /// Jump rate at site `k`: `1 / (1 + exp(V_{k+1} - V_k))`.
    pub fn omega(&self, k: i64) -> Result<f64, EnvError> {
        Ok(1.0 / (1.0 + self.potential_step(k)?.exp()))
    }
}

/// Jump-rate field of the whole environment.
pub fn env_to_omega(env: &Environment) -> OmegaField {
    let half = env.half_length() as i64;
    let right: Vec<f64> = (0..half).map(|k| env.omega(k).expect("in span")).collect();
    let left: Vec<f64> = (1..=half)
        .map(|j| env.omega(-j).expect("in span"))
        .collect();
    OmegaField { right, left }
}

/// Rebuild the potential a jump-rate field encodes. The result has no
/// stream provenance; the supplied model records which family the rates
/// were meant to come from.
pub fn omega_to_env(model: &StepModel, field: &OmegaField) -> Result<Environment, EnvError> {
    if field.right.len() != field.left.len() || field.right.is_empty() {
        return Err(EnvError::ZeroLength);
    }
    let check = |site: i64, value: f64| -> Result<f64, EnvError> {
        if value > 0.0 && value < 1.0 {
            Ok(value)
        } else {
            Err(EnvError::InvalidOmega { site, value })
        }
    };
    let mut steps_pos = Vec::with_capacity(field.right.len());
    for (k, &w) in field.right.iter().enumerate() {
        let w = check(k as i64, w)?;
        steps_pos.push(((1.0 - w) / w).ln());
    }
    let mut steps_neg = Vec::with_capacity(field.left.len());
    for (j, &w) in field.left.iter().enumerate() {
        let w = check(-(j as i64) - 1, w)?;
        steps_neg.push(-((1.0 - w) / w).ln());
    }
    Ok(Environment::from_steps(*model, None, steps_pos, steps_neg))
}
