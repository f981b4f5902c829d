//! Path functionals over two-sided grid paths.
//!
//! Everything here is exact on the grid: windows `[0, a]` and `[-a, 0]`
//! contain precisely the grid points inside them, extrema and reflections
//! are computed over those points, and passage queries scan outward from
//! the origin. A passage that does not occur inside the observed span is
//! reported as [`Reach::SpanExhausted`] — a finite window can never certify
//! that a passage is infinite, so the two cases stay distinct in the type
//! rather than being folded into a float.

pub mod estimators;
pub mod ladder;

use crate::grid::{CadlagGrid, GridError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FluctError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("undershoot level {0} must be nonnegative")]
    NegativeLevel(f64),
}

/// Scan orientation for passage queries: `Forward` walks the window
/// `[0, span]`, `Backward` walks `[-span, 0]` (reported as a positive
/// distance from the origin).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Backward,
}

/// Outcome of a passage-type query on a finite span.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reach {
    Attained(f64),
    SpanExhausted,
}

impl Reach {
    pub fn value(self) -> Option<f64> {
        match self {
            Reach::Attained(t) => Some(t),
            Reach::SpanExhausted => None,
        }
    }

    pub fn is_attained(self) -> bool {
        matches!(self, Reach::Attained(_))
    }

    /// Float view: `SpanExhausted` maps to positive infinity.
    pub fn or_infinity(self) -> f64 {
        self.value().unwrap_or(f64::INFINITY)
    }
}

/// Running extrema of the forward window `[0, a]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extrema {
    pub sup: f64,
    pub inf: f64,
    pub sup_abs: f64,
}

pub fn running_extrema(path: &CadlagGrid, a: f64) -> Result<Extrema, FluctError> {
    let (lo, hi) = path.forward_indices(a)?;
    let vs = &path.values()[lo..=hi];
    let mut sup = f64::NEG_INFINITY;
    let mut inf = f64::INFINITY;
    for &v in vs {
        sup = sup.max(v);
        inf = inf.min(v);
    }
    Ok(Extrema {
        sup,
        inf,
        sup_abs: sup.abs().max(inf.abs()),
    })
}

/// The path reflected at its running infimum over `[0, a]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReflectedRange {
    /// Reflection at the window end: `Z_a - inf_{[0, a]} Z`.
    pub reflection: f64,
    /// Running sup of the reflection, i.e. the largest rise
    /// `max_{0 <= u <= v <= a} (Z_v - Z_u)`.
    pub sup_reflection: f64,
}

pub fn reflected_range(path: &CadlagGrid, a: f64) -> Result<ReflectedRange, FluctError> {
    let (lo, hi) = path.forward_indices(a)?;
    let mut run_min = f64::INFINITY;
    let mut reflection: f64 = 0.0;
    let mut sup_reflection: f64 = 0.0;
    for &v in &path.values()[lo..=hi] {
        run_min = run_min.min(v);
        reflection = v - run_min;
        sup_reflection = sup_reflection.max(reflection);
    }
    Ok(ReflectedRange {
        reflection,
        sup_reflection,
    })
}

/// First time the path reaches `level`, scanning outward from the origin.
///
/// For `level >= 0` the passage condition is `Z >= level`; for `level < 0`
/// it is `Z <= level`. Backward passages report the positive distance
/// `x` such that `Z_{-x}` satisfies the condition. Ties break toward the
/// origin (the first grid point scanned that qualifies).
pub fn first_passage(path: &CadlagGrid, level: f64, direction: Direction) -> Reach {
    let hit = |v: f64| {
        if level >= 0.0 {
            v >= level
        } else {
            v <= level
        }
    };
    let times = path.times();
    let values = path.values();
    let zero = path.zero_index();
    match direction {
        Direction::Forward => {
            for i in zero..times.len() {
                if hit(values[i]) {
                    return Reach::Attained(times[i]);
                }
            }
            Reach::SpanExhausted
        }
        Direction::Backward => {
            for i in (0..=zero).rev() {
                if hit(values[i]) {
                    return Reach::Attained(-times[i]);
                }
            }
            Reach::SpanExhausted
        }
    }
}

/// Depth below the origin accumulated by the time the path first reaches
/// `level >= 0`: `level - inf` over the window swept up to the passage.
/// `SpanExhausted` propagates from the passage query.
pub fn undershoot(path: &CadlagGrid, level: f64, direction: Direction) -> Result<Reach, FluctError> {
    if !(level >= 0.0) {
        return Err(FluctError::NegativeLevel(level));
    }
    let passage = first_passage(path, level, direction);
    let t = match passage {
        Reach::Attained(t) => t,
        Reach::SpanExhausted => return Ok(Reach::SpanExhausted),
    };
    let (lo, hi) = match direction {
        Direction::Forward => path.forward_indices(t)?,
        Direction::Backward => path.backward_indices(t)?,
    };
    let inf = path.values()[lo..=hi]
        .iter()
        .fold(f64::INFINITY, |m, &v| m.min(v));
    Ok(Reach::Attained(level - inf))
}

/// Envelope functional controlling the quenched hitting scale at `a`:
/// the larger of the forward largest rise over `[0, a]` and the backward
/// undershoot at the forward running maximum.
pub fn hitting_envelope(path: &CadlagGrid, a: f64) -> Result<Reach, FluctError> {
    let sup = running_extrema(path, a)?.sup;
    let rise = reflected_range(path, a)?.sup_reflection;
    match undershoot(path, sup, Direction::Backward)? {
        Reach::Attained(u) => Ok(Reach::Attained(u.max(rise))),
        Reach::SpanExhausted => Ok(Reach::SpanExhausted),
    }
}
