//! Norming (space-rescaling) functions and their inverses.
//!
//! The walk scale `a(x) = x^(1/alpha)` and the ladder-height scale
//! `b(x) = x^(1/q)` are regularly varying; only the pure power form is
//! implemented, which matches step models whose limit law is normalized
//! (slowly varying part constant). Both maps and both inverses are exposed
//! through one table so experiment output can reference them by name.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum NormingError {
    #[error("stability index {0} outside (0, 2]")]
    InvalidAlpha(f64),
    #[error("positivity parameter {0} outside (0, 1)")]
    InvalidLadderExponent(f64),
    #[error("argument {0} below the domain threshold 1")]
    Domain(f64),
}

/// Which of the four maps to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormingMap {
    Walk,
    WalkInverse,
    Ladder,
    LadderInverse,
}

/// The pair `(a, b)` of norming functions for a walk of index `alpha` whose
/// ladder-height tail has index `q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormingFunctions {
    alpha: f64,
    ladder_q: f64,
}

impl NormingFunctions {
    pub fn new(alpha: f64, ladder_q: f64) -> Result<Self, NormingError> {
        if !(alpha > 0.0 && alpha <= 2.0) {
            return Err(NormingError::InvalidAlpha(alpha));
        }
        if !(ladder_q > 0.0 && ladder_q < 1.0) {
            return Err(NormingError::InvalidLadderExponent(ladder_q));
        }
        Ok(Self { alpha, ladder_q })
    }

    /// Gaussian-attraction default: `alpha = 2`, balanced ladder tail.
    pub fn brownian() -> Self {
        Self {
            alpha: 2.0,
            ladder_q: 0.5,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn ladder_q(&self) -> f64 {
        self.ladder_q
    }

    fn check(x: f64) -> Result<f64, NormingError> {
        if x >= 1.0 {
            Ok(x)
        } else {
            Err(NormingError::Domain(x))
        }
    }

    /// `a(x) = x^(1/alpha)`.
    pub fn a(&self, x: f64) -> Result<f64, NormingError> {
        Ok(Self::check(x)?.powf(1.0 / self.alpha))
    }

    /// `a^{-1}(x) = x^alpha`.
    pub fn a_inv(&self, x: f64) -> Result<f64, NormingError> {
        Ok(Self::check(x)?.powf(self.alpha))
    }

    /// `b(x) = x^(1/q)`.
    pub fn b(&self, x: f64) -> Result<f64, NormingError> {
        Ok(Self::check(x)?.powf(1.0 / self.ladder_q))
    }

    /// `b^{-1}(x) = x^q`.
    pub fn b_inv(&self, x: f64) -> Result<f64, NormingError> {
        Ok(Self::check(x)?.powf(self.ladder_q))
    }

    pub fn eval(&self, map: NormingMap, x: f64) -> Result<f64, NormingError> {
        match map {
            NormingMap::Walk => self.a(x),
            NormingMap::WalkInverse => self.a_inv(x),
            NormingMap::Ladder => self.b(x),
            NormingMap::LadderInverse => self.b_inv(x),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brownian_defaults() {
        let nf = NormingFunctions::brownian();
        assert_eq!(nf.a_inv(3.0).unwrap(), 9.0);
        assert_eq!(nf.b_inv(16.0).unwrap(), 4.0);
        assert_eq!(nf.a(9.0).unwrap(), 3.0);
        assert_eq!(nf.b(4.0).unwrap(), 16.0);
    }

    #[test]
    fn domain_threshold() {
        let nf = NormingFunctions::brownian();
        assert_eq!(nf.a(0.5), Err(NormingError::Domain(0.5)));
        assert!(nf.a(1.0).is_ok());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(NormingFunctions::new(0.0, 0.5).is_err());
        assert!(NormingFunctions::new(2.5, 0.5).is_err());
        assert!(NormingFunctions::new(1.5, 0.0).is_err());
        assert!(NormingFunctions::new(1.5, 1.0).is_err());
    }

    #[test]
    fn maps_invert_each_other() {
        let nf = NormingFunctions::new(1.5, 1.0 / 3.0).unwrap();
        for &x in &[1.0, 2.0, 10.0, 123.0] {
            let y = nf.a(x).unwrap();
            assert!((nf.a_inv(y).unwrap() - x).abs() < 1e-10 * x);
            let z = nf.b(x).unwrap();
            assert!((nf.b_inv(z).unwrap() - x).abs() < 1e-9 * z.max(x));
        }
    }

    #[test]
    fn eval_table_matches_direct_calls() {
        let nf = NormingFunctions::new(1.25, 0.8).unwrap();
        assert_eq!(
            nf.eval(NormingMap::Walk, 7.0).unwrap(),
            nf.a(7.0).unwrap()
        );
        assert_eq!(
            nf.eval(NormingMap::LadderInverse, 7.0).unwrap(),
            nf.b_inv(7.0).unwrap()
        );
    }
}
