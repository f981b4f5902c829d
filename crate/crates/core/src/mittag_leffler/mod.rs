//! The Mittag-Leffler function `E_alpha` on the real line, its negative
//! zeros, and the Laplace-transform identities built from it: exit and
//! passage functionals of the limiting process, plus numerical inversion
//! of those transforms.

pub(crate) mod ddouble;
mod inversion;
mod roots;
mod series;
mod transforms;

pub use inversion::{invert_laplace_cdf, InversionError};
pub use roots::{ksharp, rho1, rho2};
pub use transforms::{
    exit_two_sided, laplace_tau_b, laplace_tau_sharp, laplace_xi, sample_r1, scale_w,
    LimitLawSpec, Side, SurvivalTermScaling, TwoSidedExit,
};

use thiserror::Error;

/// Evaluation failures and domain violations for this module.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MlError {
    /// Malformed query parameters.
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    /// Argument outside the domain of the requested identity.
    #[error("domain violation: {0}")]
    Domain(String),
    /// No summation strategy met the requested accuracy; `value` is the
    /// best effort and `achieved` its honest bound.
    #[error("requested precision not met: value {value}, achieved {achieved:.3e}")]
    Precision { value: f64, achieved: f64 },
    /// Root bracketing failed on the scan interval.
    #[error("no sign change located for alpha = {alpha}")]
    RootNotFound { alpha: f64 },
}

/// One evaluation request for `E_alpha` or a derivative.
///
/// `precision` is the requested error bound, normalized by
/// `max(1, |value|)`: absolute for values in the unit range (covering
/// sign queries near the negative zeros) and relative for exponentially
/// large values.
#[derive(Debug, Clone, Copy)]
pub struct MLFQuery {
    pub alpha: f64,
    pub x: f64,
    pub deriv_order: u8,
    pub precision: f64,
}

impl MLFQuery {
    pub fn new(alpha: f64, x: f64) -> Self {
        Self {
            alpha,
            x,
            deriv_order: 0,
            precision: 5e-13,
        }
    }

    pub fn with_order(mut self, deriv_order: u8) -> Self {
        self.deriv_order = deriv_order;
        self
    }

    pub fn with_precision(mut self, precision: f64) -> Self {
        self.precision = precision;
        self
    }

    fn validate(&self) -> Result<(), MlError> {
        if !(self.alpha > 0.0 && self.alpha <= 2.0) {
            return Err(MlError::InvalidQuery(format!(
                "alpha must lie in (0, 2], got {}",
                self.alpha
            )));
        }
        if !self.x.is_finite() {
            return Err(MlError::InvalidQuery(format!(
                "argument must be finite, got {}",
                self.x
            )));
        }
        if self.deriv_order > 2 {
            return Err(MlError::InvalidQuery(format!(
                "derivative order at most 2, got {}",
                self.deriv_order
            )));
        }
        if !(1e-15..=1e-6).contains(&self.precision) {
            return Err(MlError::InvalidQuery(format!(
                "precision must lie in [1e-15, 1e-6], got {}",
                self.precision
            )));
        }
        Ok(())
    }
}

/// Evaluate `E_alpha^(deriv_order)(x)` to the requested precision.
pub fn mlf(query: &MLFQuery) -> Result<f64, MlError> {
    query.validate()?;
    // alpha = 1 is the exponential; the series handles it too, but the
    // closed form is exact and keeps the far-negative tail meaningful.
    if query.alpha == 1.0 {
        return Ok(query.x.exp());
    }
    if query.x.abs() > 1e4 {
        return Err(MlError::Domain(format!(
            "argument {} outside supported range [-1e4, 1e4]",
            query.x
        )));
    }
    let out = series::evaluate(query.alpha, query.x, query.deriv_order, query.precision);
    if out.achieved <= query.precision {
        Ok(out.value)
    } else {
        Err(MlError::Precision {
            value: out.value,
            achieved: out.achieved,
        })
    }
}

/// Internal convenience: `(E, E', E'')` at one argument, default precision.
pub(crate) fn ml_triple(alpha: f64, x: f64) -> Result<(f64, f64, f64), MlError> {
    let e0 = mlf(&MLFQuery::new(alpha, x))?;
    let e1 = mlf(&MLFQuery::new(alpha, x).with_order(1))?;
    let e2 = mlf(&MLFQuery::new(alpha, x).with_order(2))?;
    Ok((e0, e1, e2))
}

/// Internal convenience: `E_alpha(x)` at default precision.
pub(crate) fn ml0(alpha: f64, x: f64) -> Result<f64, MlError> {
    mlf(&MLFQuery::new(alpha, x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_rejects_bad_queries() {
        assert!(matches!(
            mlf(&MLFQuery::new(2.5, 1.0)),
            Err(MlError::InvalidQuery(_))
        ));
        assert!(matches!(
            mlf(&MLFQuery::new(1.5, f64::NAN)),
            Err(MlError::InvalidQuery(_))
        ));
        assert!(matches!(
            mlf(&MLFQuery::new(1.5, 1.0).with_order(3)),
            Err(MlError::InvalidQuery(_))
        ));
        assert!(matches!(
            mlf(&MLFQuery::new(1.5, 1.0).with_precision(1e-16)),
            Err(MlError::InvalidQuery(_))
        ));
        assert!(matches!(
            mlf(&MLFQuery::new(1.5, 1e5)),
            Err(MlError::Domain(_))
        ));
    }

    #[test]
    fn exponential_index_is_exact() {
        let q = MLFQuery::new(1.0, -30.0);
        assert_eq!(mlf(&q).unwrap(), (-30.0f64).exp());
        // reference: 9.357622968840175e-14
        assert!((mlf(&q).unwrap() - 9.357_622_968_840_175e-14).abs() < 1e-27);
    }

    #[test]
    fn triple_round_trip() {
        let (e0, e1, e2) = ml_triple(1.5, 1.0).unwrap();
        assert!((e0 - 1.939_487_261_433_749).abs() < 1e-12);
        assert!((e1 - 1.148_829_571_355_073).abs() < 1e-12);
        assert!((e2 - 0.466_140_385_478_834).abs() < 1e-12);
    }

    #[test]
    fn loose_precision_is_allowed_to_succeed_cheaply() {
        let tight = mlf(&MLFQuery::new(1.25, -100.0).with_precision(1e-10)).unwrap();
        let loose = mlf(&MLFQuery::new(1.25, -100.0).with_precision(1e-6)).unwrap();
        assert!((tight - loose).abs() / tight.abs() < 1e-6);
        assert!((tight - (-0.002_083_427_280_835_188_4)).abs() < 1e-12);
    }
}
