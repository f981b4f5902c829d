//! Negative zeros of `E_alpha` and of the derivative combination that
//! governs the spectrally negative side. Both are located by a coarse
//! downward scan followed by bisection, and a sign is only acted on when
//! the evaluation bound says it is resolved.

use super::series;
use super::transforms::{LimitLawSpec, Side};
use super::MlError;

const SCAN_STEP: f64 = 0.01;
const SCAN_LIMIT: f64 = 100.0;
const BISECT_TOL: f64 = 1e-12;

struct SignedEval {
    value: f64,
    abs_bound: f64,
}

impl SignedEval {
    /// `Some(sign)` only when the value clears its own error bound.
    fn trusted_sign(&self) -> Option<bool> {
        if self.value.abs() > self.abs_bound {
            Some(self.value > 0.0)
        } else {
            None
        }
    }
}

fn eval_e(alpha: f64, x: f64) -> SignedEval {
    let o = series::evaluate(alpha, x, 0, 1e-15);
    SignedEval {
        value: o.value,
        abs_bound: o.achieved * o.value.abs().max(1.0),
    }
}

/// `D(q) = alpha q E''(q) + (alpha - 1) E'(q)`, with a composed bound.
fn eval_d(alpha: f64, q: f64) -> SignedEval {
    let e1 = series::evaluate(alpha, q, 1, 1e-15);
    let e2 = series::evaluate(alpha, q, 2, 1e-15);
    let a = alpha * q * e2.value;
    let b = (alpha - 1.0) * e1.value;
    let value = a + b;
    let abs_bound = alpha * q.abs() * e2.achieved * e2.value.abs().max(1.0)
        + (alpha - 1.0) * e1.achieved * e1.value.abs().max(1.0)
        + 2e-16 * (a.abs() + b.abs());
    SignedEval { value, abs_bound }
}

fn check_alpha(alpha: f64) -> Result<(), MlError> {
    if alpha > 1.0 && alpha <= 2.0 {
        Ok(())
    } else {
        Err(MlError::InvalidQuery(format!(
            "index must lie in (1, 2], got {alpha}"
        )))
    }
}

fn first_negative_zero<F>(f: F, alpha: f64) -> Result<f64, MlError>
where
    F: Fn(f64) -> SignedEval,
{
    // value at 0 is positive for both functions; `hi` tracks the last
    // point with a resolved positive sign, which still brackets even when
    // unresolved points fall in between
    let mut hi = 0.0f64;
    let steps = (SCAN_LIMIT / SCAN_STEP) as usize;
    for k in 1..=steps {
        let x = -(k as f64) * SCAN_STEP;
        match f(x).trusted_sign() {
            None => {}
            Some(true) => hi = x,
            Some(false) => return Ok(bisect(&f, x, hi)),
        }
    }
    Err(MlError::RootNotFound { alpha })
}

/// `lo < hi`, `f(lo) < 0 < f(hi)`; returns the magnitude of the zero.
fn bisect<F>(f: &F, mut lo: f64, mut hi: f64) -> f64
where
    F: Fn(f64) -> SignedEval,
{
    while hi - lo > BISECT_TOL {
        let mid = 0.5 * (lo + hi);
        match f(mid).trusted_sign() {
            Some(true) => hi = mid,
            Some(false) => lo = mid,
            // the zero sits inside the evaluation noise; no further digit
            // is resolvable
            None => break,
        }
    }
    (0.5 * (lo + hi)).abs()
}

/// Magnitude of the first negative zero of `E_alpha`.
pub fn rho1(alpha: f64) -> Result<f64, MlError> {
    check_alpha(alpha)?;
    first_negative_zero(|x| eval_e(alpha, x), alpha)
}

/// Magnitude of the first negative zero of
/// `q -> alpha q E''(q) + (alpha - 1) E'(q)`.
pub fn rho2(alpha: f64) -> Result<f64, MlError> {
    check_alpha(alpha)?;
    first_negative_zero(|q| eval_d(alpha, q), alpha)
}

/// Principal decay rate of the two-sided exit problem for the given law:
/// the survival probability under an independent exponential clock has its
/// leftmost transform singularity at `-ksharp`.
pub fn ksharp(spec: &LimitLawSpec) -> Result<f64, MlError> {
    match spec.side {
        Side::NoPositiveJumps => rho1(spec.alpha),
        Side::NoNegativeJumps => rho2(spec.alpha),
    }
}
