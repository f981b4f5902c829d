//! Gaver-Stehfest inversion of probability Laplace transforms. The
//! abscissas are real, which suits transforms only computable on the real
//! line, at the price of severe coefficient cancellation; orders beyond 18
//! lose more digits than double precision holds, so they are rejected.

use super::MlError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InversionError {
    #[error("transform evaluation failed: {0}")]
    Transform(#[from] MlError),
    /// Consecutive even orders disagree by more than the stability budget;
    /// `value` is the higher-order estimate.
    #[error("inversion unstable at t = {t}: orders differ by {divergence:.3e}")]
    Unstable { t: f64, value: f64, divergence: f64 },
    #[error("order must be even and within [4, 18], got {0}")]
    InvalidOrder(usize),
    #[error("time must be finite and positive, got {0}")]
    InvalidTime(f64),
}

const MAX_ORDER: usize = 18;
const STABILITY_BUDGET: f64 = 1e-3;

fn factorial(n: usize) -> i128 {
    (1..=n as i128).product()
}

/// Stehfest weights for even `order`; exact rationals reduced before the
/// final floating division.
pub(crate) fn gs_weights(order: usize) -> Vec<f64> {
    let half = order / 2;
    let mut zeta = Vec::with_capacity(order);
    for k in 1..=order {
        let mut sum = 0.0f64;
        for j in k.div_ceil(2)..=k.min(half) {
            let num: i128 = (j as i128).pow(half as u32) * factorial(2 * j);
            let den: i128 = factorial(half - j)
                * factorial(j)
                * factorial(j - 1)
                * factorial(k - j)
                * factorial(2 * j - k);
            let g = gcd(num, den);
            sum += (num / g) as f64 / (den / g) as f64;
        }
        let sign = if (half + k) % 2 == 0 { 1.0 } else { -1.0 };
        zeta.push(sign * sum);
    }
    zeta
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

fn invert_at<F>(transform: &F, t: f64, order: usize) -> Result<f64, InversionError>
where
    F: Fn(f64) -> Result<f64, MlError>,
{
    let ln2 = std::f64::consts::LN_2;
    let zeta = gs_weights(order);
    let mut sum = 0.0f64;
    for (k, z) in zeta.iter().enumerate() {
        let k1 = (k + 1) as f64;
        let phi = transform(k1 * ln2 / t)?;
        // the transform of the distribution function is phi(q)/q, and the
        // ln2/t prefactor cancels against it
        sum += z / k1 * phi;
    }
    Ok(sum)
}

/// Recover `F(t) = P(T <= t)` from `q -> E[exp(-q T)]`.
///
/// Two consecutive even orders are compared; disagreement past the budget
/// reports instability instead of a value. The returned value is clamped
/// to `[0, 1]` only after that check passes.
pub fn invert_laplace_cdf<F>(transform: F, t: f64, order: usize) -> Result<f64, InversionError>
where
    F: Fn(f64) -> Result<f64, MlError>,
{
    if !(t.is_finite() && t > 0.0) {
        return Err(InversionError::InvalidTime(t));
    }
    if order < 4 || order > MAX_ORDER || order % 2 != 0 {
        return Err(InversionError::InvalidOrder(order));
    }
    let hi = invert_at(&transform, t, order)?;
    let lo = invert_at(&transform, t, order - 2)?;
    let divergence = (hi - lo).abs();
    if divergence > STABILITY_BUDGET {
        return Err(InversionError::Unstable {
            t,
            value: hi,
            divergence,
        });
    }
    Ok(hi.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_weights_are_the_classical_integers() {
        assert_eq!(gs_weights(2), vec![2.0, -2.0]);
        assert_eq!(gs_weights(4), vec![-2.0, 26.0, -48.0, 24.0]);
    }

    #[test]
    fn weights_invert_the_constant_transform() {
        // sum zeta_k / k = 1 exactly; in floats the alternating weights
        // cancel down from sum |zeta_k / k|, so that scale sets the bar.
        for order in [2usize, 6, 10, 14, 18] {
            let terms: Vec<f64> = gs_weights(order)
                .iter()
                .enumerate()
                .map(|(k, z)| z / (k + 1) as f64)
                .collect();
            let s: f64 = terms.iter().sum();
            let amp: f64 = terms.iter().map(|t| t.abs()).sum();
            let tol = 1e-15 * amp + 1e-12;
            assert!((s - 1.0).abs() < tol, "order {order}: {s} (tol {tol:.1e})");
        }
    }

    // Truncation-error references for the tolerances below were measured
    // against exact-rational weights in extended precision; order 14 keeps
    // truncation two decades above the float roundoff floor, so the check
    // discriminates wrong weights without riding on rounding luck.

    #[test]
    fn exponential_law_distribution_function() {
        let f = |q: f64| Ok(1.0 / (1.0 + q));
        let got = invert_laplace_cdf(f, 1.0, 14).unwrap();
        // truncation at order 14 is +9.48e-7 here
        assert!((got - 0.632_120_558_828_557_7).abs() < 2e-6, "got {got}");
        // truncation grows with t: -1.47e-5 at t = 3
        let got = invert_laplace_cdf(f, 3.0, 14).unwrap();
        assert!((got - (1.0 - (-3.0f64).exp())).abs() < 2e-5);
        let got = invert_laplace_cdf(f, 1.0, 18).unwrap();
        assert!((got - 0.632_120_558_828_557_7).abs() < 1e-6, "got {got}");
    }

    #[test]
    fn gamma_law_distribution_function() {
        let f = |q: f64| Ok(1.0 / ((1.0 + q) * (1.0 + q)));
        let got = invert_laplace_cdf(f, 1.0, 14).unwrap();
        let want = 1.0 - 2.0 * (-1.0f64).exp();
        // truncation at order 14 is -1.07e-6 here
        assert!((got - want).abs() < 5e-6, "got {got} want {want}");
    }

    #[test]
    fn distant_tail_clamps_to_one_after_the_check() {
        let f = |q: f64| Ok(1.0 / (1.0 + q));
        let got = invert_laplace_cdf(f, 40.0, 14).unwrap();
        assert!(got <= 1.0 && got > 1.0 - 1e-9);
    }

    #[test]
    fn non_transform_input_reports_instability() {
        let f = |q: f64| Ok((3.0 * q).sin());
        let err = invert_laplace_cdf(f, 1.0, 14).unwrap_err();
        assert!(matches!(err, InversionError::Unstable { .. }));
    }

    #[test]
    fn order_and_time_validation() {
        let f = |q: f64| Ok(1.0 / (1.0 + q));
        assert!(matches!(
            invert_laplace_cdf(f, 1.0, 13),
            Err(InversionError::InvalidOrder(13))
        ));
        assert!(matches!(
            invert_laplace_cdf(f, 1.0, 20),
            Err(InversionError::InvalidOrder(20))
        ));
        assert!(matches!(
            invert_laplace_cdf(f, 0.0, 14),
            Err(InversionError::InvalidTime(_))
        ));
    }

    #[test]
    fn transform_errors_propagate() {
        let f = |_q: f64| {
            Err(MlError::Domain("outside".into()))
        };
        assert!(matches!(
            invert_laplace_cdf(f, 1.0, 14),
            Err(InversionError::Transform(MlError::Domain(_)))
        ));
    }
}
