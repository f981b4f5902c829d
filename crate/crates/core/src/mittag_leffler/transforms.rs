//! Closed-form Laplace transforms of the passage and exit functionals of
//! the spectrally one-sided limit process, written in terms of `E_alpha`
//! and its derivatives. All transforms are evaluated at real `q`, with
//! negative `q` accepted down to the leftmost singularity of the side.

use super::roots;
use super::{ml0, ml_triple, MlError, MLFQuery};
use crate::rng::RandomStream;
use rand::Rng;
use statrs::function::gamma::gamma;

/// Which half-line carries the jumps of the limit law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Side {
    /// Upward moves are continuous; `alpha p = 1`.
    NoPositiveJumps,
    /// Downward moves are continuous; `alpha q = 1`.
    NoNegativeJumps,
}

/// The one-sided strictly stable limit law the transforms describe.
/// At `alpha = 2` the two sides describe the same Brownian limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitLawSpec {
    pub alpha: f64,
    pub side: Side,
}

impl LimitLawSpec {
    pub fn new(alpha: f64, side: Side) -> Result<Self, MlError> {
        if alpha > 1.0 && alpha <= 2.0 {
            Ok(Self { alpha, side })
        } else {
            Err(MlError::InvalidQuery(format!(
                "index must lie in (1, 2], got {alpha}"
            )))
        }
    }

    /// Spectral side read off a stable law; two-sided laws have no
    /// one-sided limit description.
    pub fn from_stable(law: &crate::stable::StableLaw) -> Result<Self, MlError> {
        use crate::stable::Spectral;
        let side = match law.spectral() {
            Spectral::NoPositiveJumps => Side::NoPositiveJumps,
            Spectral::NoNegativeJumps => Side::NoNegativeJumps,
            Spectral::Gaussian => Side::NoPositiveJumps,
            Spectral::TwoSidedJumps => {
                return Err(MlError::Domain(
                    "two-sided jump law has no one-sided transform family".into(),
                ))
            }
        };
        Self::new(law.alpha(), side)
    }
}

/// Which argument the interior survival term carries. The scaled form is
/// the coherent one (all three exit probabilities sum to one); the
/// unscaled form reproduces a formula that circulates with the clock rate
/// dropped from that term, kept only so the discrepancy can be measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SurvivalTermScaling {
    #[default]
    ClockScaled,
    Unscaled,
}

/// Exit decomposition of the unit interval under an exponential clock.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSidedExit {
    /// Exit through the lower endpoint before the clock rings.
    pub p_exit_low: f64,
    /// Clock rings first; the process is still inside.
    pub p_survive: f64,
}

impl TwoSidedExit {
    /// Exit through the upper endpoint before the clock rings.
    pub fn p_exit_high(&self) -> f64 {
        1.0 - self.p_exit_low - self.p_survive
    }
}

/// `D(q) = alpha q E''(q) + (alpha - 1) E'(q)`, the denominator of the
/// spectrally negative identities.
fn d_of(alpha: f64, q: f64, e1: f64, e2: f64) -> f64 {
    alpha * q * e2 + (alpha - 1.0) * e1
}

/// Negative arguments are only meaningful up to the side's leftmost
/// transform singularity.
fn check_pole(spec: &LimitLawSpec, q: f64) -> Result<(), MlError> {
    if q >= 0.0 {
        return Ok(());
    }
    let pole = match spec.side {
        Side::NoPositiveJumps => roots::rho1(spec.alpha)?,
        Side::NoNegativeJumps => roots::rho2(spec.alpha)?,
    };
    if q <= -pole {
        return Err(MlError::Domain(format!(
            "argument {q} at or beyond the transform singularity -{pole:.12}"
        )));
    }
    Ok(())
}

fn check_finite(name: &str, q: f64) -> Result<(), MlError> {
    if q.is_finite() {
        Ok(())
    } else {
        Err(MlError::InvalidQuery(format!("{name} must be finite, got {q}")))
    }
}

/// Laplace transform of the two-sided unit exit time:
/// `E[exp(-q tau_sharp)]`.
pub fn laplace_tau_sharp(spec: &LimitLawSpec, q: f64) -> Result<f64, MlError> {
    check_finite("q", q)?;
    check_pole(spec, q)?;
    match spec.side {
        Side::NoPositiveJumps => Ok(1.0 / ml0(spec.alpha, q)?),
        Side::NoNegativeJumps => {
            let (e0, e1, e2) = ml_triple(spec.alpha, q)?;
            let d = d_of(spec.alpha, q, e1, e2);
            Ok(e0 - spec.alpha * q * e1 * e1 / d)
        }
    }
}

/// Laplace transform of the passage time across level `b` of the process
/// started a unit below it: `E[exp(-q tau_b)]`, `b` in `(0, 1]`.
pub fn laplace_tau_b(spec: &LimitLawSpec, q: f64, b: f64) -> Result<f64, MlError> {
    check_finite("q", q)?;
    if !(b > 0.0 && b <= 1.0) {
        return Err(MlError::InvalidQuery(format!(
            "level must lie in (0, 1], got {b}"
        )));
    }
    check_pole(spec, q)?;
    let alpha = spec.alpha;
    match spec.side {
        Side::NoPositiveJumps => {
            let shifted = ml0(alpha, q * (1.0 - b).powf(alpha))?;
            Ok(shifted / ml0(alpha, q)?)
        }
        Side::NoNegativeJumps => {
            let (_, e1, e2) = ml_triple(alpha, q)?;
            let d = d_of(alpha, q, e1, e2);
            let qa = q * b.powf(alpha);
            let s0 = ml0(alpha, qa)?;
            let s1 = mlf(alpha, qa, 1)?;
            Ok(s0 - b.powf(alpha - 1.0) * alpha * q * s1 * e1 / d)
        }
    }
}

fn mlf(alpha: f64, x: f64, order: u8) -> Result<f64, MlError> {
    super::mlf(&MLFQuery::new(alpha, x).with_order(order))
}

/// Laplace transform of the renormalized local functional `Xi`:
/// `E[exp(-q Xi)]`.
pub fn laplace_xi(spec: &LimitLawSpec, q: f64) -> Result<f64, MlError> {
    check_finite("q", q)?;
    check_pole(spec, q)?;
    let alpha = spec.alpha;
    match spec.side {
        Side::NoPositiveJumps => {
            let e0 = ml0(alpha, q)?;
            let e1 = mlf(alpha, q, 1)?;
            Ok(gamma(alpha + 1.0) * e1 / e0)
        }
        Side::NoNegativeJumps => {
            let (_, e1, e2) = ml_triple(alpha, q)?;
            let d = d_of(alpha, q, e1, e2);
            Ok((alpha - 1.0) * e1 / d)
        }
    }
}

/// Exit decomposition of the unit interval for the process started at
/// distance `b` below the upper endpoint, killed at an independent
/// exponential clock of rate `q`.
pub fn exit_two_sided(
    spec: &LimitLawSpec,
    q: f64,
    b: f64,
    scaling: SurvivalTermScaling,
) -> Result<TwoSidedExit, MlError> {
    check_finite("q", q)?;
    if !(b > 0.0 && b < 1.0) {
        return Err(MlError::InvalidQuery(format!(
            "starting offset must lie in (0, 1), got {b}"
        )));
    }
    check_pole(spec, q)?;
    let alpha = spec.alpha;
    let ba = b.powf(alpha);
    let e1_in = mlf(alpha, q * ba, 1)?;
    let e1_full = mlf(alpha, q, 1)?;
    let p_exit_low = b.powf(alpha - 1.0) * e1_in / e1_full;
    let interior = match scaling {
        SurvivalTermScaling::ClockScaled => ml0(alpha, q * ba)?,
        SurvivalTermScaling::Unscaled => ml0(alpha, ba)?,
    };
    let p_survive = 1.0 - interior + p_exit_low * (ml0(alpha, q)? - 1.0);
    Ok(TwoSidedExit {
        p_exit_low,
        p_survive,
    })
}

/// Scale function of the spectrally one-sided process on the half-line:
/// `W(x) = x^{alpha - 1} / Gamma(alpha)`.
pub fn scale_w(spec: &LimitLawSpec, x: f64) -> Result<f64, MlError> {
    if !(x >= 0.0 && x.is_finite()) {
        return Err(MlError::InvalidQuery(format!(
            "scale function argument must be finite and nonnegative, got {x}"
        )));
    }
    Ok(x.powf(spec.alpha - 1.0) / gamma(spec.alpha))
}

/// Draw from the law of the normalized overshoot-free exit site `R_1` on
/// the unit interval: distribution function `r^{alpha-1}` seen from the
/// continuous side.
pub fn sample_r1(spec: &LimitLawSpec, stream: &mut RandomStream) -> f64 {
    let u: f64 = stream.random();
    let r = u.powf(1.0 / (spec.alpha - 1.0));
    match spec.side {
        Side::NoPositiveJumps => r,
        Side::NoNegativeJumps => 1.0 - r,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::McEstimate;

    fn npj(alpha: f64) -> LimitLawSpec {
        LimitLawSpec::new(alpha, Side::NoPositiveJumps).unwrap()
    }
    fn nnj(alpha: f64) -> LimitLawSpec {
        LimitLawSpec::new(alpha, Side::NoNegativeJumps).unwrap()
    }

    #[test]
    fn unit_exit_transform_continuous_upward_side() {
        let spec = npj(1.5);
        let want = [
            (0.5, 0.704_091_358_715_019_8),
            (1.0, 0.515_600_189_743_323_6),
            (2.0, 0.298_623_266_443_238_6),
        ];
        for (q, w) in want {
            assert!((laplace_tau_sharp(&spec, q).unwrap() - w).abs() < 1e-12);
        }
        // Brownian boundary: 1/cosh(sqrt(q))
        let b = npj(2.0);
        assert!((laplace_tau_sharp(&b, 1.0).unwrap() - 0.648_054_273_663_885_4).abs() < 1e-12);
    }

    #[test]
    fn unit_exit_transform_continuous_downward_side() {
        let spec = nnj(1.5);
        let want = [
            (0.5, 0.563_100_752_995_861_9),
            (1.0, 0.385_094_476_750_004),
            (2.0, 0.229_296_352_268_655_9),
        ];
        for (q, w) in want {
            assert!((laplace_tau_sharp(&spec, q).unwrap() - w).abs() < 1e-12);
        }
        // the sides coincide at the Brownian point
        assert!(
            (laplace_tau_sharp(&nnj(2.0), 1.0).unwrap()
                - laplace_tau_sharp(&npj(2.0), 1.0).unwrap())
            .abs()
                < 1e-12
        );
    }

    #[test]
    fn local_functional_transform_matches_references() {
        let spec = npj(1.5);
        let want = [
            (0.5, 0.874_170_120_262_800_3),
            (1.0, 0.787_417_158_495_728_3),
            (2.0, 0.674_412_163_249_702_2),
        ];
        for (q, w) in want {
            assert!((laplace_xi(&spec, q).unwrap() - w).abs() < 1e-12);
        }
        let spec = nnj(1.5);
        let want = [
            (0.5, 0.611_849_624_374_696_5),
            (1.0, 0.451_007_652_611_837_5),
            (2.0, 0.306_023_584_001_160_9),
        ];
        for (q, w) in want {
            assert!((laplace_xi(&spec, q).unwrap() - w).abs() < 1e-12);
        }
        // Brownian boundary: tanh(sqrt(q))/sqrt(q) on both sides
        let want2 = [
            (0.5, 0.861_057_171_580_547_6),
            (1.0, 0.761_594_155_955_764_9),
            (2.0, 0.628_183_454_905_439_8),
        ];
        for (q, w) in want2 {
            assert!((laplace_xi(&npj(2.0), q).unwrap() - w).abs() < 1e-12);
            assert!((laplace_xi(&nnj(2.0), q).unwrap() - w).abs() < 1e-12);
        }
    }

    #[test]
    fn level_passage_transform_brownian_reference() {
        // E_2(q(1-b)^2)/E_2(q) = cosh((1-b) sqrt q)/cosh(sqrt q)
        let got = laplace_tau_b(&npj(2.0), 1.0, 0.5).unwrap();
        assert!((got - 0.730_762_825_846_358_8).abs() < 1e-12);
    }

    #[test]
    fn level_passage_transform_degenerates_to_unit_exit() {
        for spec in [npj(1.5), nnj(1.5), npj(2.0)] {
            let full = laplace_tau_sharp(&spec, 1.3).unwrap();
            let at_top = laplace_tau_b(&spec, 1.3, 1.0).unwrap();
            assert!((full - at_top).abs() < 1e-10);
        }
    }

    #[test]
    fn transforms_are_probabilities_and_decreasing_in_q() {
        for spec in [npj(1.25), npj(1.75), nnj(1.25), nnj(1.75)] {
            let mut prev = 1.0;
            for q in [0.0, 0.25, 1.0, 4.0, 16.0] {
                for f in [laplace_tau_sharp, laplace_xi] {
                    let v = f(&spec, q).unwrap();
                    assert!((0.0..=1.0 + 1e-12).contains(&v));
                }
                let v = laplace_tau_sharp(&spec, q).unwrap();
                assert!(v <= prev + 1e-12);
                prev = v;
            }
            assert!((laplace_tau_sharp(&spec, 0.0).unwrap() - 1.0).abs() < 1e-12);
            assert!((laplace_xi(&spec, 0.0).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn negative_arguments_work_down_to_the_singularity() {
        // exponential moments exist below the pole and exceed one
        let v = laplace_tau_sharp(&npj(1.5), -1.0).unwrap();
        assert!(v > 1.0);
        assert!(matches!(
            laplace_tau_sharp(&npj(1.5), -3.0),
            Err(MlError::Domain(_))
        ));
        // the spectrally negative side has a much smaller radius
        assert!(laplace_tau_sharp(&nnj(1.5), -0.5).unwrap() > 1.0);
        assert!(matches!(
            laplace_tau_sharp(&nnj(1.5), -0.7),
            Err(MlError::Domain(_))
        ));
    }

    #[test]
    fn exit_decomposition_brownian_references() {
        let b2 = npj(2.0);
        let cases = [
            (1.0, 0.5, 0.443_409_441_985_037, 0.113_181_116_029_926_1),
            (1.0, 0.99, 0.986_919_428_721_366_3, 0.004_571_248_175_843_4),
            (4.0, 0.99, 0.979_452_329_138_248_3, 0.015_032_891_931_543_7),
            (4.0, 0.5, 0.324_027_136_831_942_7, 0.351_945_726_336_114_6),
        ];
        for (q, off, low, surv) in cases {
            let e = exit_two_sided(&b2, q, off, SurvivalTermScaling::ClockScaled).unwrap();
            assert!((e.p_exit_low - low).abs() < 1e-12, "low at q={q}, b={off}");
            assert!((e.p_survive - surv).abs() < 1e-12, "surv at q={q}, b={off}");
        }
    }

    #[test]
    fn exit_probabilities_sum_to_one_under_the_clock() {
        for spec in [npj(1.5), nnj(1.5), npj(2.0), nnj(1.25)] {
            for q in [0.0, 0.7, 3.0] {
                for off in [0.2, 0.5, 0.9] {
                    let e =
                        exit_two_sided(&spec, q, off, SurvivalTermScaling::ClockScaled).unwrap();
                    assert!(e.p_exit_low >= -1e-12 && e.p_exit_low <= 1.0 + 1e-12);
                    assert!(e.p_survive >= -1e-12);
                    assert!(e.p_exit_high() >= -1e-10, "negative high-exit mass");
                    let total = e.p_exit_low + e.p_survive + e.p_exit_high();
                    assert!((total - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn unscaled_interior_term_is_not_a_probability() {
        // the dropped clock rate inflates survival past one; kept as a
        // measurable discrepancy, not a usable variant
        let e = exit_two_sided(&npj(2.0), 4.0, 0.99, SurvivalTermScaling::Unscaled).unwrap();
        assert!((e.p_survive - 2.174_033_421_481_842_2).abs() < 1e-12);
        let e = exit_two_sided(&npj(2.0), 4.0, 0.5, SurvivalTermScaling::Unscaled).unwrap();
        assert!((e.p_survive - 0.767_400_395_944_977_6).abs() < 1e-12);
    }

    #[test]
    fn exit_limits_in_the_clock_rate() {
        // q -> 0: clock never rings, lower-exit mass is the scale ratio
        for spec in [npj(1.5), nnj(1.75)] {
            let e = exit_two_sided(&spec, 1e-9, 0.25, SurvivalTermScaling::ClockScaled).unwrap();
            assert!((e.p_exit_low - 0.25f64.powf(spec.alpha - 1.0)).abs() < 1e-6);
            assert!(e.p_survive.abs() < 1e-6);
        }
        // q -> infinity: the clock rings essentially immediately
        for spec in [npj(1.5), npj(2.0)] {
            let e = exit_two_sided(&spec, 50.0, 0.5, SurvivalTermScaling::ClockScaled).unwrap();
            assert!(e.p_survive > 0.85, "survival {} at q=50", e.p_survive);
        }
    }

    #[test]
    fn scale_function_values() {
        assert!((scale_w(&npj(2.0), 3.0).unwrap() - 3.0).abs() < 1e-15);
        let got = scale_w(&npj(1.5), 4.0).unwrap();
        assert!((got - 2.0 / gamma(1.5)).abs() < 1e-14);
        assert!(scale_w(&npj(1.5), -1.0).is_err());
    }

    #[test]
    fn exit_site_law_moments() {
        let mut s = RandomStream::new(31).substream(7);
        let n = 20_000;
        let xs: Vec<f64> = (0..n).map(|_| sample_r1(&npj(1.5), &mut s)).collect();
        let est = McEstimate::from_samples(&xs, s.seed());
        // E[u^2] = 1/3 for the square of a uniform
        assert!((est.mean - 1.0 / 3.0).abs() < 4.0 * est.std_error);
        let xs: Vec<f64> = (0..n).map(|_| sample_r1(&npj(2.0), &mut s)).collect();
        let est = McEstimate::from_samples(&xs, s.seed());
        assert!((est.mean - 0.5).abs() < 4.0 * est.std_error);
        let lo = sample_r1(&nnj(1.5), &mut s);
        assert!((0.0..=1.0).contains(&lo));
    }

    #[test]
    fn spec_validation_and_stable_law_glue() {
        assert!(LimitLawSpec::new(1.0, Side::NoPositiveJumps).is_err());
        assert!(LimitLawSpec::new(2.2, Side::NoPositiveJumps).is_err());
        let law = crate::stable::StableLaw::no_positive_jumps(1.5).unwrap();
        let spec = LimitLawSpec::from_stable(&law).unwrap();
        assert_eq!(spec.side, Side::NoPositiveJumps);
        assert!((spec.alpha - 1.5).abs() < 1e-15);
        let sym = crate::stable::StableLaw::symmetric(1.5, 1.0).unwrap();
        assert!(LimitLawSpec::from_stable(&sym).is_err());
    }
}
