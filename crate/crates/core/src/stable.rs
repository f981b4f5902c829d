//! Strictly stable laws: validation, characteristic function, exact
//! sampling, and discretized paths.
//!
//! A law is parameterized by the stability index `alpha`, the positivity
//! parameter `p = P(S > 0)`, and the scale `gamma` of the characteristic
//! function
//!
//! ```text
//! E exp(i lambda S) = exp(-gamma |lambda|^alpha (1 - i sign(lambda) tan(pi alpha (p - 1/2))))
//! ```
//!
//! Spectrally one-sided laws sit on the boundary of the admissible `(alpha,
//! p)` region (`alpha p = 1` for no positive jumps, `alpha q = 1` for no
//! negative jumps, `q = 1 - p`) and get dedicated constructors that also fix
//! `gamma = |cos(pi alpha / 2)|`; with that scale the one-sided Laplace
//! transform is exactly `exp(x^alpha)`:
//!
//! * no positive jumps: `E exp(lambda S) = exp(lambda^alpha)`, `lambda >= 0`;
//! * no negative jumps: `E exp(-lambda S) = exp(lambda^alpha)`.
//!
//! At `alpha = 2` every branch collapses to the centered Gaussian of
//! variance `2 gamma`.

use crate::grid::CadlagGrid;
use crate::norming::NormingFunctions;
use crate::rng::RandomStream;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum StableError {
    #[error("stability index {0} outside the admissible range")]
    InvalidAlpha(f64),
    #[error("positivity parameter {0} outside (0, 1)")]
    InvalidPositivity(f64),
    #[error("scale {0} must be positive and finite")]
    InvalidScale(f64),
    #[error("alpha p = {0}: boundary parameterizations need a one-sided constructor")]
    BoundaryParameterization(f64),
    #[error("alpha = 1 is supported only in the symmetric (Cauchy) case")]
    UnsupportedParameterization,
}

/// Jump structure of the law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spectral {
    TwoSidedJumps,
    NoPositiveJumps,
    NoNegativeJumps,
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StableLaw {
    alpha: f64,
    p: f64,
    gamma: f64,
    spectral: Spectral,
}

impl StableLaw {
    /// Law with jumps on both sides: requires `0 < alpha p < 1` and
    /// `0 < alpha q < 1` strictly.
    pub fn two_sided(alpha: f64, p: f64, gamma: f64) -> Result<Self, StableError> {
        if !(alpha > 0.0 && alpha < 2.0) {
            return Err(StableError::InvalidAlpha(alpha));
        }
        if !(p > 0.0 && p < 1.0) {
            return Err(StableError::InvalidPositivity(p));
        }
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(StableError::InvalidScale(gamma));
        }
        if alpha == 1.0 && p != 0.5 {
            return Err(StableError::UnsupportedParameterization);
        }
        let q = 1.0 - p;
        if alpha * p >= 1.0 || alpha * q >= 1.0 {
            return Err(StableError::BoundaryParameterization(alpha * p.max(q)));
        }
        Ok(Self {
            alpha,
            p,
            gamma,
            spectral: Spectral::TwoSidedJumps,
        })
    }

    /// Symmetric law (`p = 1/2`) of index `alpha` in `(0, 2]`.
    pub fn symmetric(alpha: f64, gamma: f64) -> Result<Self, StableError> {
        if alpha == 2.0 {
            return Self::gaussian(gamma);
        }
        Self::two_sided(alpha, 0.5, gamma)
    }

    /// Centered Gaussian of variance `2 gamma`.
    pub fn gaussian(gamma: f64) -> Result<Self, StableError> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(StableError::InvalidScale(gamma));
        }
        Ok(Self {
            alpha: 2.0,
            p: 0.5,
            gamma,
            spectral: Spectral::Gaussian,
        })
    }

    /// Spectrally negative law of index `alpha` in `(1, 2]`, normalized so
    /// that `E exp(lambda S) = exp(lambda^alpha)` for `lambda >= 0`.
    pub fn no_positive_jumps(alpha: f64) -> Result<Self, StableError> {
        Self::one_sided(alpha, Spectral::NoPositiveJumps)
    }

    /// Spectrally positive law of index `alpha` in `(1, 2]`, normalized so
    /// that `E exp(-lambda S) = exp(lambda^alpha)` for `lambda >= 0`.
    pub fn no_negative_jumps(alpha: f64) -> Result<Self, StableError> {
        Self::one_sided(alpha, Spectral::NoNegativeJumps)
    }

    fn one_sided(alpha: f64, spectral: Spectral) -> Result<Self, StableError> {
        if !(alpha > 1.0 && alpha <= 2.0) {
            return Err(StableError::InvalidAlpha(alpha));
        }
        if alpha == 2.0 {
            return Self::gaussian(1.0);
        }
        let p = match spectral {
            Spectral::NoPositiveJumps => 1.0 / alpha,
            Spectral::NoNegativeJumps => 1.0 - 1.0 / alpha,
            _ => unreachable!(),
        };
        Ok(Self {
            alpha,
            p,
            gamma: (PI * alpha / 2.0).cos().abs(),
            spectral,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `P(S > 0)`.
    pub fn p(&self) -> f64 {
        self.p
    }

    /// `P(S < 0)`.
    pub fn q(&self) -> f64 {
        1.0 - self.p
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn spectral(&self) -> Spectral {
        self.spectral
    }

    /// Norming pair matched to this law: walk index `alpha`, ladder
    /// exponent `q = P(S < 0)`.
    pub fn norming(&self) -> NormingFunctions {
        NormingFunctions::new(self.alpha, self.q()).expect("law parameters are admissible")
    }

    /// Asymmetry slope of the characteristic exponent,
    /// `tan(pi alpha (p - 1/2))`.
    fn zeta(&self) -> f64 {
        if self.alpha == 2.0 || self.p == 0.5 {
            0.0
        } else {
            (PI * self.alpha * (self.p - 0.5)).tan()
        }
    }

    /// Characteristic function at `lambda`.
    pub fn cf(&self, lambda: f64) -> Complex64 {
        let mag = self.gamma * lambda.abs().powf(self.alpha);
        let skew = self.zeta() * lambda.signum();
        (Complex64::new(-mag, 0.0) * Complex64::new(1.0, -skew)).exp()
    }

    /// One exact draw.
    ///
    /// Gaussian laws use a direct normal draw; `alpha = 1` uses the Cauchy
    /// quantile; everything else uses the trigonometric construction from a
    /// uniform angle and a unit exponential.
    pub fn sample(&self, rng: &mut RandomStream) -> f64 {
        if self.alpha == 2.0 {
            let z: f64 = StandardNormal.sample(rng);
            return (2.0 * self.gamma).sqrt() * z;
        }
        if self.alpha == 1.0 {
            let u = uniform_open(rng);
            return self.gamma * (PI * (u - 0.5)).tan();
        }
        let u = uniform_open(rng);
        let phi = PI * (u - 0.5);
        let w: f64 = Exp1.sample(rng);
        let zeta = self.zeta();
        let theta0 = zeta.atan() / self.alpha;
        let a = self.alpha * (phi + theta0);
        let prefactor =
            self.gamma.powf(1.0 / self.alpha) * (1.0 + zeta * zeta).powf(0.5 / self.alpha);
        prefactor
            * (a.sin() / phi.cos().powf(1.0 / self.alpha))
            * ((phi - a).cos() / w).powf((1.0 - self.alpha) / self.alpha)
    }

    /// Discretized path on `[0, horizon]` with `n_steps` uniform steps:
    /// increments are `dt^(1/alpha)` times exact draws, so every marginal
    /// `S_t` has exactly the law scaled by `t^(1/alpha)`.
    pub fn sample_path(&self, horizon: f64, n_steps: usize, rng: &mut RandomStream) -> CadlagGrid {
        assert!(horizon > 0.0 && n_steps > 0, "degenerate path request");
        let dt = horizon / n_steps as f64;
        let scale = dt.powf(1.0 / self.alpha);
        let increments: Vec<f64> = (0..n_steps).map(|_| scale * self.sample(rng)).collect();
        CadlagGrid::from_forward_increments(dt, &increments)
    }
}

/// Uniform draw guarded away from 0 and 1 so the angle and the Cauchy
/// quantile stay finite.
fn uniform_open(rng: &mut RandomStream) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 && u < 1.0 {
            return u;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(StableLaw::two_sided(0.0, 0.5, 1.0).is_err());
        assert!(StableLaw::two_sided(2.0, 0.5, 1.0).is_err());
        assert!(StableLaw::two_sided(1.5, 0.0, 1.0).is_err());
        assert!(StableLaw::two_sided(1.5, 0.5, 0.0).is_err());
        assert!(StableLaw::two_sided(1.5, 0.5, f64::NAN).is_err());
        // boundary alpha p = 1 must go through the one-sided constructor
        assert_eq!(
            StableLaw::two_sided(1.5, 2.0 / 3.0, 1.0).unwrap_err(),
            StableError::BoundaryParameterization(1.0)
        );
        assert_eq!(
            StableLaw::two_sided(1.0, 0.7, 1.0).unwrap_err(),
            StableError::UnsupportedParameterization
        );
        assert!(StableLaw::no_positive_jumps(1.0).is_err());
        assert!(StableLaw::no_positive_jumps(2.1).is_err());
    }

    #[test]
    fn one_sided_positivity_parameters() {
        let npj = StableLaw::no_positive_jumps(1.5).unwrap();
        assert!((npj.alpha() * npj.p() - 1.0).abs() < 1e-15);
        let nnj = StableLaw::no_negative_jumps(1.5).unwrap();
        assert!((nnj.alpha() * nnj.q() - 1.0).abs() < 1e-15);
        // scale normalization |cos(pi alpha / 2)| at alpha = 3/2
        assert!((npj.gamma() - 0.707_106_781_186_547_5).abs() < 1e-15);
    }

    #[test]
    fn one_sided_at_alpha_two_is_gaussian() {
        let law = StableLaw::no_positive_jumps(2.0).unwrap();
        assert_eq!(law.spectral(), Spectral::Gaussian);
        assert_eq!(law.p(), 0.5);
        assert_eq!(law.gamma(), 1.0);
    }

    #[test]
    fn cf_gaussian_is_real_squared_exponential() {
        let law = StableLaw::gaussian(1.0).unwrap();
        let z = law.cf(1.5);
        assert!((z.re - (-2.25_f64).exp()).abs() < 1e-12);
        assert!(z.im.abs() < 1e-15);
    }

    #[test]
    fn cf_symmetry_is_conjugation() {
        let law = StableLaw::two_sided(1.5, 0.4, 0.8).unwrap();
        for &l in &[0.3, 1.0, 2.7] {
            let a = law.cf(l);
            let b = law.cf(-l);
            assert!((a - b.conj()).norm() < 1e-14);
        }
    }

    #[test]
    fn cf_modulus_matches_scale() {
        let law = StableLaw::two_sided(1.25, 0.6, 0.7).unwrap();
        for &l in &[0.5f64, 1.0, 3.0] {
            let want = (-0.7 * l.abs().powf(1.25)).exp();
            assert!((law.cf(l).norm() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn cf_at_zero_is_one() {
        let law = StableLaw::symmetric(1.5, 1.0).unwrap();
        assert!((law.cf(0.0) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn gaussian_sample_variance() {
        let law = StableLaw::gaussian(1.0).unwrap();
        let mut rng = RandomStream::new(11);
        let n = 40_000;
        let xs: Vec<f64> = (0..n).map(|_| law.sample(&mut rng)).collect();
        let mean: f64 = xs.iter().sum::<f64>() / n as f64;
        let var: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
        // se of the sample variance of N(0,2) is 2 sqrt(2/n) ~ 0.014
        assert!((var - 2.0).abs() < 0.05, "var {var}");
        assert!(mean.abs() < 0.03, "mean {mean}");
    }

    #[test]
    fn one_sided_sample_matches_its_laplace_transform() {
        // E[e^{lambda S}] = e^{lambda^alpha} on the continuous side; the
        // weight has light tails there, so plain MC bands apply
        let npj = StableLaw::no_positive_jumps(1.5).unwrap();
        let nnj = StableLaw::no_negative_jumps(1.5).unwrap();
        let n = 2_000_000usize;
        for (law, sign, seed) in [(&npj, 1.0f64, 21u64), (&nnj, -1.0f64, 22u64)] {
            let mut rng = RandomStream::new(seed);
            for lambda in [0.5f64, 1.0] {
                let mut acc = 0.0f64;
                let mut acc2 = 0.0f64;
                for _ in 0..n {
                    let w = (sign * lambda * law.sample(&mut rng)).exp();
                    acc += w;
                    acc2 += w * w;
                }
                let m = acc / n as f64;
                let se = ((acc2 / n as f64 - m * m) / n as f64).sqrt();
                let want = lambda.powf(1.5).exp();
                assert!(
                    (m - want).abs() < 4.0 * se,
                    "lambda {lambda}, sign {sign}: {m} vs {want} (se {se})"
                );
            }
        }
    }

    #[test]
    fn path_endpoint_scales_with_horizon() {
        let law = StableLaw::gaussian(1.0).unwrap();
        let mut rng = RandomStream::new(3);
        let n = 4000;
        let mut endpoint_var = 0.0;
        for _ in 0..n {
            let p = law.sample_path(4.0, 64, &mut rng);
            let v = *p.values().last().unwrap();
            endpoint_var += v * v;
        }
        endpoint_var /= n as f64;
        // S_4 ~ N(0, 8); se of the variance estimate ~ 8 sqrt(2/n) ~ 0.18
        assert!((endpoint_var - 8.0).abs() < 0.6, "var {endpoint_var}");
    }

    #[test]
    fn norming_pair_follows_the_law() {
        let law = StableLaw::no_positive_jumps(1.5).unwrap();
        let nf = law.norming();
        assert!((nf.alpha() - 1.5).abs() < 1e-15);
        assert!((nf.ladder_q() - (1.0 - 1.0 / 1.5)).abs() < 1e-15);
    }
}
