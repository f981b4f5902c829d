//! Exact transitions of the squared Bessel process `BESQ(delta)`:
//! conditionally on a Poisson mixing count the increment is Gamma, so a
//! step of any size is sampled without discretization error. Dimension
//! zero is absorbing, and absorption is hit exactly (the sampled value is
//! the floating-point zero, not a small positive number).

use crate::rng::RandomStream;
use rand_distr::{Distribution, Gamma, Poisson};

/// One exact transition of `BESQ(delta)` over `dt` from state `x`.
pub fn besq_step(x: f64, delta: f64, dt: f64, rng: &mut RandomStream) -> f64 {
    debug_assert!(x >= 0.0 && delta >= 0.0 && dt >= 0.0);
    if dt == 0.0 {
        return x;
    }
    let k = if x > 0.0 {
        Poisson::new(x / (2.0 * dt))
            .expect("positive rate")
            .sample(rng)
    } else {
        0.0
    };
    let shape = 0.5 * delta + k;
    if shape == 0.0 {
        return 0.0;
    }
    Gamma::new(shape, 2.0 * dt)
        .expect("positive shape and scale")
        .sample(rng)
}

/// Fixed-mesh trajectory of `BESQ(delta)`; convenience for tests and
/// diagnostics, the solvers drive `besq_step` on their own clocks.
pub fn besq_path(
    x0: f64,
    delta: f64,
    dt: f64,
    n_steps: usize,
    rng: &mut RandomStream,
) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_steps + 1);
    out.push(x0);
    let mut x = x0;
    for _ in 0..n_steps {
        x = besq_step(x, delta, dt, rng);
        out.push(x);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::mean_and_se;

    #[test]
    fn one_step_mean_matches_the_transition() {
        // E[X_dt | x] = x + delta dt
        let mut rng = RandomStream::new(7).substream_named("besq-mean");
        let (x, delta, dt) = (3.0, 2.0, 0.5);
        let xs: Vec<f64> = (0..40_000).map(|_| besq_step(x, delta, dt, &mut rng)).collect();
        let (mean, se) = mean_and_se(&xs);
        assert!((mean - 4.0).abs() < 5.0 * se, "mean {mean} se {se}");
    }

    #[test]
    fn one_step_variance_matches_the_transition() {
        // Var[X_dt | x] = 4 x dt + 2 delta dt^2
        let mut rng = RandomStream::new(7).substream_named("besq-var");
        let (x, delta, dt) = (3.0, 2.0, 0.5);
        let xs: Vec<f64> = (0..40_000).map(|_| besq_step(x, delta, dt, &mut rng)).collect();
        let (mean, _) = mean_and_se(&xs);
        let var: f64 = xs.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
        assert!((var - 7.0).abs() < 0.35, "var {var}");
    }

    #[test]
    fn zero_is_absorbing_in_dimension_zero() {
        let mut rng = RandomStream::new(11).substream_named("besq-absorb");
        assert_eq!(besq_step(0.0, 0.0, 1.0, &mut rng), 0.0);
        // from a small state most paths die within a few unit steps
        let mut absorbed = 0;
        for _ in 0..500 {
            let path = besq_path(0.1, 0.0, 1.0, 30, &mut rng);
            let end = *path.last().unwrap();
            if end == 0.0 {
                absorbed += 1;
                // once at zero, stays at zero
                let first = path.iter().position(|&v| v == 0.0).unwrap();
                assert!(path[first..].iter().all(|&v| v == 0.0));
            }
        }
        assert!(absorbed > 450, "absorbed {absorbed}/500");
    }

    #[test]
    fn zero_length_step_is_identity() {
        let mut rng = RandomStream::new(3);
        assert_eq!(besq_step(2.5, 2.0, 0.0, &mut rng), 2.5);
    }

    #[test]
    fn tiny_steps_stay_close() {
        // the exact transition degenerates continuously as dt -> 0
        let mut rng = RandomStream::new(5).substream_named("besq-tiny");
        for _ in 0..200 {
            let v = besq_step(1.0, 2.0, 1e-9, &mut rng);
            assert!((v - 1.0).abs() < 1e-3);
        }
    }
}
