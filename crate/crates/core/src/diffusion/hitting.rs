//! Quenched hitting time of a positive level by the diffusion in a
//! frozen potential, through its local-time representation: in scale
//! coordinates the local-time profile at the hitting time is a squared
//! Bessel process of dimension two across the traversed stretch and of
//! dimension zero on the far side of the start, and the hitting time is
//! the speed-weighted integral of that profile.

use super::besq::besq_step;
use super::DiffusionError;
use crate::environment::Environment;
use crate::fluctuations::{hitting_envelope, Reach};
use crate::grid::CadlagGrid;
use crate::rng::RandomStream;

/// One sampled hitting time and its two speed-measure pieces:
/// `sigma = i1 + i2`, `i1` from the stretch between start and level,
/// `i2` from the excursions behind the start.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuenchedHit {
    pub v: f64,
    pub sigma: f64,
    pub i1: f64,
    pub i2: f64,
    /// Subdivisions per unit length used for the profile integrals.
    pub mesh: u32,
}

/// `integral of exp(sign * V(u)) du` over `[lo, hi]`, exact on each unit
/// cell of the piecewise-constant potential.
fn integral_exp_v(
    env: &Environment,
    lo: f64,
    hi: f64,
    sign: f64,
) -> Result<f64, DiffusionError> {
    debug_assert!(lo <= hi);
    let mut acc = 0.0f64;
    let mut u = lo;
    while u < hi {
        let next = (u.floor() + 1.0).min(hi);
        let mid = 0.5 * (u + next);
        acc += (sign * env.potential_at(mid)?).exp() * (next - u);
        u = next;
    }
    if acc.is_finite() {
        Ok(acc)
    } else {
        Err(DiffusionError::ScaleOverflow)
    }
}

/// Scale function of the frozen potential:
/// `A(x) = integral of exp(V(u)) du from 0 to x`, signed.
pub fn scale_integral(env: &Environment, x: f64) -> Result<f64, DiffusionError> {
    if !x.is_finite() {
        return Err(DiffusionError::InvalidParameter(format!(
            "scale argument must be finite, got {x}"
        )));
    }
    if x >= 0.0 {
        integral_exp_v(env, 0.0, x, 1.0)
    } else {
        Ok(-integral_exp_v(env, x, 0.0, 1.0)?)
    }
}

/// The potential as a two-sided step path on the unit grid, for the
/// fluctuation functionals.
pub fn potential_grid(env: &Environment) -> Result<CadlagGrid, DiffusionError> {
    let half = env.half_length() as i64;
    let mut incs_pos = Vec::with_capacity(half as usize);
    let mut incs_neg = Vec::with_capacity(half as usize);
    for k in 0..half {
        incs_pos.push(env.potential_step(k)?);
        incs_neg.push(-env.potential_step(-k - 1)?);
    }
    Ok(CadlagGrid::two_sided(1.0, &incs_pos, &incs_neg))
}

/// Pathwise surrogate for the logarithm of the hitting time of `v`: the
/// largest barrier the diffusion must negotiate, read off the potential.
pub fn hitting_surrogate(env: &Environment, v: f64) -> Result<f64, DiffusionError> {
    let grid = potential_grid(env)?;
    match hitting_envelope(&grid, v)? {
        Reach::Attained(e) => Ok(e),
        Reach::SpanExhausted => Err(DiffusionError::Range),
    }
}

/// Sample the hitting time of level `v > 0` from the origin in the frozen
/// environment, with `mesh` subdivisions per unit and the backward
/// local-time integral truncated `max_depth` units behind the start.
pub fn quenched_hitting_time(
    env: &Environment,
    v: f64,
    mesh: u32,
    max_depth: u32,
    rng: &mut RandomStream,
) -> Result<QuenchedHit, DiffusionError> {
    let half = env.half_length() as f64;
    if !(v > 0.0 && v.is_finite()) {
        return Err(DiffusionError::InvalidParameter(format!(
            "level must be positive and finite, got {v}"
        )));
    }
    if v > half || max_depth as f64 > half {
        return Err(DiffusionError::InvalidParameter(format!(
            "level {v} or depth {max_depth} beyond the environment span {half}"
        )));
    }
    if mesh == 0 || max_depth == 0 {
        return Err(DiffusionError::InvalidParameter(
            "mesh and depth must be positive".into(),
        ));
    }

    // forward stretch: node scale-increments and speed weights,
    // both exact per subinterval
    let m_fwd = ((v * mesh as f64).ceil() as usize).max(1);
    let dx = v / m_fwd as f64;
    let mut clock = Vec::with_capacity(m_fwd);
    let mut weight = Vec::with_capacity(m_fwd);
    for j in 0..m_fwd {
        let lo = j as f64 * dx;
        let hi = (j + 1) as f64 * dx;
        clock.push(integral_exp_v(env, lo, hi, 1.0)?);
        weight.push(integral_exp_v(env, lo, hi, -1.0)?);
    }

    // dimension-two profile grown from the level back to the start
    let mut z = 0.0f64;
    let mut i1 = 0.0f64;
    for j in (0..m_fwd).rev() {
        let z_next = besq_step(z, 2.0, clock[j], rng);
        i1 += 0.5 * (z + z_next) * weight[j];
        z = z_next;
    }

    // dimension-zero continuation behind the start, absorbed or truncated
    let mut i2 = 0.0f64;
    let dxb = 1.0 / mesh as f64;
    let steps_back = max_depth as u64 * mesh as u64;
    let mut alive = z > 0.0;
    let mut zb = z;
    for j in 0..steps_back {
        if !alive {
            break;
        }
        let hi = -(j as f64) * dxb;
        let lo = -((j + 1) as f64) * dxb;
        let dt = integral_exp_v(env, lo, hi, 1.0)?;
        if dt < 1e-280 {
            // the remaining scale clock has underflowed: the profile can
            // no longer be absorbed, which is the escape-to-the-left event
            return Err(DiffusionError::TruncatedI2 { partial: i1 + i2 });
        }
        let w = integral_exp_v(env, lo, hi, -1.0)?;
        let z_next = besq_step(zb, 0.0, dt, rng);
        i2 += 0.5 * (zb + z_next) * w;
        zb = z_next;
        alive = zb > 0.0;
    }
    if alive {
        return Err(DiffusionError::TruncatedI2 { partial: i1 + i2 });
    }

    Ok(QuenchedHit {
        v,
        sigma: i1 + i2,
        i1,
        i2,
        mesh,
    })
}
