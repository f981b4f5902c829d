//! Sampler for the renormalized local functional of the limit law: the
//! barrier envelope of a two-sided stable path over the unit forward
//! window, raised to the power `-alpha`. The forward window is meshed
//! uniformly; the backward side is grown in doubling stages (each stage
//! covers as much again as everything before it, at twice the step) until
//! the passage the envelope needs is attained.

use super::DiffusionError;
use crate::fluctuations::{hitting_envelope, Reach};
use crate::grid::CadlagGrid;
use crate::rng::RandomStream;
use crate::stable::{Spectral, StableLaw};

/// Hard cap on total backward steps; with doubling stages this spans a
/// range beyond any attainable passage depth.
const MAX_BACKWARD_STEPS: usize = 1 << 20;

/// Expected overshoot of a Gaussian walk at a crossing, in step
/// standard deviations: -zeta(1/2)/sqrt(2 pi).
const SIEGMUND_BETA: f64 = 0.582_597_2;

/// One draw of the functional `Xi = envelope^{-alpha}`.
pub fn sample_xi(
    law: &StableLaw,
    mesh: u32,
    rng: &mut RandomStream,
) -> Result<f64, DiffusionError> {
    if law.alpha() <= 1.0 {
        return Err(DiffusionError::InvalidParameter(format!(
            "functional requires index above one, got {}",
            law.alpha()
        )));
    }
    if mesh < 2 {
        return Err(DiffusionError::InvalidParameter(
            "mesh must be at least 2".into(),
        ));
    }
    let alpha = law.alpha();
    let n = mesh as usize;
    let dt = 1.0 / n as f64;
    let fwd_scale = dt.powf(1.0 / alpha);

    // at the Brownian point both halves of the envelope, the rise and
    // the undershoot, come up short by one expected Siegmund overshoot
    // each: a crossing is detected a step late and the sampled extremum
    // sits inside the continuous one; jump-driven laws take no such
    // universal correction and stay raw
    let envelope_shift = if law.spectral() == Spectral::Gaussian {
        2.0 * SIEGMUND_BETA * (2.0 * dt).sqrt()
    } else {
        0.0
    };

    // forward window [0, 1]
    let mut fwd_times = Vec::with_capacity(n);
    let mut fwd_values = Vec::with_capacity(n);
    let mut acc = 0.0f64;
    for j in 1..=n {
        acc += fwd_scale * law.sample(rng);
        fwd_times.push(j as f64 * dt);
        fwd_values.push(acc);
    }

    // backward side, grown stage by stage; the left branch read outward
    // from the origin is the negated copy of the law, the same dual
    // layout the frozen environment uses for its leftward steps, so the
    // increments of the assembled path are stationary across the origin
    let mut back_times: Vec<f64> = Vec::new();
    let mut back_values: Vec<f64> = Vec::new();
    let mut back_acc = 0.0f64;
    let mut span = 0.0f64;
    let mut stage = 0u32;
    loop {
        let (stage_span, h) = if stage == 0 {
            (1.0, dt)
        } else {
            let s = (1u64 << (stage - 1)) as f64;
            (s, s * dt)
        };
        let h_scale = h.powf(1.0 / alpha);
        for j in 1..=n {
            back_acc -= h_scale * law.sample(rng);
            back_times.push(span + j as f64 * h);
            back_values.push(back_acc);
        }
        span += stage_span;
        stage += 1;

        let grid = assemble(&back_times, &back_values, &fwd_times, &fwd_values);
        match hitting_envelope(&grid, 1.0)? {
            Reach::Attained(e) => {
                return Ok((e + envelope_shift).powf(-alpha));
            }
            Reach::SpanExhausted => {
                if back_times.len() + n > MAX_BACKWARD_STEPS {
                    return Err(DiffusionError::HorizonExceeded);
                }
            }
        }
    }
}

fn assemble(
    back_times: &[f64],
    back_values: &[f64],
    fwd_times: &[f64],
    fwd_values: &[f64],
) -> CadlagGrid {
    let total = back_times.len() + 1 + fwd_times.len();
    let mut times = Vec::with_capacity(total);
    let mut values = Vec::with_capacity(total);
    for i in (0..back_times.len()).rev() {
        times.push(-back_times[i]);
        values.push(back_values[i]);
    }
    times.push(0.0);
    values.push(0.0);
    times.extend_from_slice(fwd_times);
    values.extend_from_slice(fwd_values);
    CadlagGrid::new(times, values).expect("constructed increasing with origin")
}
