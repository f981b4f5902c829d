//! The diffusion layer: exact squared-Bessel transitions, the quenched
//! hitting time of a level through its local-time representation, and the
//! sampler for the renormalized local functional of the limit law.

mod besq;
mod hitting;
mod xi;

pub use besq::{besq_path, besq_step};
pub use hitting::{
    hitting_surrogate, potential_grid, quenched_hitting_time, scale_integral, QuenchedHit,
};
pub use xi::sample_xi;

use crate::environment::EnvError;
use crate::fluctuations::FluctError;
use crate::grid::GridError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DiffusionError {
    #[error("environment: {0}")]
    Env(#[from] EnvError),
    #[error("grid: {0}")]
    Grid(#[from] GridError),
    #[error("fluctuation: {0}")]
    Fluct(#[from] FluctError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("scale integral overflowed double precision")]
    ScaleOverflow,
    #[error("environment span exhausted before the functional settled")]
    Range,
    #[error("negative-side local time still alive at the depth budget; accumulated {partial}")]
    TruncatedI2 { partial: f64 },
    #[error("backward horizon cap reached before passage")]
    HorizonExceeded,
}
