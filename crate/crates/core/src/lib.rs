//! Numerical kernels for random walks and diffusions in random potentials.
//!
//! The crate is organized around one pipeline:
//!
//! * [`stable`] — strictly stable laws: parameter validation, characteristic
//!   function, exact sampling, and discretized paths;
//! * [`environment`] — two-sided random-walk potentials built from step
//!   models, and the translation between potentials and jump-rate fields;
//! * [`fluctuations`] — path functionals (extrema, reflected range, passage
//!   times, undershoots, ladder variables) and Monte Carlo estimators built
//!   from them;
//! * [`mittag_leffler`] — the Mittag-Leffler function with derivatives,
//!   its first negative roots, closed-form Laplace transforms of hitting
//!   functionals, and Gaver–Stehfest inversion;
//! * [`diffusion`] — squared-Bessel bridges and the quenched hitting-time
//!   construction, plus the annealed sampler for the limiting localization
//!   variable;
//! * [`rwre`] — nearest-neighbour random walks in the sampled environments
//!   and the classifier for their lower escape rates.
//!
//! All randomness flows through [`rng::RandomStream`], a splittable
//! counter-keyed generator: results depend only on `(seed, substream path)`,
//! never on scheduling, so callers may fan substreams out across threads
//! and still reproduce runs bit for bit.

pub mod diffusion;
pub mod environment;
pub mod fluctuations;
pub mod grid;
pub mod mc;
pub mod mittag_leffler;
pub mod norming;
pub mod rng;
pub mod rwre;
pub mod stable;

pub use grid::CadlagGrid;
pub use mc::McEstimate;
pub use rng::{RandomStream, StreamKey};
