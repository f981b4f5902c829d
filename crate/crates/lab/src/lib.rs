//! Experiment driver around the numerical kernels: a registry of named
//! experiments, seeded parallel execution, result records with named
//! verdicts, and the acceptance suite that gates a release.
//!
//! Every experiment is a pure function of `(params, seed)`: records carry
//! no timestamps, reductions run in fixed task order, and per-task
//! substreams are keyed by index, so reruns are byte-identical for any
//! worker count.

pub mod config;
pub mod exec;
pub mod experiments;
pub mod record;

pub use config::{
    load_config, resolve_seed, ExperimentConfig, RunPlan, DEFAULT_SEED, DEFAULT_WORKERS,
};
pub use experiments::{find, ExperimentInfo, REGISTRY};
pub use record::{Estimate, Provenance, ResultRecord, Verdict};

use anyhow::Result;

/// The acceptance suite: ordinal and the experiment whose default
/// parameters implement that check. `sinai-lab check` runs them in order.
pub const ACCEPTANCE: &[(u32, &str)] = &[
    (1, "ksharp-roots"),
    (2, "transform-identities"),
    (3, "exit-bertoin-mc"),
    (4, "ksharp-mc"),
    (5, "xi-laplace-mc"),
    (6, "tau-sharp-mc"),
    (7, "exit-gambler"),
    (8, "functional-oracles"),
    (9, "range-inequalities"),
    (10, "quenched-bm"),
    (11, "surrogate-convergence"),
    (12, "rwre-limit-law"),
];

/// Raised when a run names an experiment outside the registry; the CLI
/// maps it to a usage error.
#[derive(Debug)]
pub struct UnknownExperiment(pub String);

impl std::fmt::Display for UnknownExperiment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "unknown experiment {:?}; see `sinai-lab list`", self.0)
    }
}

impl std::error::Error for UnknownExperiment {}

pub fn run_experiment(plan: &RunPlan) -> Result<ResultRecord> {
    match experiments::find(&plan.name) {
        Some(info) => (info.run)(plan),
        None => Err(UnknownExperiment(plan.name.clone()).into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn acceptance_names_are_registered() {
        for &(num, name) in ACCEPTANCE {
            assert!(find(name).is_some(), "criterion {num} names {name}");
        }
    }

    #[test]
    fn unknown_experiment_is_distinguishable() {
        let plan = RunPlan::new("nope", Default::default(), 1, 1);
        let err = run_experiment(&plan).unwrap_err();
        assert!(err.downcast_ref::<UnknownExperiment>().is_some());
    }
}
