//! The experiment registry: every named experiment, its one-line
//! description, and its declared runtime budget at default parameters on
//! an eight-core desktop.

mod annealed;
mod functionals;
mod grid_paths;
mod quenched;
mod roots;
mod walks;
mod xi;

use anyhow::Result;

use crate::config::RunPlan;
use crate::record::ResultRecord;

pub struct ExperimentInfo {
    pub name: &'static str,
    pub summary: &'static str,
    pub budget: &'static str,
    pub run: fn(&RunPlan) -> Result<ResultRecord>,
}

/// Registered experiments, in listing order: closed-form and exact checks
/// first, then the Monte Carlo families by subject.
pub const REGISTRY: &[ExperimentInfo] = &[
    ExperimentInfo {
        name: "ksharp-roots",
        summary: "first negative roots of the Mittag-Leffler derivative pair, residual checks, and the decay-rate dispatch across indices",
        budget: "< 1 s",
        run: roots::ksharp_roots,
    },
    ExperimentInfo {
        name: "transform-identities",
        summary: "collapse of the clocked-passage transform at unit level and agreement of the two index-two closed forms",
        budget: "< 1 s",
        run: roots::transform_identities,
    },
    ExperimentInfo {
        name: "xi-cdf-inversion",
        summary: "distribution function of the localization functional recovered from its transform: monotonicity, range, and mass placement",
        budget: "< 5 s",
        run: roots::xi_cdf_inversion,
    },
    ExperimentInfo {
        name: "classifier-table",
        summary: "liminf rate classification across the power and square-root normalization families against the analytic threshold",
        budget: "< 1 s",
        run: roots::classifier_table,
    },
    ExperimentInfo {
        name: "functional-oracles",
        summary: "path functionals on random step paths against brute-force recomputation, with exact monotonicity and domination checks",
        budget: "< 10 s",
        run: functionals::functional_oracles,
    },
    ExperimentInfo {
        name: "exit-gambler",
        summary: "band-exit frequencies for lattice and Gaussian walks: the ruin formula exactly, and stability under band doubling",
        budget: "~ 1 min",
        run: walks::exit_gambler,
    },
    ExperimentInfo {
        name: "renewal-scaling",
        summary: "descending-record renewal counts: monotone growth in the level and linear increment ratios",
        budget: "~ 2 min",
        run: walks::renewal_scaling,
    },
    ExperimentInfo {
        name: "ksharp-mc",
        summary: "decay slope of the confinement probability at long horizons against the analytic rate",
        budget: "~ 5 min",
        run: walks::ksharp_mc,
    },
    ExperimentInfo {
        name: "range-inequalities",
        summary: "sub-multiplicativity of confinement over concatenated stretches and the lower bound on the defect ratio",
        budget: "~ 4 min",
        run: walks::range_inequalities,
    },
    ExperimentInfo {
        name: "tau-sharp-mc",
        summary: "grid passage of the reflected walk through the unit level against the hyperbolic-secant transform",
        budget: "~ 2 min",
        run: grid_paths::tau_sharp_mc,
    },
    ExperimentInfo {
        name: "exit-bertoin-mc",
        summary: "clocked band exit for grid paths against the corrected closed form, with the uncorrected variant reported and rejected",
        budget: "~ 3 min",
        run: grid_paths::exit_bertoin_mc,
    },
    ExperimentInfo {
        name: "xi-laplace-mc",
        summary: "sampled localization functional against its closed-form Laplace transform across indices and spectral sides",
        budget: "~ 5 min",
        run: xi::xi_laplace_mc,
    },
    ExperimentInfo {
        name: "quenched-bm",
        summary: "passage times under a flat potential against the reflection-principle law",
        budget: "~ 1 min",
        run: quenched::quenched_bm,
    },
    ExperimentInfo {
        name: "surrogate-convergence",
        summary: "barrier surrogate for the log passage time tightening as the level grows",
        budget: "~ 5 min",
        run: quenched::surrogate_convergence,
    },
    ExperimentInfo {
        name: "envelope-table",
        summary: "quantile table of the corridor normalizations across horizons and exponents",
        budget: "~ 2 min",
        run: annealed::envelope_table,
    },
    ExperimentInfo {
        name: "rwre-limit-law",
        summary: "scaled running maximum of the walk in a random potential against the inverted limit transform",
        budget: "~ 4 min",
        run: annealed::rwre_limit_law,
    },
];

pub fn find(name: &str) -> Option<&'static ExperimentInfo> {
    REGISTRY.iter().find(|e| e.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique_and_kebab() {
        let mut seen = std::collections::BTreeSet::new();
        for e in REGISTRY {
            assert!(seen.insert(e.name), "duplicate {}", e.name);
            assert!(
                e.name.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '-'),
                "non-kebab name {}",
                e.name
            );
        }
    }

    #[test]
    fn find_hits_and_misses() {
        assert!(find("ksharp-roots").is_some());
        assert!(find("no-such-experiment").is_none());
    }
}
