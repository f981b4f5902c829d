//! The acceptance suite as a test target: every criterion runs at its
//! default parameters and seed, prints one pass/fail line, and fails the
//! build if any verdict inside it fails.

use std::collections::BTreeMap;

use sinai_lab::{run_experiment, RunPlan, ACCEPTANCE, DEFAULT_SEED, DEFAULT_WORKERS};

fn run_criterion(num: u32) {
    let &(_, name) = ACCEPTANCE
        .iter()
        .find(|&&(n, _)| n == num)
        .expect("criterion number registered");
    let plan = RunPlan::new(name, BTreeMap::new(), DEFAULT_SEED, DEFAULT_WORKERS);
    let record = match run_experiment(&plan) {
        Ok(r) => r,
        Err(e) => {
            println!("criterion {num:02} {name:<24} ERROR");
            panic!("criterion {num} ({name}) failed to run: {e:#}");
        }
    };
    let failing: Vec<String> = record
        .failing()
        .map(|v| {
            format!(
                "{}: margin {:.6e} vs tolerance {:.6e} ({})",
                v.check, v.margin, v.tolerance, v.detail
            )
        })
        .collect();
    println!(
        "criterion {num:02} {name:<24} {}",
        if failing.is_empty() { "pass" } else { "FAIL" }
    );
    for line in &failing {
        println!("    {line}");
    }
    assert!(
        failing.is_empty(),
        "criterion {num} ({name}) has failing verdicts:\n{}",
        failing.join("\n")
    );
}

macro_rules! criterion {
    ($fn_name:ident, $num:expr) => {
        #[test]
        fn $fn_name() {
            run_criterion($num);
        }
    };
}

criterion!(check_01_root_pair, 1);
criterion!(check_02_transform_identities, 2);
criterion!(check_03_clocked_band_exit, 3);
criterion!(check_04_confinement_decay_slope, 4);
criterion!(check_05_localization_transform, 5);
criterion!(check_06_reflected_passage_transform, 6);
criterion!(check_07_gambler_ruin, 7);
criterion!(check_08_path_functional_oracles, 8);
criterion!(check_09_range_inequalities, 9);
criterion!(check_10_flat_potential_passage, 10);
criterion!(check_11_surrogate_convergence, 11);
criterion!(check_12_annealed_limit_law, 12);
