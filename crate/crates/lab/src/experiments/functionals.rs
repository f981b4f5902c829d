//! Path-functional oracle suite: short random two-sided paths from several
//! step models, with every functional checked against a brute-force or
//! order-theoretic oracle. All comparisons are exact; any violation is a
//! bug, not noise.

use anyhow::Result;

use sinai_core::environment::StepModel;
use sinai_core::fluctuations::{
    first_passage, hitting_envelope, reflected_range, running_extrema, undershoot, Direction,
    Reach,
};
use sinai_core::{CadlagGrid, RandomStream};

use crate::config::RunPlan;
use crate::record::{Estimate, ResultRecord, Verdict};

fn models() -> Result<Vec<(&'static str, StepModel)>> {
    Ok(vec![
        ("gaussian", StepModel::gaussian()),
        ("heavy_balanced", StepModel::pareto_tail(1.5, 0.5, 1.0)?),
        ("heavy_skewed", StepModel::pareto_tail(1.2, 0.7, 0.5)?),
        ("lattice", StepModel::sinai_standard()),
    ])
}

fn brute_force_rise(grid: &CadlagGrid, a: f64) -> f64 {
    let (lo, hi) = grid.forward_indices(a).expect("window within span");
    let vs = &grid.values()[lo..=hi];
    let mut best = 0.0f64;
    for i in 0..vs.len() {
        for j in i..vs.len() {
            best = best.max(vs[j] - vs[i]);
        }
    }
    best
}

/// Random 50-step paths: the running rise against its quadratic-scan
/// oracle, passage values dominating their levels, and the monotone
/// structure of windows, passages, and the envelope.
pub fn functional_oracles(plan: &RunPlan) -> Result<ResultRecord> {
    let n_paths = plan.params.u64("n_paths", 1000)?;
    let n_steps = plan.params.usize("n_steps", 50)?;
    anyhow::ensure!(n_steps >= 4, "paths need at least 4 steps");
    let mut rec = ResultRecord::new(&plan.name, plan.params.echo(), plan.seed);
    let models = models()?;
    let stream = plan.stream();

    let mut rise_mismatches = 0u64;
    let mut undershoot_violations = 0u64;
    let mut window_violations = 0u64;
    let mut envelope_violations = 0u64;
    let mut extrema_violations = 0u64;
    let mut passage_violations = 0u64;
    let mut undershoot_attained = 0u64;

    for i in 0..n_paths {
        let mut rng = stream.substream(i);
        let model = &models[(i % models.len() as u64) as usize].1;
        let draw = |rng: &mut RandomStream, k: usize| -> Vec<f64> {
            (0..k).map(|_| model.sample_step(rng)).collect()
        };
        let pos = draw(&mut rng, n_steps);
        let neg = draw(&mut rng, n_steps);
        let grid = CadlagGrid::two_sided(1.0, &pos, &neg);
        let end = n_steps as f64;

        let rise = reflected_range(&grid, end)?.sup_reflection;
        if rise != brute_force_rise(&grid, end) {
            rise_mismatches += 1;
        }

        let ex = running_extrema(&grid, end)?;
        let end_value = *grid.values().last().expect("nonempty");
        if !(ex.inf <= 0.0 && ex.sup >= 0.0 && ex.sup >= end_value) {
            extrema_violations += 1;
        }
        if ex.sup_abs != ex.sup.abs().max(ex.inf.abs()) {
            extrema_violations += 1;
        }
        // the largest rise dominates the sup because the origin sits in
        // every forward window
        if rise < ex.sup {
            window_violations += 1;
        }

        // windows only grow; so must every windowed functional
        let quarters: Vec<f64> = (1..=4).map(|k| end * k as f64 / 4.0).collect();
        let mut prev_rise = -1.0f64;
        let mut prev_sup = f64::NEG_INFINITY;
        let mut prev_env = -1.0f64;
        for &a in &quarters {
            let r = reflected_range(&grid, a)?.sup_reflection;
            let s = running_extrema(&grid, a)?.sup;
            if r < prev_rise || s < prev_sup {
                window_violations += 1;
            }
            prev_rise = r;
            prev_sup = s;
            if let Reach::Attained(e) = hitting_envelope(&grid, a)? {
                if e < r || e < prev_env {
                    envelope_violations += 1;
                }
                prev_env = e;
            }
        }

        // passage values dominate their level in both directions
        for frac in [0.3, 0.7] {
            let level = frac * ex.sup;
            if level <= 0.0 {
                continue;
            }
            for dir in [Direction::Forward, Direction::Backward] {
                if let Reach::Attained(u) = undershoot(&grid, level, dir)? {
                    undershoot_attained += 1;
                    if u < level {
                        undershoot_violations += 1;
                    }
                }
            }
        }

        // passage times are monotone in the level
        let t_lo = first_passage(&grid, 0.25 * ex.sup, Direction::Forward).or_infinity();
        let t_hi = first_passage(&grid, 0.75 * ex.sup, Direction::Forward).or_infinity();
        if t_lo > t_hi {
            passage_violations += 1;
        }
    }

    rec.estimates.push(Estimate::mc(
        "undershoot_attained",
        undershoot_attained as f64,
        0.0,
        n_paths,
        plan.seed,
    ));
    rec.verdicts.push(Verdict::within(
        "rise_matches_brute_force",
        rise_mismatches as f64,
        0.0,
        format!("{rise_mismatches} mismatches over {n_paths} paths"),
    ));
    rec.verdicts.push(Verdict::within(
        "passage_value_dominates_level",
        undershoot_violations as f64,
        0.0,
        format!("{undershoot_violations} violations, {undershoot_attained} attained passages"),
    ));
    rec.verdicts.push(Verdict::within(
        "window_monotonicity",
        window_violations as f64,
        0.0,
        format!("{window_violations} violations"),
    ));
    rec.verdicts.push(Verdict::within(
        "envelope_dominates_and_grows",
        envelope_violations as f64,
        0.0,
        format!("{envelope_violations} violations"),
    ));
    rec.verdicts.push(Verdict::within(
        "extrema_bracket_origin_and_end",
        extrema_violations as f64,
        0.0,
        format!("{extrema_violations} violations"),
    ));
    rec.verdicts.push(Verdict::within(
        "passage_time_monotone_in_level",
        passage_violations as f64,
        0.0,
        format!("{passage_violations} violations"),
    ));
    Ok(rec)
}
