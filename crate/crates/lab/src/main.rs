use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use sinai_lab::{
    find, load_config, resolve_seed, run_experiment, ExperimentConfig, ResultRecord, RunPlan,
    ACCEPTANCE, DEFAULT_WORKERS, REGISTRY,
};

#[derive(Parser)]
#[command(name = "sinai-lab", version, about = "Seeded experiment driver for the random-walk and diffusion kernels")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one experiment and write record.json and data.csv.
    Run {
        /// Experiment name; overrides the config file's `name`.
        #[arg(long)]
        experiment: Option<String>,
        /// TOML or JSON config file.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Seed; beats SINAI_LAB_SEED and the config file.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads for the parallel sections.
        #[arg(long)]
        workers: Option<usize>,
        /// Output directory; default `lab-out/<experiment>`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List registered experiments with budgets.
    List,
    /// Run the acceptance suite at default parameters.
    Check {
        /// Seed for the whole suite.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
        /// If set, write each criterion's record under this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    };
    std::process::exit(code);
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.cmd {
        Cmd::Run {
            experiment,
            config,
            seed,
            workers,
            out,
        } => run(experiment, config, seed, workers, out),
        Cmd::List => {
            for e in REGISTRY {
                println!("{:<22} {:>8}   {}", e.name, e.budget, e.summary);
            }
            Ok(0)
        }
        Cmd::Check { seed, workers, out } => check(seed, workers, out),
    }
}

fn run(
    experiment: Option<String>,
    config_path: Option<PathBuf>,
    seed_flag: Option<u64>,
    workers_flag: Option<usize>,
    out_flag: Option<PathBuf>,
) -> Result<i32> {
    let config = match &config_path {
        Some(p) => load_config(p)?,
        None => ExperimentConfig::default(),
    };
    let name = match experiment.or_else(|| config.name.clone()) {
        Some(n) => n,
        None => {
            eprintln!("no experiment named; pass --experiment or set `name` in the config");
            return Ok(2);
        }
    };
    if find(&name).is_none() {
        eprintln!("unknown experiment {name:?}; see `sinai-lab list`");
        return Ok(2);
    }
    let seed = resolve_seed(seed_flag, config.seed)?;
    let workers = workers_flag.or(config.workers).unwrap_or(DEFAULT_WORKERS);
    let plan = RunPlan::new(&name, config.params.clone(), seed, workers);

    let record = run_experiment(&plan)?;
    let out_dir = out_flag
        .or(config.out_path)
        .unwrap_or_else(|| PathBuf::from("lab-out").join(&name));
    record.write_outputs(&out_dir)?;
    print_record(&record);
    println!("record: {}", out_dir.join("record.json").display());
    Ok(if record.all_pass() { 0 } else { 1 })
}

fn print_record(record: &ResultRecord) {
    println!("{} (seed {})", record.experiment, record.seed);
    for v in &record.verdicts {
        let mark = match v.pass {
            Some(true) => "pass",
            Some(false) => "FAIL",
            None => "info",
        };
        println!("  [{mark}] {}: {}", v.check, v.detail);
        if v.pass == Some(false) {
            println!("         margin {:.6e} vs tolerance {:.6e}", v.margin, v.tolerance);
        }
    }
}

fn check(seed_flag: Option<u64>, workers_flag: Option<usize>, out: Option<PathBuf>) -> Result<i32> {
    let seed = resolve_seed(seed_flag, None)?;
    let workers = workers_flag.unwrap_or(DEFAULT_WORKERS);
    let mut all_ok = true;
    for &(num, name) in ACCEPTANCE {
        let plan = RunPlan::new(name, BTreeMap::new(), seed, workers);
        let record = run_experiment(&plan)
            .with_context(|| format!("criterion {num} ({name}) failed to run"))?;
        let n_fail = record.failing().count();
        let ok = n_fail == 0;
        all_ok &= ok;
        println!(
            "criterion {num:02} {name:<24} {}",
            if ok { "PASS" } else { "FAIL" }
        );
        for v in record.failing() {
            println!(
                "    {}: margin {:.6e} vs tolerance {:.6e} ({})",
                v.check, v.margin, v.tolerance, v.detail
            );
        }
        if let Some(dir) = &out {
            record.write_outputs(&dir.join(format!("criterion-{num:02}-{name}")))?;
        }
    }
    println!("acceptance: {}", if all_ok { "PASS" } else { "FAIL" });
    Ok(if all_ok { 0 } else { 1 })
}
