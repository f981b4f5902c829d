//! Result containers written by every experiment: point estimates, named
//! verdicts with their tolerances, and enough provenance to rerun the job.
//!
//! Records deliberately carry no timestamps and no worker counts, so two
//! runs of the same config and seed produce byte-identical files no matter
//! how the work was scheduled.

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

/// One scalar statistic at one parameter point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Estimate {
    pub stat: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, serde_json::Value>,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub se: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    pub seed: u64,
}

impl Estimate {
    /// Closed-form value: no sampling error, no sample size.
    pub fn closed(stat: &str, value: f64, seed: u64) -> Self {
        Self {
            stat: stat.into(),
            params: BTreeMap::new(),
            value,
            se: None,
            n: None,
            seed,
        }
    }

    pub fn mc(stat: &str, value: f64, se: f64, n: u64, seed: u64) -> Self {
        Self {
            stat: stat.into(),
            params: BTreeMap::new(),
            value,
            se: Some(se),
            n: Some(n),
            seed,
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.params.insert(key.into(), value.into());
        self
    }
}

/// One named check. `pass: None` marks a purely informational row.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Verdict {
    pub check: String,
    pub pass: Option<bool>,
    pub margin: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Verdict {
    /// Passes when the observed discrepancy stays within the tolerance.
    pub fn within(check: &str, margin: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        Self {
            check: check.into(),
            pass: Some(margin.abs() <= tolerance),
            margin,
            tolerance,
            detail: detail.into(),
        }
    }

    /// Passes when the observed value exceeds the floor; used for
    /// discrimination checks that must reject an alternative.
    pub fn exceeds(check: &str, margin: f64, floor: f64, detail: impl Into<String>) -> Self {
        Self {
            check: check.into(),
            pass: Some(margin > floor),
            margin,
            tolerance: floor,
            detail: detail.into(),
        }
    }

    /// Boolean check with no numeric margin.
    pub fn flag(check: &str, pass: bool, detail: impl Into<String>) -> Self {
        Self {
            check: check.into(),
            pass: Some(pass),
            margin: if pass { 0.0 } else { 1.0 },
            tolerance: 0.0,
            detail: detail.into(),
        }
    }

    /// Informational row; never fails a run.
    pub fn info(check: &str, value: f64, detail: impl Into<String>) -> Self {
        Self {
            check: check.into(),
            pass: None,
            margin: value,
            tolerance: 0.0,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Provenance {
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mesh: Option<u64>,
    pub retries: u64,
}

impl Default for Provenance {
    fn default() -> Self {
        Self {
            version: env!("CARGO_PKG_VERSION").into(),
            mesh: None,
            retries: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResultRecord {
    pub experiment: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, serde_json::Value>,
    pub seed: u64,
    pub estimates: Vec<Estimate>,
    pub verdicts: Vec<Verdict>,
    pub provenance: Provenance,
}

impl ResultRecord {
    pub fn new(experiment: &str, params: BTreeMap<String, serde_json::Value>, seed: u64) -> Self {
        Self {
            experiment: experiment.into(),
            params,
            seed,
            estimates: Vec::new(),
            verdicts: Vec::new(),
            provenance: Provenance::default(),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass != Some(false))
    }

    pub fn failing(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| v.pass == Some(false))
    }

    /// Writes `record.json` and `data.csv` under `dir`, creating it.
    pub fn write_outputs(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let json = serde_json::to_string_pretty(self)?;
        fs::write(dir.join("record.json"), json + "\n")?;

        let mut w = csv::Writer::from_path(dir.join("data.csv"))?;
        w.write_record([
            "experiment",
            "stat",
            "params",
            "value",
            "se",
            "n",
            "seed",
            "verdict",
            "tolerance",
        ])?;
        for e in &self.estimates {
            w.write_record([
                self.experiment.as_str(),
                e.stat.as_str(),
                &compact_params(&e.params),
                &format!("{}", e.value),
                &e.se.map(|s| format!("{s}")).unwrap_or_default(),
                &e.n.map(|n| format!("{n}")).unwrap_or_default(),
                &format!("{}", e.seed),
                "",
                "",
            ])?;
        }
        for v in &self.verdicts {
            let outcome = match v.pass {
                Some(true) => "pass",
                Some(false) => "fail",
                None => "na",
            };
            w.write_record([
                self.experiment.as_str(),
                v.check.as_str(),
                "",
                &format!("{}", v.margin),
                "",
                "",
                &format!("{}", self.seed),
                outcome,
                &format!("{}", v.tolerance),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `k=v;k=v` rendering of a parameter map, keys in map order.
fn compact_params(params: &BTreeMap<String, serde_json::Value>) -> String {
    params
        .iter()
        .map(|(k, v)| match v {
            serde_json::Value::String(s) => format!("{k}={s}"),
            other => format!("{k}={other}"),
        })
        .collect::<Vec<_>>()
        .join(";")
}
