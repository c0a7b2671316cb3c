use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::{run_experiment, Ctx, ExperimentConfig, RunReport};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubRun {
    pub experiment: String,
    #[serde(default = "super::empty_object")]
    pub params: serde_json::Value,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DeterminismParams {
    /// Experiments rerun with this run's seed.
    pub runs: Vec<SubRun>,
    /// Directory holding `<experiment>/report.json` from an earlier run with
    /// the same seed. Without it every experiment runs twice.
    pub reference_dir: Option<PathBuf>,
}

impl Default for DeterminismParams {
    fn default() -> Self {
        let names = [
            "ode-comparison",
            "constant-exactness",
            "semigroup-law",
            "toy-attractor",
            "directional-uniformity",
            "annulus-plateau",
            "dumbbell-plateau",
            "subharmonicity",
        ];
        DeterminismParams {
            runs: names
                .iter()
                .map(|n| SubRun {
                    experiment: (*n).into(),
                    params: super::empty_object(),
                })
                .collect(),
            reference_dir: None,
        }
    }
}

#[derive(Serialize)]
struct Comparison {
    experiment: String,
    config_hash: String,
    /// artifact path -> sha256 (of the rerun)
    artifacts: BTreeMap<String, String>,
    mismatches: Vec<String>,
}

fn hashes(r: &RunReport) -> BTreeMap<String, String> {
    r.artifacts.iter().map(|a| (a.path.clone(), a.sha256.clone())).collect()
}

pub(crate) fn run(p: &DeterminismParams, ctx: &mut Ctx) -> Result<()> {
    if p.runs.iter().any(|r| r.experiment == "determinism") {
        return Err(Error::Config("runs: determinism cannot rerun itself".into()));
    }
    let mut out = Vec::new();
    for sub in &p.runs {
        let cfg = ExperimentConfig {
            experiment: sub.experiment.clone(),
            params: sub.params.clone(),
            seed: ctx.seed(),
            out_dir: None,
        };
        super::validate_config(&cfg)?;
        let reference = match &p.reference_dir {
            Some(dir) => RunReport::read(&dir.join(&sub.experiment))?,
            None => run_experiment(&cfg.clone().with_out_dir(ctx.out().join("first").join(&sub.experiment)))?,
        };
        let rerun = run_experiment(&cfg.clone().with_out_dir(ctx.out().join("rerun").join(&sub.experiment)))?;
        let mut mismatches = Vec::new();
        if reference.config_hash != rerun.config_hash {
            mismatches.push("config hash differs from the reference run".to_string());
        }
        let (a, b) = (hashes(&reference), hashes(&rerun));
        for (path, h) in &a {
            match b.get(path) {
                Some(h2) if h2 == h => {}
                Some(_) => mismatches.push(format!("{path}: content differs")),
                None => mismatches.push(format!("{path}: missing in rerun")),
            }
        }
        for path in b.keys().filter(|k| !a.contains_key(*k)) {
            mismatches.push(format!("{path}: only in rerun"));
        }
        ctx.check(
            &format!("{}_identical", sub.experiment),
            mismatches.is_empty() && !a.is_empty(),
            if mismatches.is_empty() {
                format!("{} artifacts byte-identical", a.len())
            } else {
                mismatches.join("; ")
            },
        );
        out.push(Comparison {
            experiment: sub.experiment.clone(),
            config_hash: rerun.config_hash.clone(),
            artifacts: b,
            mismatches,
        });
    }
    ctx.json("determinism.json", &out)?;
    Ok(())
}
