//! Experiment registry, JSON configuration, deterministic seeding and report
//! emission.
//!
//! ```no_run
//! use attractor_lab::harness::{run_experiment, ExperimentConfig};
//!
//! let cfg: ExperimentConfig = serde_json::from_str(
//!     r#"{"experiment": "ode-comparison", "seed": 7, "out_dir": "runs/ode"}"#,
//! ).unwrap();
//! let report = run_experiment(&cfg).unwrap();
//! assert!(report.pass);
//! ```

mod context;
mod exp_determinism;
mod exp_elliptic;
mod exp_parabolic;
mod exp_toy;
mod plane;

use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::engine::RateProfile;
use crate::error::{Error, Result};

pub(crate) use context::Ctx;
pub use exp_elliptic::oracle_residual;
pub use exp_toy::{hausdorff_to_unit_disk, log_polar_seeds};

/// One experiment run, as read from a JSON config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: String,
    /// Experiment-specific parameters; omitted keys take their defaults.
    #[serde(default = "empty_object")]
    pub params: serde_json::Value,
    #[serde(default)]
    pub seed: u64,
    /// Defaults to `runs/<experiment>`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
}

fn empty_object() -> serde_json::Value {
    serde_json::Value::Object(Default::default())
}

impl ExperimentConfig {
    pub fn new(experiment: impl Into<String>, seed: u64) -> Self {
        ExperimentConfig {
            experiment: experiment.into(),
            params: empty_object(),
            seed,
            out_dir: None,
        }
    }

    pub fn with_out_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.out_dir = Some(dir.into());
        self
    }

    pub fn with_params(mut self, params: serde_json::Value) -> Self {
        self.params = params;
        self
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn resolved_out_dir(&self) -> PathBuf {
        self.out_dir
            .clone()
            .unwrap_or_else(|| PathBuf::from("runs").join(&self.experiment))
    }

    /// SHA-256 of the canonical JSON of `(experiment, params, seed)`.
    pub fn hash(&self) -> String {
        let canon = serde_json::json!({
            "experiment": self.experiment,
            "params": self.params,
            "seed": self.seed,
        });
        sha256_hex(canon.to_string().as_bytes())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssertionResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Artifact {
    /// Relative to the run's output directory.
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

/// Written to `<out_dir>/report.json` after every run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub experiment: String,
    pub config_hash: String,
    pub seed: u64,
    pub wall_time_s: f64,
    pub pass: bool,
    pub assertions: Vec<AssertionResult>,
    pub artifacts: Vec<Artifact>,
}

impl RunReport {
    pub fn read(dir: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(dir.join("report.json"))?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn failed(&self) -> Vec<&AssertionResult> {
        self.assertions.iter().filter(|a| !a.pass).collect()
    }
}

/// Registry row returned by [`list_experiments`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentInfo {
    pub name: &'static str,
    pub description: &'static str,
    /// Parameter keys with their default values.
    pub params: serde_json::Value,
}

struct Entry {
    name: &'static str,
    description: &'static str,
    defaults: fn() -> serde_json::Value,
    validate: fn(&serde_json::Value) -> Result<()>,
    run: fn(&serde_json::Value, &mut Ctx) -> Result<()>,
}

macro_rules! entry {
    ($name:literal, $desc:literal, $params:ty, $run:path) => {
        Entry {
            name: $name,
            description: $desc,
            defaults: || serde_json::to_value(<$params>::default()).expect("params serialize"),
            validate: |v| parse_params::<$params>(v).map(|_| ()),
            run: |v, ctx| $run(&parse_params::<$params>(v)?, ctx),
        }
    };
}

fn registry() -> Vec<Entry> {
    let mut r = vec![
        entry!(
            "annulus-plateau",
            "certified PlateauPoly(2) solve on the annulus 1<|x|<40; profile and plateau on the deep set",
            exp_elliptic::AnnulusParams,
            exp_elliptic::run_annulus
        ),
        entry!(
            "constant-exactness",
            "constant data: logistic evolution of y0=3 and constant elliptic solutions",
            exp_parabolic::ExactnessParams,
            exp_parabolic::run_exactness
        ),
        entry!(
            "determinism",
            "reruns experiments with the same seed and compares artifact hashes",
            exp_determinism::DeterminismParams,
            exp_determinism::run
        ),
        entry!(
            "directional-uniformity",
            "rotation-contraction: directional omega-nets against each other and the full net",
            exp_toy::DirectionalParams,
            exp_toy::run_directional
        ),
        entry!(
            "dumbbell-plateau",
            "two squares joined by a thin corridor; plateaus resolved per deep component",
            exp_elliptic::DumbbellParams,
            exp_elliptic::run_dumbbell
        ),
        entry!(
            "ode-comparison",
            "cubic reaction-diffusion: sup-norm at t against the comparison ODE bound",
            exp_parabolic::OdeParams,
            exp_parabolic::run_ode
        ),
        entry!(
            "semigroup-law",
            "shift/evolve commutation and the extended semigroup law on periodic grids",
            exp_parabolic::LawParams,
            exp_parabolic::run_law
        ),
        entry!(
            "subharmonicity",
            "subharmonic defect of the annulus and dumbbell solutions under one refinement",
            exp_elliptic::SubharmonicParams,
            exp_elliptic::run_subharmonic
        ),
        entry!(
            "toy-attractor",
            "rotation-contraction attractor against the unit disk; linear contraction profile",
            exp_toy::ToyParams,
            exp_toy::run_toy
        ),
    ];
    r.sort_by_key(|e| e.name);
    r
}

fn lookup(name: &str) -> Result<Entry> {
    registry().into_iter().find(|e| e.name == name).ok_or_else(|| {
        let known: Vec<_> = registry().iter().map(|e| e.name).collect();
        Error::Config(format!("unknown experiment `{name}`; known: {}", known.join(", ")))
    })
}

pub(crate) fn parse_params<P: DeserializeOwned>(v: &serde_json::Value) -> Result<P> {
    P::deserialize(v).map_err(|e| Error::Config(format!("params: {e}")))
}

/// Sorted registry listing.
pub fn list_experiments() -> Vec<ExperimentInfo> {
    registry()
        .into_iter()
        .map(|e| ExperimentInfo {
            name: e.name,
            description: e.description,
            params: (e.defaults)(),
        })
        .collect()
}

/// Checks the experiment name and parameters without running anything.
pub fn validate_config(cfg: &ExperimentConfig) -> Result<()> {
    if !cfg.params.is_object() {
        return Err(Error::Config("params must be a JSON object".into()));
    }
    (lookup(&cfg.experiment)?.validate)(&cfg.params)
}

/// Runs the named experiment, writes its artifacts and `report.json` into the
/// output directory, and returns the report.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunReport> {
    validate_config(cfg)?;
    let entry = lookup(&cfg.experiment)?;
    let out = cfg.resolved_out_dir();
    std::fs::create_dir_all(&out)?;
    let mut ctx = Ctx::new(out.clone(), cfg.seed);
    let start = Instant::now();
    (entry.run)(&cfg.params, &mut ctx).map_err(|e| with_context(e, &cfg.experiment))?;
    let wall_time_s = start.elapsed().as_secs_f64();
    let (assertions, files) = ctx.finish();
    let artifacts = files
        .iter()
        .map(|rel| {
            let bytes = std::fs::read(out.join(rel))?;
            Ok(Artifact {
                path: rel.clone(),
                sha256: sha256_hex(&bytes),
                bytes: bytes.len() as u64,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let report = RunReport {
        experiment: cfg.experiment.clone(),
        config_hash: cfg.hash(),
        seed: cfg.seed,
        wall_time_s,
        pass: !assertions.is_empty() && assertions.iter().all(|a| a.pass),
        assertions,
        artifacts,
    };
    std::fs::write(out.join("report.json"), serde_json::to_string_pretty(&report)? + "\n")?;
    Ok(report)
}

fn with_context(e: Error, experiment: &str) -> Error {
    match e {
        Error::Config(m) => Error::Config(m),
        Error::InvalidArgument(m) => Error::InvalidArgument(format!("{experiment}: {m}")),
        Error::Io(m) => Error::Io(format!("{experiment}: {m}")),
        other => other,
    }
}

/// Writes `<path>` (the profile CSV) and `<path>.json` with the log-linear
/// fit `{slope, intercept, r2, n}`; fit fields are null when fewer than two
/// positive entries exist.
pub fn emit_profile_plotdata(profile: &RateProfile, path: &Path) -> Result<[PathBuf; 2]> {
    if profile.is_empty() {
        return Err(Error::EmptyProfile);
    }
    std::fs::write(path, profile.to_csv())?;
    let fit = profile.log_linear_fit();
    let sidecar = serde_json::json!({
        "target": profile.target,
        "n": profile.entries.len(),
        "slope": fit.map(|f| f.0),
        "intercept": fit.map(|f| f.1),
        "r2": fit.map(|f| f.2),
    });
    let mut json = path.as_os_str().to_owned();
    json.push(".json");
    let json = PathBuf::from(json);
    std::fs::write(&json, serde_json::to_string_pretty(&sidecar)? + "\n")?;
    Ok([path.to_path_buf(), json])
}

/// Generator for substream `stream` of `seed`. Streams are independent, so
/// work items can draw in any order or thread.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::RateProfile;
    use rand::Rng;

    #[test]
    fn registry_is_sorted_and_complete() {
        let names: Vec<_> = list_experiments().iter().map(|e| e.name).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
        assert_eq!(names.len(), 9);
        assert!(names.contains(&"annulus-plateau"));
        assert!(names.contains(&"directional-uniformity"));
    }

    #[test]
    fn unknown_keys_are_named() {
        let e = serde_json::from_str::<ExperimentConfig>(r#"{"experiment": "ode-comparison", "dx": 1}"#).unwrap_err();
        assert!(e.to_string().contains("dx"));
        let cfg = ExperimentConfig::new("ode-comparison", 0).with_params(serde_json::json!({"dx": 0.1}));
        match validate_config(&cfg) {
            Err(Error::Config(m)) => assert!(m.contains("dx"), "{m}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_experiment_is_a_config_error() {
        assert!(matches!(
            validate_config(&ExperimentConfig::new("nope", 0)),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = (0..4).map(|_| rng_for(5, 1).gen()).collect();
        let mut r = rng_for(5, 1);
        let b: u64 = r.gen();
        assert_eq!(a[0], b);
        assert_ne!(rng_for(5, 2).gen::<u64>(), b);
        assert_ne!(rng_for(6, 1).gen::<u64>(), b);
    }

    #[test]
    fn config_hash_ignores_out_dir() {
        let a = ExperimentConfig::new("ode-comparison", 3);
        let b = a.clone().with_out_dir("/tmp/x");
        assert_eq!(a.hash(), b.hash());
        assert_ne!(a.hash(), ExperimentConfig::new("ode-comparison", 4).hash());
    }

    #[test]
    fn plotdata_sidecar() {
        let dir = tempfile::tempdir().unwrap();
        let mut p = RateProfile::new("K");
        for d in [1.0, 2.0, 3.0] {
            p.push(d, 2.0 * (-2.0 * d).exp(), None);
        }
        let [csv, json] = emit_profile_plotdata(&p, &dir.path().join("p.csv")).unwrap();
        assert!(csv.exists());
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
        assert!((v["slope"].as_f64().unwrap() + 2.0).abs() < 0.01);

        let mut one = RateProfile::new("K");
        one.push(1.0, 0.5, None);
        let [csv, json] = emit_profile_plotdata(&one, &dir.path().join("q.csv")).unwrap();
        assert!(std::fs::read_to_string(csv).unwrap().lines().count() == 2);
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
        assert!(v["slope"].is_null() && v["r2"].is_null());

        assert_eq!(
            emit_profile_plotdata(&RateProfile::new("K"), &dir.path().join("e.csv")),
            Err(Error::EmptyProfile)
        );
    }
}
