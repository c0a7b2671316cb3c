use std::path::{Path, PathBuf};

use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{emit_profile_plotdata, rng_for, AssertionResult};
use crate::engine::RateProfile;
use crate::error::Result;
use crate::phase::Field;

/// Per-run state handed to experiments: output directory, seed, collected
/// assertions and emitted files.
pub(crate) struct Ctx {
    out: PathBuf,
    seed: u64,
    assertions: Vec<AssertionResult>,
    files: Vec<String>,
}

impl Ctx {
    pub fn new(out: PathBuf, seed: u64) -> Self {
        Ctx {
            out,
            seed,
            assertions: Vec::new(),
            files: Vec::new(),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn out(&self) -> &Path {
        &self.out
    }

    pub fn rng(&self, stream: u64) -> ChaCha8Rng {
        rng_for(self.seed, stream)
    }

    pub fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.assertions.push(AssertionResult {
            name: name.into(),
            pass,
            detail: detail.into(),
        });
    }

    fn track(&mut self, path: &Path) {
        let rel = path.strip_prefix(&self.out).unwrap_or(path);
        self.files.push(rel.to_string_lossy().replace('\\', "/"));
    }

    pub fn json<T: Serialize + ?Sized>(&mut self, name: &str, value: &T) -> Result<()> {
        let path = self.out.join(name);
        std::fs::write(&path, serde_json::to_string_pretty(value)? + "\n")?;
        self.track(&path);
        Ok(())
    }

    pub fn text(&mut self, name: &str, contents: &str) -> Result<()> {
        let path = self.out.join(name);
        std::fs::write(&path, contents)?;
        self.track(&path);
        Ok(())
    }

    pub fn profile(&mut self, name: &str, profile: &RateProfile) -> Result<()> {
        for p in emit_profile_plotdata(profile, &self.out.join(name))? {
            self.track(&p);
        }
        Ok(())
    }

    pub fn field(&mut self, stem: &str, u: &Field) -> Result<()> {
        for p in u.write(&self.out, stem)? {
            self.track(&p);
        }
        Ok(())
    }

    pub fn finish(self) -> (Vec<AssertionResult>, Vec<String>) {
        (self.assertions, self.files)
    }
}
