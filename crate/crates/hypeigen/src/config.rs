//! Run configuration: a flat JSON object whose keys can be overridden from
//! the command line.
//!
//! Precedence, lowest first: built-in defaults, the `--config` file, flags.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub n: u32,
    /// `λ = lambda_frac · (n-1)²/4`.
    pub lambda_frac: f64,
    pub h: f64,
    pub r_max: f64,
    pub tol: f64,
    pub output_dir: PathBuf,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: 2,
            lambda_frac: 1.0,
            h: 0.01,
            r_max: 20.0,
            tol: 1e-10,
            output_dir: PathBuf::from("."),
            seed: 0,
        }
    }
}

/// Values given on the command line; `None` keeps the file or default.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub n: Option<u32>,
    pub lambda_frac: Option<f64>,
    pub h: Option<f64>,
    pub r_max: Option<f64>,
    pub tol: Option<f64>,
    pub output_dir: Option<PathBuf>,
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("bad config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Defaults, then the optional file, then the flags; the result is
    /// validated.
    pub fn resolve(file: Option<&Path>, flags: &Overrides) -> Result<Self, CliError> {
        let mut cfg = match file {
            Some(p) => Self::load(p)?,
            None => RunConfig::default(),
        };
        cfg.apply(flags);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(v) = o.n {
            self.n = v;
        }
        if let Some(v) = o.lambda_frac {
            self.lambda_frac = v;
        }
        if let Some(v) = o.h {
            self.h = v;
        }
        if let Some(v) = o.r_max {
            self.r_max = v;
        }
        if let Some(v) = o.tol {
            self.tol = v;
        }
        if let Some(v) = &o.output_dir {
            self.output_dir = v.clone();
        }
        if let Some(v) = o.seed {
            self.seed = v;
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        if self.n < 2 {
            return bad(format!("n must be at least 2, got {}", self.n));
        }
        if !(self.lambda_frac > 0.0 && self.lambda_frac <= 1.0) {
            return bad(format!("lambda_frac must lie in (0, 1], got {}", self.lambda_frac));
        }
        for (name, v) in [("h", self.h), ("r_max", self.r_max), ("tol", self.tol)] {
            if !(v > 0.0) || !v.is_finite() {
                return bad(format!("{name} must be positive and finite, got {v}"));
            }
        }
        Ok(())
    }

    pub fn lambda(&self) -> f64 {
        self.lambda_frac * hypeigen_core::lambda1(self.n)
    }
}
