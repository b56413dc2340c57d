//! Run configuration read from a JSON file. Every field has a default, so
//! `{}` is a valid file.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::calibration::Calibration;
use crate::error::{Error, Result};
use crate::hypermatrix::Limits;
use crate::reconstruct::DEFAULT_CANDIDATE_CAP;
use crate::rng::GENERATOR_NAME;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Must name the built-in generator.
    pub rng: String,
    pub limits: Limits,
    pub candidate_cap: usize,
    /// Grid points per unit of arc length in the bound searches.
    pub arc_density: usize,
    /// Replaces the frozen constants when present.
    pub calibration: Option<Calibration>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            rng: GENERATOR_NAME.to_string(),
            limits: Limits::default(),
            candidate_cap: DEFAULT_CANDIDATE_CAP,
            arc_density: 64,
            calibration: None,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: RunConfig = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.rng != GENERATOR_NAME {
            return Err(Error::InvalidParameter(format!(
                "generator {:?} is not available; only {GENERATOR_NAME:?} is built in",
                self.rng
            )));
        }
        if self.arc_density < 64 {
            return Err(Error::InvalidParameter("arc_density must be at least 64".into()));
        }
        Ok(())
    }

    pub fn calibration(&self) -> Calibration {
        self.calibration.clone().unwrap_or_else(Calibration::frozen)
    }
}
