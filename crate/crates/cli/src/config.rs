use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::failure::{CliError, CliResult};

/// Limits applied to every run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Guards {
    /// Largest prime at which group orders are computed.
    pub max_prime: u64,
    /// Largest bit length accepted for an input coefficient.
    pub max_coeff_bits: u64,
}

impl Default for Guards {
    fn default() -> Self {
        Guards { max_prime: 1000, max_coeff_bits: 4096 }
    }
}

/// Box selection as written in a config file.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxConfig {
    pub kind: String,
    pub x: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_mask: Option<u8>,
}

/// Settings shared by the subcommands, loadable from TOML with `--config`.
/// Command-line flags take precedence over the file.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(default)]
    pub subcommand: String,
    #[serde(default, skip_serializing_if = "Option::is_none", rename = "box")]
    pub box_spec: Option<BoxConfig>,
    #[serde(default)]
    pub primes: Vec<u64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub guards: Guards,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checkpoint: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let cfg: RunConfig = toml::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn save(&self, path: &Path) -> CliResult<()> {
        std::fs::write(path, self.to_toml()).map_err(|e| CliError::io(path, e))
    }

    pub fn check(&self) -> CliResult<()> {
        if self.guards.max_prime == 0 || self.guards.max_coeff_bits == 0 {
            return Err(CliError::Input("guards must be positive".into()));
        }
        Ok(())
    }

    /// Exports the prime guard to the core library.
    pub fn apply_guards(&self) {
        // Runs before any worker thread is started.
        std::env::set_var(g2rank_core::jacobian::PRIME_GUARD_ENV, self.guards.max_prime.to_string());
    }
}
