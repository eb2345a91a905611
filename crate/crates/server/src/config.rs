use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use dpverify_core::posterior::{DEFAULT_BURNIN, DEFAULT_ITERS};
use serde::{Deserialize, Serialize};

/// Server settings, read from a TOML file. Every key is optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServerConfig {
    pub listen: SocketAddr,
    /// Append-only journal. Without one, state lives only in memory.
    pub journal_path: Option<PathBuf>,
    pub default_gibbs_iters: usize,
    pub default_gibbs_burnin: usize,
    pub max_m: usize,
    pub max_gibbs_iters: usize,
    /// Whether queries may fix their own RNG seed. A client that knows the
    /// seed can subtract the noise, so this is for testing and replay only.
    pub allow_client_seed: bool,
}

impl Default for ServerConfig {
    fn default() -> Self {
        Self {
            listen: SocketAddr::from(([127, 0, 0, 1], 8080)),
            journal_path: None,
            default_gibbs_iters: DEFAULT_ITERS,
            default_gibbs_burnin: DEFAULT_BURNIN,
            max_m: 200,
            max_gibbs_iters: 1_000_000,
            allow_client_seed: false,
        }
    }
}

impl ServerConfig {
    pub fn from_toml_str(text: &str) -> anyhow::Result<Self> {
        let cfg: Self = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> anyhow::Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        anyhow::ensure!(self.max_m >= 2, "max_m must be at least 2");
        anyhow::ensure!(
            self.default_gibbs_iters > self.default_gibbs_burnin,
            "default_gibbs_iters must exceed default_gibbs_burnin"
        );
        anyhow::ensure!(
            self.default_gibbs_iters <= self.max_gibbs_iters,
            "default_gibbs_iters exceeds max_gibbs_iters"
        );
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_partial_file() {
        let cfg = ServerConfig::from_toml_str(
            "listen = \"0.0.0.0:9000\"\njournal_path = \"/var/lib/dpv.journal\"\nmax_m = 90\n",
        )
        .unwrap();
        assert_eq!(cfg.listen.port(), 9000);
        assert_eq!(cfg.max_m, 90);
        assert_eq!(cfg.default_gibbs_iters, DEFAULT_ITERS);
        assert!(!cfg.allow_client_seed);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(ServerConfig::from_toml_str("max_m = 1").is_err());
        assert!(
            ServerConfig::from_toml_str("default_gibbs_iters = 10\ndefault_gibbs_burnin = 10")
                .is_err()
        );
        assert!(ServerConfig::from_toml_str("colour = \"blue\"").is_err());
    }
}
