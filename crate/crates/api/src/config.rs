use std::path::{Path, PathBuf};

use honorifics_core::domain::CityId;
use serde::Deserialize;

/// Server settings read from a TOML file.
///
/// ```toml
/// cities = ["paris", "vienna"]       # served cities; all loaded ones if absent
/// cors_origins = ["http://localhost:5173"]
/// static_dir = "webmap/dist"
/// ```
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ServeConfig {
    #[serde(default)]
    pub cities: Option<Vec<CityId>>,
    /// `"*"` allows any origin.
    #[serde(default)]
    pub cors_origins: Vec<String>,
    #[serde(default)]
    pub static_dir: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config: {0}")]
    Io(std::io::Error),
    #[error("invalid config: {0}")]
    Parse(toml::de::Error),
}

impl ServeConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(ConfigError::Parse)
    }

    /// Relative `static_dir` paths resolve against the config file's
    /// directory.
    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(ConfigError::Io)?;
        let mut cfg = Self::from_toml_str(&text)?;
        if let (Some(dir), Some(base)) = (&cfg.static_dir, path.parent()) {
            if dir.is_relative() {
                cfg.static_dir = Some(base.join(dir));
            }
        }
        Ok(cfg)
    }

    pub fn serves(&self, city: CityId) -> bool {
        self.cities.as_ref().is_none_or(|c| c.contains(&city))
    }
}
