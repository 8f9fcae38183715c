use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::job::OutputFormat;
use crate::CliError;

pub const CACHE_DIR_ENV: &str = "TYCLASS_CACHE_DIR";
pub const CONFIG_ENV: &str = "TYCLASS_CONFIG";

/// Settings from a TOML file such as
///
/// ```toml
/// truncation = 12
/// cache_dir = "/tmp/tyclass"
/// output = "json"
/// ```
#[derive(Clone, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub truncation: Option<u32>,
    pub cache_dir: Option<PathBuf>,
    pub output: Option<OutputFormat>,
    #[serde(default)]
    pub no_cache: bool,
}

impl Config {
    pub fn parse(text: &str) -> Result<Config, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Config, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Config::parse(&text)
    }

    /// The file named by `path`, else by the config variable, else the
    /// built-in defaults. The cache variable fills a cache directory the file
    /// leaves unset.
    pub fn load(path: Option<&Path>, env: impl Fn(&str) -> Option<String>) -> Result<Config, CliError> {
        let from_env = env(CONFIG_ENV).map(PathBuf::from);
        let mut cfg = match path.map(Path::to_path_buf).or(from_env) {
            Some(p) => Config::from_file(&p)?,
            None => Config::default(),
        };
        if cfg.cache_dir.is_none() {
            cfg.cache_dir = env(CACHE_DIR_ENV).filter(|s| !s.is_empty()).map(PathBuf::from);
        }
        Ok(cfg)
    }
}
