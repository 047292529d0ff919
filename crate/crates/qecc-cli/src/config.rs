//! Plain-text config files: `key = value` per line, `#` comments. Keys use
//! the same spelling as the long command-line flags (without the `--`).
//! A flag given on the command line always wins over the config file.

use anyhow::{anyhow, Context};
use std::collections::HashMap;
use std::path::Path;

#[derive(Default)]
pub struct Config {
    values: HashMap<String, String>,
}

impl Config {
    pub fn from_file(path: &Path) -> anyhow::Result<Config> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let mut values = HashMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("config line {}: expected `key = value`", i + 1))?;
            values.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(Config { values })
    }

    fn parse<T>(&self, key: &str) -> anyhow::Result<Option<T>>
    where
        T: std::str::FromStr,
        T::Err: std::fmt::Display,
    {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<T>()
                .map(Some)
                .map_err(|e| anyhow!("config key `{key}` = `{v}`: {e}")),
        }
    }

    /// CLI value, else config value, else the default.
    pub fn resolve<T>(&self, cli: Option<T>, key: &str, default: T) -> anyhow::Result<T>
    where
        T: std::str::FromStr,
        T::Err: std::fmt::Display,
    {
        Ok(cli.or(self.parse(key)?).unwrap_or(default))
    }

    /// CLI value, else config value, else nothing.
    pub fn resolve_opt<T>(&self, cli: Option<T>, key: &str) -> anyhow::Result<Option<T>>
    where
        T: std::str::FromStr,
        T::Err: std::fmt::Display,
    {
        Ok(cli.or(self.parse(key)?))
    }

    /// CLI value, else config value, else an error.
    pub fn resolve_required<T>(&self, cli: Option<T>, key: &str) -> anyhow::Result<T>
    where
        T: std::str::FromStr,
        T::Err: std::fmt::Display,
    {
        self.resolve_opt(cli, key)?
            .ok_or_else(|| anyhow!("missing required parameter `{key}`"))
    }
}
