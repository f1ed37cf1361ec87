//! `key = value` configuration files.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use anyhow::{Context, Result};

/// Bad user-supplied parameter.
#[derive(Debug)]
pub struct Invalid(pub String);

impl std::fmt::Display for Invalid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Invalid {}

fn invalid(msg: String) -> anyhow::Error {
    Invalid(msg).into()
}

/// Recognized keys; anything else is rejected so typos do not go unnoticed.
pub const KEYS: &[&str] = &[
    "dot_radius",
    "dot_pitch",
    "cell_pitch_x",
    "cell_pitch_y",
    "margin",
    "max_cells_per_line",
    "dot_threshold",
    "seed",
    "lines_per_page",
    "max_distance",
    "percents",
    "noise",
    "method",
];

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (number, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| invalid(format!("config line {}: expected `key = value`", number + 1)))?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(invalid(format!("config line {}: unknown key {key:?}", number + 1)));
            }
            values.insert(key.to_string(), value.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        Self::parse(&text)
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Typed value of `key`, if present.
    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.raw(key)
            .map(|v| v.parse::<T>().map_err(|e| invalid(format!("config key {key}: {e}"))))
            .transpose()
    }

    /// Command-line value first, then the file, then `default`.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        match flag {
            Some(v) => Ok(v),
            None => Ok(self.get(key)?.unwrap_or(default)),
        }
    }

    /// Comma-separated list value.
    pub fn list(&self, key: &str) -> Vec<String> {
        self.raw(key)
            .map(|v| v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect())
            .unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_and_comments() {
        let cfg = ConfigFile::parse("# geometry\ndot_radius = 5\n\nseed=9 # fixed\nnoise = blur:3, spread:10\n").unwrap();
        assert_eq!(cfg.get::<usize>("dot_radius").unwrap(), Some(5));
        assert_eq!(cfg.pick(None, "seed", 1u64).unwrap(), 9);
        assert_eq!(cfg.pick(Some(4u64), "seed", 1).unwrap(), 4);
        assert_eq!(cfg.pick(None, "margin", 40usize).unwrap(), 40);
        assert_eq!(cfg.list("noise"), vec!["blur:3", "spread:10"]);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(ConfigFile::parse("dot_radius 5").is_err());
        assert!(ConfigFile::parse("colour = red").is_err());
        let cfg = ConfigFile::parse("seed = many").unwrap();
        assert!(cfg.get::<u64>("seed").is_err());
    }
}
