//! Flat `key = value` configuration files.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

const KEYS: &[&str] = &[
    "g2", "g3", "method", "strict", "family", "C", "k0", "e0", "kappa", "convention", "grid", "origin", "out",
    "fd_step", "tol", "max_skipped", "shift", "interval", "samples", "suite",
];

#[derive(Debug, Default)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", n + 1)))?;
            let k = k.trim().trim_start_matches("--").replace('-', "_");
            if !KEYS.contains(&k.as_str()) {
                return Err(CliError::Usage(format!("config line {}: unknown key `{k}`", n + 1)));
            }
            values.insert(k, v.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// The flag value if given, else the parsed file value.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| CliError::Usage(format!("config key `{key}`: cannot parse `{v}`"))),
        }
    }

    pub fn pick_str(&self, flag: Option<String>, key: &str) -> Result<Option<String>, CliError> {
        Ok(flag.or_else(|| self.values.get(key).cloned()))
    }
}
