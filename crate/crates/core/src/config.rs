//! Minimal `key = value` configuration files.
//!
//! One entry per line, `#` starts a comment, values may be wrapped in
//! double quotes, and list values are comma separated (`seeds = 1, 2, 3`).
//! Later keys override earlier ones.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq)]
pub struct KvConfig {
    entries: BTreeMap<String, String>,
}

impl KvConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: i + 1,
                msg: format!("expected `key = value`, got {line:?}"),
            })?;
            let key = key.trim();
            if key.is_empty() {
                return Err(Error::Parse { line: i + 1, msg: "empty key".into() });
            }
            let value = value.trim().trim_matches('"').to_string();
            entries.insert(key.to_string(), value);
        }
        Ok(KvConfig { entries })
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.entries.insert(key.to_string(), value.to_string());
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.raw(key)
            .map(|v| {
                v.parse::<T>().map_err(|_| {
                    Error::InvalidParameter(format!("cannot parse {key} = {v:?}"))
                })
            })
            .transpose()
    }

    pub fn get_or<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    pub fn require<T: FromStr>(&self, key: &str) -> Result<T> {
        self.get(key)?
            .ok_or_else(|| Error::InvalidParameter(format!("missing key {key}")))
    }

    /// Comma-separated list; a missing key yields an empty list.
    pub fn list<T: FromStr>(&self, key: &str) -> Result<Vec<T>> {
        let Some(v) = self.raw(key) else {
            return Ok(Vec::new());
        };
        v.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<T>().map_err(|_| {
                    Error::InvalidParameter(format!("cannot parse element {s:?} of {key}"))
                })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_entries_lists_and_comments() {
        let cfg = KvConfig::parse(
            "# header\nn = 256\nname = \"two-grids\"  # trailing\nseeds = 1, 2,3\n\n",
        )
        .unwrap();
        assert_eq!(cfg.require::<usize>("n").unwrap(), 256);
        assert_eq!(cfg.raw("name"), Some("two-grids"));
        assert_eq!(cfg.list::<u64>("seeds").unwrap(), vec![1, 2, 3]);
        assert!(cfg.list::<u64>("missing").unwrap().is_empty());
        assert!(cfg.require::<usize>("missing").is_err());
        assert!(cfg.require::<usize>("name").is_err());
    }

    #[test]
    fn rejects_lines_without_equals() {
        assert!(matches!(
            KvConfig::parse("n 256"),
            Err(Error::Parse { line: 1, .. })
        ));
    }
}
