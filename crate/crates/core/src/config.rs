//! Flat `key = value` configuration files.
//!
//! One assignment per line; `#` starts a comment. Repeating a key appends to
//! its list, and a single value may also hold a comma-separated list:
//!
//! ```text
//! # coupling scan
//! eta_g2 = 1e-5
//! eta_g2 = 1e-4
//! drive = 2,1
//! drive = 1,2
//! tf_min = 1
//! tf_max = 60
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigMap {
    entries: BTreeMap<String, Vec<(usize, String)>>,
}

impl ConfigMap {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: BTreeMap<String, Vec<(usize, String)>> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
                line: line_no,
                message: format!("expected `key = value`, found `{line}`"),
            })?;
            let key = key.trim().replace('-', "_");
            if key.is_empty() {
                return Err(Error::Config { line: line_no, message: "empty key".into() });
            }
            entries.entry(key).or_default().push((line_no, value.trim().to_string()));
        }
        Ok(Self { entries })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        Self::parse(&text)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    /// Raw values in file order, one per occurrence.
    pub fn raw(&self, key: &str) -> &[(usize, String)] {
        self.entries.get(key).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Last occurrence of a scalar key.
    pub fn last(&self, key: &str) -> Option<(usize, &str)> {
        self.raw(key).last().map(|(l, v)| (*l, v.as_str()))
    }

    pub fn scalar<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.last(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse()
                .map(Some)
                .map_err(|e| Error::Config { line, message: format!("{key}: {e}") }),
        }
    }

    /// All values of `key`, splitting comma-separated entries.
    pub fn list_f64(&self, key: &str) -> Result<Vec<f64>> {
        let mut out = Vec::new();
        for (line, v) in self.raw(key) {
            out.extend(parse_f64_list(v).map_err(|m| Error::Config { line: *line, message: format!("{key}: {m}") })?);
        }
        Ok(out)
    }

    /// Each occurrence of `key` parsed as an `a,b` pair.
    pub fn pairs_f64(&self, key: &str) -> Result<Vec<(f64, f64)>> {
        self.raw(key)
            .iter()
            .map(|(line, v)| {
                let vals = parse_f64_list(v).map_err(|m| Error::Config { line: *line, message: m })?;
                match vals.as_slice() {
                    [a, b] => Ok((*a, *b)),
                    _ => Err(Error::Config { line: *line, message: format!("{key}: expected a pair, got `{v}`") }),
                }
            })
            .collect()
    }
}

pub fn parse_f64_list(v: &str) -> std::result::Result<Vec<f64>, String> {
    v.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|e| format!("`{t}`: {e}")))
        .collect()
}
