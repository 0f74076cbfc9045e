//! Correlation-functional constants, kept as data.
//!
//! The file format is line-oriented: `name = value  # citation`. The built-in
//! table is compiled from `data/correlation_constants.txt`; setting
//! [`CONSTANTS_ENV`] to a path loads that file instead.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};

/// Environment variable naming an alternative constants file.
pub const CONSTANTS_ENV: &str = "CONFINED_KS_CONSTANTS";

const BUILTIN: &str = include_str!("../../data/correlation_constants.txt");
const KEYS: [&str; 6] = ["wigner.a", "wigner.b", "lyp.a", "lyp.b", "lyp.c", "lyp.d"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WignerConstants {
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LypConstants {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationConstants {
    pub wigner: WignerConstants,
    pub lyp: LypConstants,
}

/// Parses `name = value` lines into a map.
pub fn parse_constants(text: &str) -> Result<BTreeMap<String, f64>> {
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Constants { line: line_no, msg };
        let (key, value) = line.split_once('=').ok_or_else(|| err("expected `name = value`".into()))?;
        let key = key.trim();
        if key.is_empty() {
            return Err(err("empty name".into()));
        }
        let value: f64 = value.trim().parse().map_err(|_| err(format!("`{}` is not a number", value.trim())))?;
        if !KEYS.contains(&key) {
            return Err(err(format!("unknown constant `{key}`")));
        }
        if map.insert(key.to_string(), value).is_some() {
            return Err(err(format!("duplicate constant `{key}`")));
        }
    }
    Ok(map)
}

impl CorrelationConstants {
    pub fn from_text(text: &str) -> Result<Self> {
        let map = parse_constants(text)?;
        let get = |k: &str| map.get(k).copied().ok_or_else(|| Error::MissingConstant(k.to_string()));
        Ok(Self {
            wigner: WignerConstants { a: get("wigner.a")?, b: get("wigner.b")? },
            lyp: LypConstants { a: get("lyp.a")?, b: get("lyp.b")?, c: get("lyp.c")?, d: get("lyp.d")? },
        })
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Constants { line: 0, msg: format!("cannot read {}: {e}", path.display()) })?;
        Self::from_text(&text)
    }

    /// The table compiled into the library.
    pub fn builtin() -> Self {
        Self::from_text(BUILTIN).expect("built-in constants file is valid")
    }

    /// Built-in table, or the file named by `CONFINED_KS_CONSTANTS`.
    pub fn load() -> Result<Self> {
        match std::env::var_os(CONSTANTS_ENV) {
            Some(path) if !path.is_empty() => Self::from_file(Path::new(&path)),
            _ => Ok(Self::builtin()),
        }
    }
}

impl Default for CorrelationConstants {
    fn default() -> Self {
        Self::builtin()
    }
}
