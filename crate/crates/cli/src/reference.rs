//! Published entropy tables used for regression.

use std::path::Path;

use confined_ks::{Configuration, Variant};
use serde::Deserialize;

use crate::error::{CliError, CliResult};
use crate::species::Species;

/// Transcribed entropy tables for the ground and singly excited triplet
/// states, all three functional variants.
pub const BUILTIN_REFERENCE: &str = include_str!("../data/reference.csv");

/// Slack added to the rounding half-units when checking `S_t = S_r + S_p`.
pub const SUM_SLACK: f64 = 0.002;

#[derive(Debug, Deserialize)]
struct RawRow {
    species: String,
    state: String,
    r_c: String,
    variant: String,
    s_r: String,
    s_p: String,
    s_t: String,
    source: String,
    tolerance: f64,
}

/// A printed value together with the number of decimals it was printed with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Printed {
    pub value: f64,
    pub decimals: usize,
}

impl Printed {
    fn parse(text: &str) -> Option<Self> {
        let t = text.trim();
        let value = t.parse::<f64>().ok()?;
        let decimals = t.split_once('.').map_or(0, |(_, frac)| frac.len());
        Some(Self { value, decimals })
    }

    /// Half a unit in the last printed digit.
    pub fn half_unit(&self) -> f64 {
        0.5 * 10f64.powi(-(self.decimals as i32))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceRow {
    pub line: usize,
    pub species: Species,
    pub state: Configuration,
    pub variant: Variant,
    pub r_c: f64,
    pub s_r: Printed,
    pub s_p: Printed,
    pub s_t: Printed,
    pub source: String,
    pub tolerance: f64,
}

impl ReferenceRow {
    /// `S_r + S_p - S_t` of the printed values.
    pub fn sum_defect(&self) -> f64 {
        self.s_r.value + self.s_p.value - self.s_t.value
    }

    /// Whether the printed total agrees with the printed parts within rounding.
    pub fn sum_consistent(&self) -> bool {
        let allowed = self.s_r.half_unit() + self.s_p.half_unit() + self.s_t.half_unit() + SUM_SLACK;
        self.sum_defect().abs() <= allowed + 1e-12
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceTable {
    pub name: String,
    pub rows: Vec<ReferenceRow>,
}

impl ReferenceTable {
    pub fn builtin() -> Self {
        Self::parse(BUILTIN_REFERENCE, "builtin").expect("shipped reference table is well formed")
    }

    pub fn from_file(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, name: &str) -> CliResult<Self> {
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
        let mut rows = Vec::new();
        for (k, record) in reader.deserialize::<RawRow>().enumerate() {
            let line = k + 2;
            let bad = |message: String| CliError::Reference { source_name: name.to_string(), line, message };
            let raw = record.map_err(|e| bad(e.to_string()))?;
            let species = raw.species.parse::<Species>().map_err(bad)?;
            let state = raw.state.parse::<Configuration>().map_err(|e| bad(e.to_string()))?;
            let variant = raw.variant.parse::<Variant>().map_err(|e| bad(e.to_string()))?;
            let r_c = raw.r_c.trim().parse::<f64>().map_err(|e| bad(format!("r_c: {e}")))?;
            let number = |field: &str, text: &str| Printed::parse(text).ok_or_else(|| bad(format!("{field}: not a number `{text}`")));
            let (s_r, s_p, s_t) = (number("s_r", &raw.s_r)?, number("s_p", &raw.s_p)?, number("s_t", &raw.s_t)?);
            if !(raw.tolerance > 0.0) {
                return Err(bad(format!("tolerance must be positive, got {}", raw.tolerance)));
            }
            if !(r_c > 0.0) {
                return Err(bad(format!("r_c must be positive, got {r_c}")));
            }
            rows.push(ReferenceRow { line, species, state, variant, r_c, s_r, s_p, s_t, source: raw.source, tolerance: raw.tolerance });
        }
        Ok(Self { name: name.to_string(), rows })
    }

    /// Rows whose printed total disagrees with the printed parts.
    pub fn inconsistent_rows(&self) -> Vec<&ReferenceRow> {
        self.rows.iter().filter(|r| !r.sum_consistent()).collect()
    }

    pub fn find(&self, species: Species, state: &Configuration, variant: Variant, r_c: f64) -> Option<&ReferenceRow> {
        self.rows
            .iter()
            .find(|r| r.species == species && &r.state == state && r.variant == variant && (r.r_c - r_c).abs() < 1e-9)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_table_parses() {
        let t = ReferenceTable::builtin();
        assert_eq!(t.rows.len(), 351);
        let row = t.find(Species::Be2Plus, &Configuration::ground(), Variant::XOnly, 0.5).unwrap();
        assert_eq!(row.s_r.value, -1.725);
        assert_eq!(row.tolerance, 0.005);
        let row = t.find(Species::He, &"1s2p 3P".parse().unwrap(), Variant::XOnly, 1.0).unwrap();
        assert_eq!((row.s_r.value, row.s_p.value), (0.60, 6.570));
    }

    #[test]
    fn printed_digits() {
        let p = Printed::parse("-6.2534").unwrap();
        assert_eq!(p.decimals, 4);
        assert!((p.half_unit() - 5e-5).abs() < 1e-18);
    }

    #[test]
    fn malformed_row_reports_line() {
        let text = "species,state,r_c,variant,s_r,s_p,s_t,source,tolerance\nHe,1s2 1S,1,X-only,0.389,6.118,6.507,Table I,0.02\nHe,1s2 1S,x,X-only,1,2,3,Table I,0.02\n";
        let err = ReferenceTable::parse(text, "t").unwrap_err().to_string();
        assert!(err.contains("line 3"), "{err}");
    }
}
