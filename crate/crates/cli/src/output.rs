//! Flat-file emission: per-curve CSVs, a combined long table, plot columns,
//! failures, crossings and the regression report.
//!
//! Every float is written with the shortest representation that parses back
//! to the same bits, so re-reading a file reproduces the in-memory values.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use confined_ks::{Configuration, Variant};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::regress::Report;
use crate::run::{PointResult, RunOutcome};
use crate::species::Species;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub r_c: f64,
    #[serde(rename = "S_r")]
    pub s_r: f64,
    #[serde(rename = "S_p")]
    pub s_p: f64,
    #[serde(rename = "S_t")]
    pub s_t: f64,
    pub bbm_margin: f64,
    pub scf_iters: usize,
    pub energy: f64,
}

impl From<&PointResult> for ScanRow {
    fn from(p: &PointResult) -> Self {
        Self {
            r_c: p.r_c,
            s_r: p.s_r,
            s_p: p.s_p,
            s_t: p.s_t,
            bbm_margin: p.bbm_margin,
            scf_iters: p.iterations,
            energy: p.energy,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CombinedRow {
    pub species: String,
    pub state: String,
    pub variant: String,
    pub r_c: f64,
    #[serde(rename = "S_r")]
    pub s_r: f64,
    #[serde(rename = "S_p")]
    pub s_p: f64,
    #[serde(rename = "S_t")]
    pub s_t: f64,
    pub bbm_margin: f64,
    pub scf_iters: usize,
    pub energy: f64,
}

impl From<&PointResult> for CombinedRow {
    fn from(p: &PointResult) -> Self {
        Self {
            species: p.species.label().to_string(),
            state: p.state.label(),
            variant: p.variant.label().to_string(),
            r_c: p.r_c,
            s_r: p.s_r,
            s_p: p.s_p,
            s_t: p.s_t,
            bbm_margin: p.bbm_margin,
            scf_iters: p.iterations,
            energy: p.energy,
        }
    }
}

#[derive(Debug, Serialize)]
struct FailureRow<'a> {
    species: &'a str,
    state: String,
    variant: &'a str,
    r_c: f64,
    message: &'a str,
}

#[derive(Debug, Serialize)]
struct CrossingRow<'a> {
    species: &'a str,
    variant: &'a str,
    state_a: String,
    state_b: String,
    quantity: &'a str,
    lower: f64,
    upper: f64,
    r_c: f64,
    refined: Option<f64>,
}

pub fn variant_slug(v: Variant) -> String {
    v.label().to_ascii_lowercase()
}

/// `<species>_<state>_<variant>`, e.g. `Li_1s2s_3S_xc-lyp`.
pub fn curve_stem(species: Species, state: &Configuration, variant: Variant) -> String {
    format!("{}_{}_{}", species.slug(), state.slug(), variant_slug(variant))
}

/// Paths written by [`write_outputs`].
#[derive(Debug, Clone, Default)]
pub struct Written {
    pub scans: Vec<PathBuf>,
    pub combined: PathBuf,
    pub plots: Vec<PathBuf>,
    pub failures: PathBuf,
    pub crossings: PathBuf,
    pub regression: Option<PathBuf>,
}

fn create_dir(path: &Path) -> CliResult<()> {
    fs::create_dir_all(path).map_err(|e| CliError::io(format!("creating {}", path.display()), e))
}

fn csv_writer(path: &Path) -> CliResult<csv::Writer<fs::File>> {
    let file = fs::File::create(path).map_err(|e| CliError::io(format!("creating {}", path.display()), e))?;
    Ok(csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(file))
}

/// Groups points by curve, keeping first-appearance order.
fn curves(points: &[PointResult]) -> Vec<Vec<&PointResult>> {
    let mut out: Vec<Vec<&PointResult>> = Vec::new();
    for p in points {
        match out.iter_mut().find(|c| c[0].species == p.species && c[0].state == p.state && c[0].variant == p.variant) {
            Some(c) => c.push(p),
            None => out.push(vec![p]),
        }
    }
    out
}

pub fn write_outputs(dir: &Path, outcome: &RunOutcome, plots: bool, report: Option<&Report>) -> CliResult<Written> {
    let mut written = Written::default();
    let scans = dir.join("scans");
    create_dir(&scans)?;
    for curve in curves(&outcome.points) {
        let head = curve[0];
        let path = scans.join(format!("{}.csv", curve_stem(head.species, &head.state, head.variant)));
        let mut w = csv_writer(&path)?;
        for p in &curve {
            w.serialize(ScanRow::from(*p))?;
        }
        w.flush().map_err(|e| CliError::io(format!("writing {}", path.display()), e))?;
        written.scans.push(path);
    }

    written.combined = dir.join("combined.csv");
    let mut w = csv_writer(&written.combined)?;
    for p in &outcome.points {
        w.serialize(CombinedRow::from(p))?;
    }
    w.flush().map_err(|e| CliError::io("writing combined.csv", e))?;

    if plots {
        let dir = dir.join("plots");
        create_dir(&dir)?;
        for curve in curves(&outcome.points) {
            let head = curve[0];
            let path = dir.join(format!("{}.dat", curve_stem(head.species, &head.state, head.variant)));
            let mut text = format!("# {} {} {}\n# r_c S_r S_p S_t\n", head.species, head.state, head.variant);
            for p in &curve {
                text.push_str(&format!("{} {} {} {}\n", p.r_c, p.s_r, p.s_p, p.s_t));
            }
            fs::write(&path, text).map_err(|e| CliError::io(format!("writing {}", path.display()), e))?;
            written.plots.push(path);
        }
    }

    written.failures = dir.join("failures.csv");
    let mut w = csv_writer(&written.failures)?;
    if outcome.failures.is_empty() {
        w.write_record(["species", "state", "variant", "r_c", "message"])?;
    }
    for f in &outcome.failures {
        w.serialize(FailureRow {
            species: f.species.label(),
            state: f.state.label(),
            variant: f.variant.label(),
            r_c: f.r_c,
            message: &f.message,
        })?;
    }
    w.flush().map_err(|e| CliError::io("writing failures.csv", e))?;

    written.crossings = dir.join("crossings.csv");
    let mut w = csv_writer(&written.crossings)?;
    if outcome.crossings.is_empty() {
        w.write_record(["species", "variant", "state_a", "state_b", "quantity", "lower", "upper", "r_c", "refined"])?;
    }
    for c in &outcome.crossings {
        w.serialize(CrossingRow {
            species: c.spec.species.label(),
            variant: c.spec.variant.label(),
            state_a: c.spec.states[0].label(),
            state_b: c.spec.states[1].label(),
            quantity: c.spec.quantity.label(),
            lower: c.lower,
            upper: c.upper,
            r_c: c.r_c,
            refined: c.refined,
        })?;
    }
    w.flush().map_err(|e| CliError::io("writing crossings.csv", e))?;

    if let Some(report) = report {
        let path = dir.join("regression.json");
        let mut file = fs::File::create(&path).map_err(|e| CliError::io(format!("creating {}", path.display()), e))?;
        serde_json::to_writer_pretty(&mut file, report)?;
        file.write_all(b"\n").map_err(|e| CliError::io(format!("writing {}", path.display()), e))?;
        written.regression = Some(path);
    }
    Ok(written)
}

pub fn read_scan(path: &Path) -> CliResult<Vec<ScanRow>> {
    let mut reader = csv::Reader::from_path(path)?;
    Ok(reader.deserialize().collect::<Result<Vec<ScanRow>, _>>()?)
}

pub fn read_combined(path: &Path) -> CliResult<Vec<CombinedRow>> {
    let mut reader = csv::Reader::from_path(path)?;
    Ok(reader.deserialize().collect::<Result<Vec<CombinedRow>, _>>()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn point(r_c: f64, s_r: f64, s_p: f64, energy: f64) -> PointResult {
        PointResult {
            species: Species::LiPlus,
            state: "1s2s 3S".parse().unwrap(),
            variant: Variant::Lyp,
            r_c,
            order: 64,
            s_r,
            s_p,
            s_t: s_r + s_p,
            bbm_margin: s_r + s_p - confined_ks::bbm_bound::<f64>(),
            iterations: 17,
            energy,
            parseval_defect: 1e-9,
        }
    }

    #[test]
    fn file_names() {
        let state: Configuration = "1s3d 3D".parse().unwrap();
        assert_eq!(curve_stem(Species::Be2Plus, &state, Variant::XOnly), "Be_1s3d_3D_x-only");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn scans_round_trip(values in prop::collection::vec((0.05f64..30.0, -8.0f64..8.0, 2.0f64..14.0, -20.0f64..5.0), 1..8)) {
            let dir = tempfile::tempdir().unwrap();
            let points: Vec<PointResult> = values.iter().map(|&(r, a, b, e)| point(r, a, b, e)).collect();
            let outcome = RunOutcome { points: points.clone(), ..Default::default() };
            let written = write_outputs(dir.path(), &outcome, true, None).unwrap();
            let rows = read_scan(&written.scans[0]).unwrap();
            prop_assert_eq!(rows.len(), points.len());
            for (row, p) in rows.iter().zip(&points) {
                for (x, y) in [(row.r_c, p.r_c), (row.s_r, p.s_r), (row.s_p, p.s_p), (row.s_t, p.s_t), (row.bbm_margin, p.bbm_margin), (row.energy, p.energy)] {
                    prop_assert!((x - y).abs() <= 1e-12);
                }
                prop_assert_eq!(row.scf_iters, p.iterations);
            }
            let combined = read_combined(&written.combined).unwrap();
            prop_assert_eq!(combined.len(), points.len());
            prop_assert_eq!(combined[0].state.as_str(), "1s2s 3S");
            prop_assert_eq!(combined[0].s_p, rows[0].s_p);
        }
    }
}
