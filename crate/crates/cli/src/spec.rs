//! Run specification: a TOML file listing scans, solver controls and outputs.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use confined_ks::{AngularModel, Configuration, LypSpin, Mapping64, MomentumOptions64, ScfControls64, Variant};
use serde::Deserialize;
use toml::Spanned;

use crate::error::{CliError, CliResult};
use crate::species::Species;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    #[serde(default)]
    grid: RawGrid,
    #[serde(default)]
    scf: RawScf,
    #[serde(default)]
    momentum: RawMomentum,
    #[serde(default)]
    entropy: RawEntropy,
    #[serde(default)]
    output: RawOutput,
    #[serde(default)]
    regress: Option<RawRegress>,
    #[serde(default, rename = "scan")]
    scans: Vec<RawScan>,
    #[serde(default, rename = "crossing")]
    crossings: Vec<RawCrossing>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    order: Option<Spanned<i64>>,
    mapping: Option<Spanned<String>>,
    clustering: Option<Spanned<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScf {
    max_iter: Option<Spanned<i64>>,
    mixing: Option<Spanned<f64>>,
    potential_tolerance: Option<Spanned<f64>>,
    energy_tolerance: Option<Spanned<f64>>,
    anderson_depth: Option<Spanned<i64>>,
    lyp_spin: Option<Spanned<String>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMomentum {
    tolerance: Option<Spanned<f64>>,
    points_per_panel: Option<Spanned<i64>>,
    p_limit: Option<Spanned<f64>>,
    max_correction: Option<Spanned<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntropy {
    angular: Option<Spanned<String>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    plots: Option<bool>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRegress {
    reference: Spanned<String>,
    #[serde(default)]
    sources: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScan {
    species: Spanned<Vec<Spanned<String>>>,
    states: Spanned<Vec<Spanned<String>>>,
    variants: Spanned<Vec<Spanned<String>>>,
    radii: Spanned<Vec<Spanned<f64>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCrossing {
    species: Spanned<String>,
    variant: Spanned<String>,
    states: Spanned<Vec<Spanned<String>>>,
    quantity: Option<Spanned<String>>,
}

/// Entropy compared by a crossing search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Position,
    Momentum,
}

impl Quantity {
    pub fn label(self) -> &'static str {
        match self {
            Quantity::Position => "S_r",
            Quantity::Momentum => "S_p",
        }
    }
}

/// One `(species, state, variant)` curve over ascending radii.
#[derive(Debug, Clone, PartialEq)]
pub struct Unit {
    pub species: Species,
    pub state: Configuration,
    pub variant: Variant,
    pub radii: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossingSpec {
    pub species: Species,
    pub variant: Variant,
    pub states: [Configuration; 2],
    pub quantity: Quantity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReferenceSource {
    Builtin,
    File(PathBuf),
}

/// Reference table to regress against, restricted to the listed sources
/// (every row when empty).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Regression {
    pub reference: ReferenceSource,
    pub sources: Vec<String>,
}

/// Validated run specification.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub units: Vec<Unit>,
    pub crossings: Vec<CrossingSpec>,
    pub controls: ScfControls64,
    pub momentum: MomentumOptions64,
    pub angular: AngularModel,
    pub plots: bool,
    pub regression: Option<Regression>,
}

impl RunSpec {
    /// Number of `(species, state, variant, r_c)` points.
    pub fn point_count(&self) -> usize {
        self.units.iter().map(|u| u.radii.len()).sum()
    }
}

struct Ctx<'a> {
    path: &'a Path,
    text: &'a str,
}

impl Ctx<'_> {
    fn line(&self, offset: usize) -> usize {
        self.text[..offset.min(self.text.len())].bytes().filter(|&b| b == b'\n').count() + 1
    }

    fn invalid<T>(&self, key: &str, span: std::ops::Range<usize>, message: impl Into<String>) -> CliResult<T> {
        Err(CliError::Invalid { path: self.path.to_path_buf(), line: self.line(span.start), key: key.into(), message: message.into() })
    }

    fn positive(&self, key: &str, v: &Option<Spanned<f64>>) -> CliResult<Option<f64>> {
        match v {
            Some(s) if !(s.get_ref().is_finite() && *s.get_ref() > 0.0) => {
                self.invalid(key, s.span(), format!("must be positive and finite, got {}", s.get_ref()))
            }
            Some(s) => Ok(Some(*s.get_ref())),
            None => Ok(None),
        }
    }

    fn count(&self, key: &str, v: &Option<Spanned<i64>>, min: i64) -> CliResult<Option<usize>> {
        match v {
            Some(s) if *s.get_ref() < min => self.invalid(key, s.span(), format!("must be at least {min}, got {}", s.get_ref())),
            Some(s) => Ok(Some(*s.get_ref() as usize)),
            None => Ok(None),
        }
    }

    fn nonempty<'b, T>(&self, key: &str, list: &'b Spanned<Vec<T>>) -> CliResult<&'b [T]> {
        if list.get_ref().is_empty() {
            return self.invalid(key, list.span(), "must not be empty");
        }
        Ok(list.get_ref())
    }
}

/// Reads and validates a run specification.
pub fn parse_run_spec(path: &Path) -> CliResult<RunSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
    parse_run_spec_str(&text, path)
}

/// Parses specification text; `path` is used for messages and for resolving
/// relative reference-table paths.
pub fn parse_run_spec_str(text: &str, path: &Path) -> CliResult<RunSpec> {
    let raw: RawSpec = toml::from_str(text).map_err(|e| CliError::Spec { path: path.to_path_buf(), message: e.to_string() })?;
    let ctx = Ctx { path, text };

    let mut controls = ScfControls64::default();
    if let Some(order) = ctx.count("grid.order", &raw.grid.order, confined_ks::grid::MIN_GRID_ORDER as i64)? {
        controls.order = Some(order);
    }
    let clustering = ctx.positive("grid.clustering", &raw.grid.clustering)?;
    controls.mapping = match raw.grid.mapping.as_ref().map(|m| (m.get_ref().to_ascii_lowercase(), m.span())) {
        None => clustering.map_or(Mapping64::default(), |c| Mapping64::Algebraic { clustering: c }),
        Some((m, _)) if m == "algebraic" => clustering.map_or(Mapping64::default(), |c| Mapping64::Algebraic { clustering: c }),
        Some((m, span)) if m == "affine" => {
            if clustering.is_some() {
                return ctx.invalid("grid.clustering", span, "applies only to the algebraic mapping");
            }
            Mapping64::Affine
        }
        Some((m, span)) => return ctx.invalid("grid.mapping", span, format!("must be `algebraic` or `affine`, got `{m}`")),
    };
    if let Some(v) = ctx.count("scf.max_iter", &raw.scf.max_iter, 1)? {
        controls.max_iter = v;
    }
    if let Some(m) = &raw.scf.mixing {
        if !(*m.get_ref() > 0.0 && *m.get_ref() <= 1.0) {
            return ctx.invalid("scf.mixing", m.span(), format!("must lie in (0, 1], got {}", m.get_ref()));
        }
        controls.mixing = *m.get_ref();
    }
    if let Some(v) = ctx.positive("scf.potential_tolerance", &raw.scf.potential_tolerance)? {
        controls.potential_tolerance = v;
    }
    if let Some(v) = ctx.positive("scf.energy_tolerance", &raw.scf.energy_tolerance)? {
        controls.energy_tolerance = v;
    }
    if let Some(v) = ctx.count("scf.anderson_depth", &raw.scf.anderson_depth, 0)? {
        controls.anderson_depth = v;
    }
    if let Some(s) = &raw.scf.lyp_spin {
        controls.lyp_spin = match s.get_ref().to_ascii_lowercase().as_str() {
            "compensated" => LypSpin::Compensated,
            "polarized" | "polarised" => LypSpin::Polarized,
            other => return ctx.invalid("scf.lyp_spin", s.span(), format!("must be `compensated` or `polarized`, got `{other}`")),
        };
    }
    controls.constants = confined_ks::CorrelationConstants::load()?;

    let mut momentum = MomentumOptions64::default();
    if let Some(v) = ctx.positive("momentum.tolerance", &raw.momentum.tolerance)? {
        momentum.tolerance = v;
    }
    if let Some(v) = ctx.count("momentum.points_per_panel", &raw.momentum.points_per_panel, 2)? {
        momentum.points_per_panel = v;
    }
    if let Some(v) = ctx.positive("momentum.p_limit", &raw.momentum.p_limit)? {
        momentum.p_limit = v;
    }
    if let Some(v) = ctx.positive("momentum.max_correction", &raw.momentum.max_correction)? {
        momentum.max_correction = v;
    }

    let angular = match &raw.entropy.angular {
        None => AngularModel::default(),
        Some(s) => match s.get_ref().to_ascii_lowercase().as_str() {
            "aligned" => AngularModel::Aligned,
            "spherical" => AngularModel::SphericalAverage,
            other => return ctx.invalid("entropy.angular", s.span(), format!("must be `aligned` or `spherical`, got `{other}`")),
        },
    };

    if raw.scans.is_empty() {
        return Err(CliError::Spec { path: path.to_path_buf(), message: "no [[scan]] tables".into() });
    }
    // radii of the same curve requested by several scans are merged
    let mut merged: BTreeMap<(Species, String, String), (Configuration, Variant, Vec<f64>)> = BTreeMap::new();
    for scan in &raw.scans {
        let species = ctx
            .nonempty("scan.species", &scan.species)?
            .iter()
            .map(|s| s.get_ref().parse::<Species>().or_else(|e| ctx.invalid("scan.species", s.span(), e)))
            .collect::<CliResult<Vec<_>>>()?;
        let states = ctx
            .nonempty("scan.states", &scan.states)?
            .iter()
            .map(|s| s.get_ref().parse::<Configuration>().or_else(|e| ctx.invalid("scan.states", s.span(), e.to_string())))
            .collect::<CliResult<Vec<_>>>()?;
        let variants = ctx
            .nonempty("scan.variants", &scan.variants)?
            .iter()
            .map(|s| s.get_ref().parse::<Variant>().or_else(|e| ctx.invalid("scan.variants", s.span(), e.to_string())))
            .collect::<CliResult<Vec<_>>>()?;
        let mut radii = Vec::new();
        for r in ctx.nonempty("scan.radii", &scan.radii)? {
            let v = *r.get_ref();
            if !(v.is_finite() && v > 0.0) {
                return ctx.invalid("scan.radii", r.span(), format!("r_c must be positive and finite, got {v}"));
            }
            radii.push(v);
        }
        for &sp in &species {
            for st in &states {
                for &va in &variants {
                    let entry = merged.entry((sp, st.label(), va.label().to_string())).or_insert_with(|| (st.clone(), va, Vec::new()));
                    entry.2.extend_from_slice(&radii);
                }
            }
        }
    }
    let units = merged
        .into_iter()
        .map(|((species, _, _), (state, variant, mut radii))| {
            radii.sort_by(f64::total_cmp);
            radii.dedup();
            Unit { species, state, variant, radii }
        })
        .collect();

    let mut crossings = Vec::new();
    for c in &raw.crossings {
        let species = c.species.get_ref().parse::<Species>().or_else(|e| ctx.invalid("crossing.species", c.species.span(), e))?;
        let variant =
            c.variant.get_ref().parse::<Variant>().or_else(|e| ctx.invalid("crossing.variant", c.variant.span(), e.to_string()))?;
        let list = c.states.get_ref();
        if list.len() != 2 {
            return ctx.invalid("crossing.states", c.states.span(), format!("must name exactly two states, got {}", list.len()));
        }
        let parse = |s: &Spanned<String>| s.get_ref().parse::<Configuration>().or_else(|e| ctx.invalid("crossing.states", s.span(), e.to_string()));
        let states = [parse(&list[0])?, parse(&list[1])?];
        let quantity = match c.quantity.as_ref().map(|q| (q.get_ref().to_ascii_lowercase(), q.span())) {
            None => Quantity::Position,
            Some((q, _)) if q == "s_r" || q == "position" => Quantity::Position,
            Some((q, _)) if q == "s_p" || q == "momentum" => Quantity::Momentum,
            Some((q, span)) => return ctx.invalid("crossing.quantity", span, format!("must be `S_r` or `S_p`, got `{q}`")),
        };
        crossings.push(CrossingSpec { species, variant, states, quantity });
    }

    let regression = raw.regress.map(|r| {
        let name = r.reference.into_inner();
        let reference = if name.eq_ignore_ascii_case("builtin") {
            ReferenceSource::Builtin
        } else {
            let p = PathBuf::from(&name);
            ReferenceSource::File(if p.is_relative() { path.parent().unwrap_or(Path::new(".")).join(p) } else { p })
        };
        Regression { reference, sources: r.sources }
    });

    Ok(RunSpec { units, crossings, controls, momentum, angular, plots: raw.output.plots.unwrap_or(true), regression })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> CliResult<RunSpec> {
        parse_run_spec_str(text, Path::new("test.toml"))
    }

    #[test]
    fn minimal_spec_is_one_point() {
        let spec = parse("[[scan]]\nspecies = [\"He\"]\nstates = [\"ground\"]\nvariants = [\"X-only\"]\nradii = [1.0]\n").unwrap();
        assert_eq!(spec.point_count(), 1);
        assert_eq!(spec.units[0].state, Configuration::ground());
        assert_eq!(spec.angular, AngularModel::Aligned);
    }

    #[test]
    fn negative_radius_names_field_and_line() {
        let err = parse("[[scan]]\nspecies = [\"He\"]\nstates = [\"ground\"]\nvariants = [\"X-only\"]\nradii = [1.0,\n  -1.0]\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("scan.radii") && err.contains("line 6"), "{err}");
    }

    #[test]
    fn empty_state_list_rejected() {
        let err = parse("[[scan]]\nspecies = [\"He\"]\nstates = []\nvariants = [\"X-only\"]\nradii = [1.0]\n").unwrap_err().to_string();
        assert!(err.contains("scan.states") && err.contains("empty"), "{err}");
    }

    #[test]
    fn unknown_key_rejected_with_line() {
        let err = parse("[scf]\nmixing = 0.3\nmixxing = 0.2\n[[scan]]\nspecies = [\"He\"]\nstates = [\"ground\"]\nvariants = [\"X-only\"]\nradii = [1.0]\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("mixxing") && err.contains("line 3"), "{err}");
    }

    #[test]
    fn scans_of_one_curve_merge() {
        let spec = parse(
            "[[scan]]\nspecies = [\"He\"]\nstates = [\"ground\"]\nvariants = [\"X-only\"]\nradii = [2.0, 1.0]\n\
             [[scan]]\nspecies = [\"He\"]\nstates = [\"1s2 1S\"]\nvariants = [\"X-only\"]\nradii = [1.0, 3.0]\n",
        )
        .unwrap();
        assert_eq!(spec.units.len(), 1);
        assert_eq!(spec.units[0].radii, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn singlet_excited_state_rejected() {
        let err = parse("[[scan]]\nspecies = [\"He\"]\nstates = [\"1s2s 1S\"]\nvariants = [\"X-only\"]\nradii = [1.0]\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("scan.states"), "{err}");
    }
}
