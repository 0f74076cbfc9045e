//! Scan execution over a bounded worker pool.

use confined_ks::{
    crossover_detect, entropies, scf_solve_from, AngularModel, Configuration, MomentumOptions64, ScfControls64, Variant,
};
use rayon::prelude::*;

use crate::error::{CliError, CliResult};
use crate::spec::{CrossingSpec, Quantity, RunSpec, Unit};
use crate::species::Species;

/// Entropies and bookkeeping of one converged point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointResult {
    pub species: Species,
    pub state: Configuration,
    pub variant: Variant,
    pub r_c: f64,
    pub order: usize,
    pub s_r: f64,
    pub s_p: f64,
    pub s_t: f64,
    pub bbm_margin: f64,
    pub iterations: usize,
    pub energy: f64,
    pub parseval_defect: f64,
}

impl PointResult {
    pub fn value(&self, quantity: Quantity) -> f64 {
        match quantity {
            Quantity::Position => self.s_r,
            Quantity::Momentum => self.s_p,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub species: Species,
    pub state: Configuration,
    pub variant: Variant,
    pub r_c: f64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossingResult {
    pub spec: CrossingSpec,
    pub lower: f64,
    pub upper: f64,
    /// Interpolated from the scan points.
    pub r_c: f64,
    /// Located by re-solving inside the bracket, when requested.
    pub refined: Option<f64>,
}

#[derive(Debug, Clone, Default)]
pub struct RunOutcome {
    pub points: Vec<PointResult>,
    pub failures: Vec<Failure>,
    pub crossings: Vec<CrossingResult>,
    pub crossing_errors: Vec<String>,
}

impl RunOutcome {
    pub fn bbm_violations(&self) -> impl Iterator<Item = &PointResult> {
        self.points.iter().filter(|p| p.bbm_margin < 0.0)
    }

    pub fn min_bbm_margin(&self) -> Option<f64> {
        self.points.iter().map(|p| p.bbm_margin).min_by(f64::total_cmp)
    }

    pub fn curve(&self, species: Species, state: &Configuration, variant: Variant) -> Vec<&PointResult> {
        self.points.iter().filter(|p| p.species == species && &p.state == state && p.variant == variant).collect()
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Worker threads; `None` uses every core.
    pub threads: Option<usize>,
    pub refine_crossings: bool,
    pub strict: bool,
    /// Overrides the collocation order of the spec.
    pub grid_order: Option<usize>,
}

/// Solver settings shared by every point of a run.
#[derive(Debug, Clone)]
pub struct Solver {
    pub controls: ScfControls64,
    pub momentum: MomentumOptions64,
    pub angular: AngularModel,
}

impl Solver {
    pub fn from_spec(spec: &RunSpec, options: &RunOptions) -> Self {
        let mut controls = spec.controls.clone();
        if options.grid_order.is_some() {
            controls.order = options.grid_order;
        }
        let mut momentum = spec.momentum.clone();
        momentum.strict = options.strict;
        Self { controls, momentum, angular: spec.angular }
    }

    /// Solves one point, optionally warm-started, returning the result and the
    /// converged Hartree-exchange-correlation potential.
    pub fn point(
        &self,
        species: Species,
        state: &Configuration,
        variant: Variant,
        r_c: f64,
        seed: Option<&[f64]>,
    ) -> confined_ks::Result<(PointResult, Vec<f64>)> {
        let scf = scf_solve_from(species.z(), r_c, state, variant, &self.controls, seed)?;
        let (e, pi) = entropies(&scf, &self.momentum, self.angular)?;
        let point = PointResult {
            species,
            state: state.clone(),
            variant,
            r_c,
            order: e.order,
            s_r: e.s_r,
            s_p: e.s_p,
            s_t: e.s_t,
            bbm_margin: e.bbm_margin,
            iterations: scf.iterations,
            energy: scf.energies.total,
            parseval_defect: pi.parseval_defect(),
        };
        Ok((point, scf.v_hxc))
    }

    /// Ascending scan of one curve, each point seeded by its predecessor.
    pub fn unit(&self, unit: &Unit) -> (Vec<PointResult>, Vec<Failure>) {
        let mut points = Vec::with_capacity(unit.radii.len());
        let mut failures = Vec::new();
        let mut seed: Option<Vec<f64>> = None;
        for &r_c in &unit.radii {
            let mut solved = self.point(unit.species, &unit.state, unit.variant, r_c, seed.as_deref());
            if solved.is_err() && seed.is_some() {
                // a neighbour's potential can start a mode the cold guess avoids
                log::debug!("{} {} {} r_c = {r_c}: retrying from a cold start", unit.species, unit.state, unit.variant);
                solved = self.point(unit.species, &unit.state, unit.variant, r_c, None);
            }
            match solved {
                Ok((p, v)) => {
                    points.push(p);
                    seed = Some(v);
                }
                Err(e) => {
                    log::warn!("{} {} {} r_c = {r_c}: {e}", unit.species, unit.state, unit.variant);
                    failures.push(Failure {
                        species: unit.species,
                        state: unit.state.clone(),
                        variant: unit.variant,
                        r_c,
                        message: e.to_string(),
                    });
                    seed = None;
                }
            }
        }
        (points, failures)
    }

    /// `value(a) - value(b)` at one radius from cold starts.
    fn difference(&self, c: &CrossingSpec, r_c: f64) -> confined_ks::Result<f64> {
        let (a, _) = self.point(c.species, &c.states[0], c.variant, r_c, None)?;
        let (b, _) = self.point(c.species, &c.states[1], c.variant, r_c, None)?;
        Ok(a.value(c.quantity) - b.value(c.quantity))
    }

    /// Illinois false position on freshly solved points inside a bracket.
    pub fn refine(&self, c: &CrossingSpec, lower: f64, upper: f64) -> confined_ks::Result<f64> {
        let (mut a, mut b) = (lower, upper);
        let (mut fa, mut fb) = (self.difference(c, a)?, self.difference(c, b)?);
        if fa * fb > 0.0 {
            return Err(confined_ks::Error::InvalidArgument(format!("no sign change of the difference in [{a}, {b}]")));
        }
        // which end was replaced last: -1 upper, 1 lower
        let mut last = 0;
        for _ in 0..40 {
            let x = (a * fb - b * fa) / (fb - fa);
            let fx = self.difference(c, x)?;
            if fx == 0.0 {
                return Ok(x);
            }
            if fx * fa < 0.0 {
                b = x;
                fb = fx;
                if last == -1 {
                    fa /= 2.0;
                }
                last = -1;
            } else {
                a = x;
                fa = fx;
                if last == 1 {
                    fb /= 2.0;
                }
                last = 1;
            }
            if (b - a).abs() < 1e-4 {
                break;
            }
        }
        Ok((a * fb - b * fa) / (fb - fa))
    }
}

/// Runs every unit of the spec, then the requested crossing searches.
pub fn execute(spec: &RunSpec, options: &RunOptions) -> CliResult<RunOutcome> {
    let solver = Solver::from_spec(spec, options);
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = options.threads {
        builder = builder.num_threads(n.max(1));
    }
    let pool = builder.build().map_err(|e| CliError::Pool(e.to_string()))?;
    let per_unit: Vec<(Vec<PointResult>, Vec<Failure>)> = pool.install(|| spec.units.par_iter().map(|u| solver.unit(u)).collect());

    let mut outcome = RunOutcome::default();
    for (points, failures) in per_unit {
        outcome.points.extend(points);
        outcome.failures.extend(failures);
    }

    for c in &spec.crossings {
        let curve = |state: &Configuration| outcome.curve(c.species, state, c.variant);
        let (a, b) = (curve(&c.states[0]), curve(&c.states[1]));
        let ra: Vec<f64> = a.iter().map(|p| p.r_c).collect();
        let va: Vec<f64> = a.iter().map(|p| p.value(c.quantity)).collect();
        let rb: Vec<f64> = b.iter().map(|p| p.r_c).collect();
        let vb: Vec<f64> = b.iter().map(|p| p.value(c.quantity)).collect();
        match crossover_detect(&ra, &va, &rb, &vb) {
            Ok(found) => {
                let refined: Vec<Option<f64>> = if options.refine_crossings {
                    pool.install(|| {
                        found
                            .par_iter()
                            .map(|x| match solver.refine(c, x.lower, x.upper) {
                                Ok(r) => Some(r),
                                Err(e) => {
                                    log::warn!("refining crossing in [{}, {}]: {e}", x.lower, x.upper);
                                    None
                                }
                            })
                            .collect()
                    })
                } else {
                    vec![None; found.len()]
                };
                for (x, refined) in found.iter().zip(refined) {
                    outcome.crossings.push(CrossingResult { spec: c.clone(), lower: x.lower, upper: x.upper, r_c: x.r_c, refined });
                }
            }
            Err(e) => outcome.crossing_errors.push(format!(
                "{} {} vs {} ({}, {}): {e}",
                c.species,
                c.states[0],
                c.states[1],
                c.variant,
                c.quantity.label()
            )),
        }
    }
    Ok(outcome)
}
