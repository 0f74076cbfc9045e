//! Momentum-space orbitals and the spherically averaged momentum density.
//!
//! `R̃_l(p) = sqrt(2/π) ∫_0^{r_c} u(r) r j_l(p r) dr`, normalised so that
//! `∫ |R̃|² p² dp = ∫ u² dr`. Both the `r` and `p` integrals use composite
//! Gauss-Legendre panels sized to the oscillation of `j_l(p r)`; the `p`
//! range grows until the Parseval defect of the density falls below the
//! requested tolerance.

use std::sync::Arc;

use crate::configuration::Configuration;
use crate::density::occupied;
use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::scf::Orbital;
use crate::special::{gauss_legendre, spherical_bessel_j};
use crate::Real;

/// Quadrature nodes on `(0, p_max]`.
#[derive(Debug, Clone)]
pub struct MomentumGrid<T> {
    p: Vec<T>,
    weights: Vec<T>,
    p_max: T,
}

impl<T: Real> MomentumGrid<T> {
    /// Composite Gauss-Legendre rule with `points` nodes on each panel of `width`.
    pub fn panels(p_max: T, width: T, points: usize) -> Result<Self> {
        if !(p_max > T::zero() && width > T::zero()) || points == 0 {
            return Err(Error::InvalidArgument("momentum grid needs positive p_max, width and points".into()));
        }
        let count = (p_max / width).ceil().to_usize().unwrap_or(1).max(1);
        let width = p_max / T::of(count);
        let mut grid = Self { p: Vec::new(), weights: Vec::new(), p_max: T::zero() };
        let (x, w) = gauss_legendre::<T>(points);
        for k in 0..count {
            grid.push_panel(T::of(k) * width, width, &x, &w);
        }
        grid.p_max = p_max;
        Ok(grid)
    }

    fn push_panel(&mut self, start: T, width: T, x: &[T], w: &[T]) {
        let half = width / T::lit(2.0);
        for (&xi, &wi) in x.iter().zip(w) {
            self.p.push(start + half * (xi + T::one()));
            self.weights.push(half * wi);
        }
        self.p_max = start + width;
    }

    pub fn p(&self) -> &[T] {
        &self.p
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn p_max(&self) -> T {
        self.p_max
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn integrate(&self, f: &[T]) -> T {
        self.weights.iter().zip(f).map(|(&w, &v)| w * v).sum()
    }
}

/// Orbital resampled on composite Gauss-Legendre panels over `[0, r_ext]`.
struct FineOrbital<T> {
    l: usize,
    r: Vec<T>,
    /// `w_k u(r_k) r_k`
    weighted: Vec<T>,
}

fn orbital_extent<T: Real>(grid: &RadialGrid<T>, orbitals: &[&Orbital<T>]) -> T {
    let mut extent = T::zero();
    for orb in orbitals {
        let u = orb.values();
        let peak = u.iter().fold(T::zero(), |m, &v| m.max(v.abs()));
        let cut = peak * T::lit(1e-10);
        let last = u.iter().rposition(|&v| v.abs() > cut).unwrap_or(u.len() - 1);
        let idx = (last + 1).min(u.len() - 1);
        extent = extent.max(grid.r()[idx]);
    }
    extent
}

fn resample<T: Real>(grid: &RadialGrid<T>, orbital: &Orbital<T>, r_ext: T, p_res: T, points: usize) -> FineOrbital<T> {
    let count = ((r_ext * p_res / T::PI()).ceil().to_usize().unwrap_or(1)).max(16);
    let width = r_ext / T::of(count);
    let half = width / T::lit(2.0);
    let (x, w) = gauss_legendre::<T>(points);
    let mut r = Vec::with_capacity(count * points);
    let mut weighted = Vec::with_capacity(count * points);
    for k in 0..count {
        let start = T::of(k) * width;
        for (&xi, &wi) in x.iter().zip(&w) {
            let rv = start + half * (xi + T::one());
            let u = grid.interpolate(orbital.values(), rv);
            r.push(rv);
            weighted.push(half * wi * u * rv);
        }
    }
    FineOrbital { l: orbital.l(), r, weighted }
}

fn transform_at<T: Real>(fine: &FineOrbital<T>, p: T) -> T {
    let pref = (T::lit(2.0) / T::PI()).sqrt();
    let s: T = fine.r.iter().zip(&fine.weighted).map(|(&r, &w)| w * spherical_bessel_j(fine.l, p * r)).sum();
    pref * s
}

/// `R̃_l(p_k)` of one orbital on the nodes of `momentum`.
pub fn bessel_transform<T: Real>(grid: &RadialGrid<T>, orbital: &Orbital<T>, momentum: &MomentumGrid<T>) -> Vec<T> {
    let r_ext = orbital_extent(grid, &[orbital]);
    let fine = resample(grid, orbital, r_ext, momentum.p_max().max(T::one()), R_POINTS);
    momentum.p().iter().map(|&p| transform_at(&fine, p)).collect()
}

const R_POINTS: usize = 8;

/// Settings for the adaptive momentum grid.
#[derive(Debug, Clone)]
pub struct MomentumOptions<T> {
    /// Target Parseval defect of the unit density before renormalisation.
    pub tolerance: T,
    /// Gauss-Legendre points per `p` panel.
    pub points_per_panel: usize,
    /// Largest momentum the grid may extend to.
    pub p_limit: T,
    /// Fail instead of warning when the renormalisation exceeds `max_correction`.
    pub strict: bool,
    pub max_correction: T,
}

impl<T: Real> Default for MomentumOptions<T> {
    fn default() -> Self {
        Self {
            tolerance: T::lit(1e-7),
            points_per_panel: 8,
            p_limit: T::lit(2.0e4),
            strict: false,
            max_correction: T::lit(1e-3),
        }
    }
}

/// `|R̃(p)|²` of one occupied orbital, renormalised, with its occupation.
#[derive(Debug, Clone)]
pub struct MomentumComponent<T> {
    pub l: usize,
    pub occupation: T,
    pub squared: Vec<T>,
}

/// Unit-normalised, spherically averaged `Π(p)` on its own momentum grid.
#[derive(Debug, Clone)]
pub struct MomentumDensity<T> {
    grid: Arc<MomentumGrid<T>>,
    values: Vec<T>,
    components: Vec<MomentumComponent<T>>,
    electrons: T,
    /// `1 - 4π ∫ Π p² dp` before renormalisation.
    parseval_defect: T,
    /// Per-orbital `∫ |R̃|² p² dp` before renormalisation.
    orbital_norms: Vec<T>,
}

impl<T: Real> MomentumDensity<T> {
    pub fn grid(&self) -> &Arc<MomentumGrid<T>> {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Per-orbital radial momentum densities.
    pub fn components(&self) -> &[MomentumComponent<T>] {
        &self.components
    }

    pub fn electrons(&self) -> T {
        self.electrons
    }

    pub fn parseval_defect(&self) -> T {
        self.parseval_defect
    }

    pub fn orbital_norms(&self) -> &[T] {
        &self.orbital_norms
    }

    /// `4π ∫ Π p² dp`
    pub fn norm(&self) -> T {
        let four_pi = T::lit(4.0) * T::PI();
        let f: Vec<T> = self.grid.p().iter().zip(&self.values).map(|(&p, &v)| four_pi * p * p * v).collect();
        self.grid.integrate(&f)
    }

    /// `<p²>` of the unit density.
    pub fn second_moment(&self) -> T {
        let four_pi = T::lit(4.0) * T::PI();
        let f: Vec<T> = self.grid.p().iter().zip(&self.values).map(|(&p, &v)| four_pi * p.powi(4) * v).collect();
        self.grid.integrate(&f)
    }
}

/// Default lower bound on the momentum cutoff for nuclear charge `z` and radius `r_c`.
pub fn default_p_max(z: f64, r_c: f64) -> f64 {
    (30.0 * z.max(1.0) / r_c.min(1.0).sqrt()).min(400.0)
}

/// Momentum density of `configuration` built from its converged orbitals.
pub fn momentum_density<T: Real>(
    grid: &RadialGrid<T>,
    orbitals: &[Orbital<T>],
    configuration: &Configuration,
    z: T,
    options: &MomentumOptions<T>,
) -> Result<MomentumDensity<T>> {
    let occ = occupied(orbitals, configuration)?;
    let electrons: T = occ.iter().map(|(_, w)| *w).sum();
    let orbs: Vec<&Orbital<T>> = occ.iter().map(|(o, _)| *o).collect();
    let r_ext = orbital_extent(grid, &orbs);
    let width = T::PI() / r_ext;
    let (x, w) = gauss_legendre::<T>(options.points_per_panel);
    let floor = T::lit(default_p_max(z.as_f64(), grid.r_c().as_f64()));

    let mut mgrid = MomentumGrid { p: Vec::new(), weights: Vec::new(), p_max: T::zero() };
    let mut amplitudes: Vec<Vec<T>> = vec![Vec::new(); orbs.len()];
    let mut norms = vec![T::zero(); orbs.len()];
    let mut p_res = floor;
    let mut defect;
    loop {
        let fine: Vec<FineOrbital<T>> = orbs.iter().map(|o| resample(grid, o, r_ext, p_res, R_POINTS)).collect();
        while mgrid.p_max < p_res {
            let start = mgrid.p_max;
            let first = mgrid.p.len();
            mgrid.push_panel(start, width, &x, &w);
            for (k, f) in fine.iter().enumerate() {
                for idx in first..mgrid.p.len() {
                    let p = mgrid.p[idx];
                    let a = transform_at(f, p);
                    amplitudes[k].push(a);
                    norms[k] += mgrid.weights[idx] * a * a * p * p;
                }
            }
        }
        let captured: T = occ.iter().zip(&norms).map(|((_, n), &q)| *n * q).sum::<T>() / electrons;
        defect = T::one() - captured;
        if defect.abs() <= options.tolerance || p_res >= options.p_limit {
            break;
        }
        p_res = (p_res * T::lit(2.0)).min(options.p_limit);
    }

    if defect.abs() > options.max_correction {
        if options.strict {
            return Err(Error::MomentumNorm { defect: defect.as_f64(), p_max: mgrid.p_max.as_f64() });
        }
        log::warn!("momentum density renormalised by {:e} at p_max = {}", defect.as_f64(), mgrid.p_max.as_f64());
    }

    let four_pi = T::lit(4.0) * T::PI();
    let scale = T::one() / (four_pi * electrons * (T::one() - defect));
    let values = (0..mgrid.p.len())
        .map(|i| occ.iter().zip(&amplitudes).map(|((_, n), a)| *n * a[i] * a[i]).sum::<T>() * scale)
        .collect();
    let renorm = T::one() / (T::one() - defect);
    let components = occ
        .iter()
        .zip(&amplitudes)
        .map(|((o, n), a)| MomentumComponent { l: o.l(), occupation: *n, squared: a.iter().map(|&v| v * v * renorm).collect() })
        .collect();
    Ok(MomentumDensity { grid: Arc::new(mgrid), values, components, electrons, parseval_defect: defect, orbital_norms: norms })
}
