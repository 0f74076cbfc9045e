//! Shannon entropies of the unit-normalised densities and entropy crossovers.

use crate::configuration::Configuration;
use crate::density::{occupied, Normalization, RadialDensity};
use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::momentum::{momentum_density, MomentumDensity, MomentumOptions};
use crate::scf::{Orbital, ScfResult, Variant};
use crate::special::{gauss_legendre, legendre};
use crate::Real;

/// Angular shape of the density whose entropy is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AngularModel {
    /// Every orbital in its `m = 0` substate, i.e. the `M_L = 0` member of the
    /// term, with `|Y_l0(θ)|²` kept in both spaces.
    #[default]
    Aligned,
    /// Occupation spread uniformly over the `2l+1` substates.
    SphericalAverage,
}

/// Points of the Gauss-Legendre rule in `cos θ` on `[0, 1]`.
const ANGULAR_POINTS: usize = 48;

/// Lower bound `3(1 + ln π)` on `S_r + S_p` in three dimensions.
pub fn bbm_bound<T: Real>() -> T {
    T::lit(3.0) * (T::one() + T::PI().ln())
}

const UNDERFLOW: f64 = 1e-300;
const NORM_TOLERANCE: f64 = 1e-6;

fn shannon_sum<T: Real>(weights: &[T], abscissae: &[T], density: &[T]) -> T {
    let floor = T::lit(UNDERFLOW);
    let four_pi = T::lit(4.0) * T::PI();
    -four_pi
        * weights
            .iter()
            .zip(abscissae)
            .zip(density)
            .filter(|(_, &d)| d >= floor)
            .map(|((&w, &x), &d)| w * x * x * d * d.ln())
            .sum::<T>()
}

/// `S_r = -4π ∫ ρ ln ρ r² dr` of a unit-normalised density.
pub fn shannon_r<T: Real>(density: &RadialDensity<T>) -> Result<T> {
    density.require(Normalization::Unit)?;
    density.check_normalization(T::lit(NORM_TOLERANCE))?;
    let grid = density.grid();
    Ok(shannon_sum(grid.weights(), grid.r(), density.values()))
}

/// `S_p = -4π ∫ Π ln Π p² dp`.
pub fn shannon_p<T: Real>(density: &MomentumDensity<T>) -> Result<T> {
    let defect = (density.norm() - T::one()).abs();
    if defect > T::lit(NORM_TOLERANCE) {
        return Err(Error::NormalizationDefect { defect: defect.as_f64(), tolerance: NORM_TOLERANCE });
    }
    let grid = density.grid();
    Ok(shannon_sum(grid.weights(), grid.p(), density.values()))
}

/// `-∫ ρ ln ρ d³x` for `ρ(x, θ) = Σ_i w_i f_i(x) |Y_{l_i 0}(θ)|²` with radial
/// nodes `x`, weights and the per-orbital radial factors `f_i`.
fn aligned_sum<T: Real>(weights: &[T], abscissae: &[T], parts: &[(usize, T, &[T])]) -> T {
    let (c, wc) = gauss_legendre::<T>(ANGULAR_POINTS);
    let floor = T::lit(UNDERFLOW);
    let four_pi = T::lit(4.0) * T::PI();
    // c in [0, 1]; the integrand is even in cos θ
    let angular: Vec<(T, Vec<T>)> = c
        .iter()
        .zip(&wc)
        .map(|(&ci, &wi)| {
            let x = (ci + T::one()) / T::lit(2.0);
            let y = parts.iter().map(|&(l, _, _)| T::of(2 * l + 1) / four_pi * legendre(l, x).powi(2)).collect();
            (wi, y)
        })
        .collect();
    let mut total = T::zero();
    for (k, (&w, &x)) in weights.iter().zip(abscissae).enumerate() {
        let mut inner = T::zero();
        for (wa, y) in &angular {
            let rho: T = parts.iter().zip(y).map(|(&(_, occ, f), &yl)| occ * f[k] * yl).sum();
            if rho >= floor {
                inner += *wa * rho * rho.ln();
            }
        }
        // 2π from φ, the half-interval Jacobian 1/2 and the factor 2 from symmetry
        total += w * x * x * inner;
    }
    -T::lit(2.0) * T::PI() * total
}

/// Position entropy of the aligned (`m = 0`) unit density of a configuration.
pub fn shannon_r_aligned<T: Real>(grid: &RadialGrid<T>, orbitals: &[Orbital<T>], configuration: &Configuration) -> Result<T> {
    let occ = occupied(orbitals, configuration)?;
    let electrons: T = occ.iter().map(|(_, n)| *n).sum();
    let n = grid.order();
    let radial: Vec<(usize, T, Vec<T>)> = occ
        .iter()
        .map(|(o, w)| {
            let u = o.values();
            let mut f = vec![T::zero(); n + 1];
            for j in 1..n {
                let r = grid.r()[j];
                f[j] = u[j] * u[j] / (r * r);
            }
            if o.l() == 0 {
                let du = grid.derivative(u)[0];
                f[0] = du * du;
            }
            (o.l(), *w / electrons, f)
        })
        .collect();
    let norm: T = radial.iter().map(|(_, w, f)| {
        let g: Vec<T> = f.iter().zip(grid.r()).map(|(&fv, &r)| fv * r * r).collect();
        *w * grid.integrate(&g)
    }).sum();
    let defect = (norm - T::one()).abs();
    if defect > T::lit(NORM_TOLERANCE) {
        return Err(Error::NormalizationDefect { defect: defect.as_f64(), tolerance: NORM_TOLERANCE });
    }
    let parts: Vec<(usize, T, &[T])> = radial.iter().map(|(l, w, f)| (*l, *w, f.as_slice())).collect();
    Ok(aligned_sum(grid.weights(), grid.r(), &parts))
}

/// Momentum entropy of the aligned (`m = 0`) unit density.
pub fn shannon_p_aligned<T: Real>(density: &MomentumDensity<T>) -> Result<T> {
    let defect = (density.norm() - T::one()).abs();
    if defect > T::lit(NORM_TOLERANCE) {
        return Err(Error::NormalizationDefect { defect: defect.as_f64(), tolerance: NORM_TOLERANCE });
    }
    let electrons = density.electrons();
    let parts: Vec<(usize, T, &[T])> =
        density.components().iter().map(|c| (c.l, c.occupation / electrons, c.squared.as_slice())).collect();
    let grid = density.grid();
    Ok(aligned_sum(grid.weights(), grid.p(), &parts))
}

/// Entropy of the `N`-electron density from the unit-normalised one:
/// `S_N = N S - N ln N`.
pub fn normalization_convert<T: Real>(s_unit: T, electrons: T) -> Result<T> {
    if !(electrons > T::zero()) {
        return Err(Error::InvalidElectronCount(electrons.as_f64()));
    }
    Ok(electrons * s_unit - electrons * electrons.ln())
}

/// Inverse of [`normalization_convert`].
pub fn normalization_invert<T: Real>(s_n: T, electrons: T) -> Result<T> {
    if !(electrons > T::zero()) {
        return Err(Error::InvalidElectronCount(electrons.as_f64()));
    }
    Ok((s_n + electrons * electrons.ln()) / electrons)
}

/// Entropies of one converged state.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyResult<T> {
    pub z: T,
    pub r_c: T,
    pub state: String,
    pub variant: Variant,
    pub order: usize,
    pub s_r: T,
    pub s_p: T,
    pub s_t: T,
    /// `S_t - 3(1 + ln π)`
    pub bbm_margin: T,
}

impl<T: Real> EntropyResult<T> {
    pub fn satisfies_bbm(&self) -> bool {
        self.bbm_margin >= T::zero()
    }
}

/// Position and momentum entropies of an SCF result.
pub fn entropies<T: Real>(
    result: &ScfResult<T>,
    options: &MomentumOptions<T>,
    model: AngularModel,
) -> Result<(EntropyResult<T>, MomentumDensity<T>)> {
    let pi = momentum_density(&result.grid, &result.orbitals, &result.configuration, result.z, options)?;
    let (s_r, s_p) = match model {
        AngularModel::SphericalAverage => (shannon_r(&result.unit_density())?, shannon_p(&pi)?),
        AngularModel::Aligned => {
            (shannon_r_aligned(&result.grid, &result.orbitals, &result.configuration)?, shannon_p_aligned(&pi)?)
        }
    };
    let s_t = s_r + s_p;
    let entropy = EntropyResult {
        z: result.z,
        r_c: result.r_c(),
        state: result.configuration.label(),
        variant: result.variant,
        order: result.grid.order(),
        s_r,
        s_p,
        s_t,
        bbm_margin: s_t - bbm_bound::<T>(),
    };
    Ok((entropy, pi))
}

/// A sign change of `a - b` between two scan radii.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing<T> {
    pub lower: T,
    pub upper: T,
    /// Root of the monotone cubic interpolant of the difference.
    pub r_c: T,
}

/// Fritsch-Carlson slopes of the monotone cubic interpolant.
fn pchip_slopes<T: Real>(x: &[T], y: &[T]) -> Vec<T> {
    let n = x.len();
    let h: Vec<T> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<T> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
    let mut m = vec![T::zero(); n];
    if n == 2 {
        m[0] = delta[0];
        m[1] = delta[0];
        return m;
    }
    for k in 1..n - 1 {
        if delta[k - 1] * delta[k] > T::zero() {
            let w1 = T::lit(2.0) * h[k] + h[k - 1];
            let w2 = h[k] + T::lit(2.0) * h[k - 1];
            m[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
        }
    }
    let end = |h0: T, h1: T, d0: T, d1: T| {
        let s = ((T::lit(2.0) * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if s * d0 <= T::zero() {
            T::zero()
        } else if d0 * d1 < T::zero() && s.abs() > T::lit(3.0) * d0.abs() {
            T::lit(3.0) * d0
        } else {
            s
        }
    };
    m[0] = end(h[0], h[1], delta[0], delta[1]);
    m[n - 1] = end(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    m
}

fn hermite<T: Real>(x0: T, x1: T, y0: T, y1: T, m0: T, m1: T, x: T) -> T {
    let h = x1 - x0;
    let t = (x - x0) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    (two * t3 - three * t2 + T::one()) * y0 + (t3 - two * t2 + t) * h * m0 + (-two * t3 + three * t2) * y1 + (t3 - t2) * h * m1
}

/// Radii where two entropy curves cross, from scans over overlapping radii.
///
/// Only radii present in both scans are used.
pub fn crossover_detect<T: Real>(radii_a: &[T], values_a: &[T], radii_b: &[T], values_b: &[T]) -> Result<Vec<Crossing<T>>> {
    if radii_a.len() != values_a.len() || radii_b.len() != values_b.len() {
        return Err(Error::InvalidArgument("scan radii and values differ in length".into()));
    }
    let mut pairs: Vec<(T, T)> = Vec::new();
    for (i, &r) in radii_a.iter().enumerate() {
        if let Some(j) = radii_b.iter().position(|&q| q == r) {
            pairs.push((r, values_a[i] - values_b[j]));
        }
    }
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    pairs.dedup_by(|a, b| a.0 == b.0);
    if pairs.len() < 2 {
        return Err(Error::NonOverlappingScans);
    }
    let x: Vec<T> = pairs.iter().map(|p| p.0).collect();
    let d: Vec<T> = pairs.iter().map(|p| p.1).collect();
    let m = pchip_slopes(&x, &d);
    let mut out = Vec::new();
    for k in 0..x.len() - 1 {
        let (d0, d1) = (d[k], d[k + 1]);
        if d0 == T::zero() {
            let before = if k > 0 { d[k - 1] } else { T::zero() };
            if before * d1 < T::zero() {
                out.push(Crossing { lower: x[k - 1], upper: x[k + 1], r_c: x[k] });
            }
            continue;
        }
        if d0 * d1 >= T::zero() {
            continue;
        }
        let (mut lo, mut hi) = (x[k], x[k + 1]);
        for _ in 0..200 {
            let mid = (lo + hi) / T::lit(2.0);
            let v = hermite(x[k], x[k + 1], d0, d1, m[k], m[k + 1], mid);
            if (v < T::zero()) == (d0 < T::zero()) {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= T::epsilon() * hi.abs() {
                break;
            }
        }
        out.push(Crossing { lower: x[k], upper: x[k + 1], r_c: (lo + hi) / T::lit(2.0) });
    }
    Ok(out)
}
