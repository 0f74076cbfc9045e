//! Work-function exchange from the spherically averaged Fermi hole.
//!
//! For one spin channel with singly occupied orbitals `u_i = r R_i` (each
//! averaged uniformly over its `2l+1` substates) the hole around an electron
//! at `r` expands in Legendre multipoles. Term `(i, j, K)` carries the radial
//! factor `F = u_i(r) u_j(r) / U(r)` with `U = Σ_i u_i²` and the source
//! `G(s) = u_i(s) u_j(s)`:
//!
//! ```text
//! diagonal  i = j : K = 0, 2, .., 2 l_i        c = (2l_i+1)   (l_i l_i K; 0 0 0)²
//! pair      i < j : K = |l_i-l_j|, .., l_i+l_j c = 2 (2K+1)   (l_i l_j K; 0 0 0)²
//! ```
//!
//! Only `K = 0` terms carry charge; orthonormality makes the total `-1`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::scf::Orbital;
use crate::special::three_j_zero;
use crate::Real;

use super::{PotentialField, PotentialKind};

/// Radial field of the Fermi hole and its enclosed charge.
#[derive(Debug, Clone)]
pub struct FermiHoleField<T> {
    grid: Arc<RadialGrid<T>>,
    field: Vec<T>,
    hole_charge: Vec<T>,
}

impl<T: Real> FermiHoleField<T> {
    pub fn grid(&self) -> &Arc<RadialGrid<T>> {
        &self.grid
    }

    /// Radial component of the hole's electric field at the electron.
    pub fn field(&self) -> &[T] {
        &self.field
    }

    /// Total hole charge seen by an electron at each node.
    pub fn hole_charge(&self) -> &[T] {
        &self.hole_charge
    }
}

struct Term {
    i: usize,
    j: usize,
    k: usize,
    coef: f64,
}

fn terms<T: Real>(orbitals: &[&Orbital<T>]) -> Vec<Term> {
    let mut out = Vec::new();
    for (i, oi) in orbitals.iter().enumerate() {
        let li = oi.l();
        for k in (0..=2 * li).step_by(2) {
            let coef = (2 * li + 1) as f64 * three_j_zero(li, li, k).powi(2);
            out.push(Term { i, j: i, k, coef });
        }
        for (j, oj) in orbitals.iter().enumerate().skip(i + 1) {
            let lj = oj.l();
            for k in (li.abs_diff(lj)..=li + lj).step_by(2) {
                let coef = 2.0 * (2 * k + 1) as f64 * three_j_zero(li, lj, k).powi(2);
                out.push(Term { i, j, k, coef });
            }
        }
    }
    out
}

struct Multipoles<T> {
    /// `∫_0^r G s^K ds`
    inner: Vec<T>,
    /// `∫_r^{r_c} G s^{-1-K} ds`
    outer: Vec<T>,
}

fn multipoles<T: Real>(grid: &RadialGrid<T>, a: &[T], b: &[T], k: usize) -> Multipoles<T> {
    let r = grid.r();
    let g: Vec<T> = a.iter().zip(b).map(|(&x, &y)| x * y).collect();
    let kk = k as i32;
    let up: Vec<T> = g.iter().zip(r).map(|(&gj, &rj)| gj * rj.powi(kk)).collect();
    // G s^{-1-K} vanishes at the origin for every term in the expansion.
    let down: Vec<T> = g
        .iter()
        .zip(r)
        .map(|(&gj, &rj)| if rj > T::zero() { gj * rj.powi(-1 - kk) } else { T::zero() })
        .collect();
    Multipoles { inner: grid.cumulative_integral(&up), outer: grid.tail_integral(&down) }
}

/// `F/U` for every orbital pair at every node; endpoint values are the
/// limits taken from the orbital slopes.
fn ratios<T: Real>(grid: &RadialGrid<T>, orbitals: &[&Orbital<T>]) -> Result<Vec<Vec<Vec<T>>>> {
    let n = grid.order();
    let m = orbitals.len();
    let u: Vec<&[T]> = orbitals.iter().map(|o| o.values()).collect();
    let du: Vec<Vec<T>> = u.iter().map(|v| grid.derivative(v)).collect();
    let mut out = vec![vec![vec![T::zero(); n + 1]; m]; m];
    for node in 0..=n {
        let interior = node > 0 && node < n;
        let vals: Vec<T> = if interior { u.iter().map(|v| v[node]).collect() } else { du.iter().map(|v| v[node]).collect() };
        let total: T = vals.iter().map(|&x| x * x).sum();
        if !(total > T::zero()) {
            if interior {
                return Err(Error::VanishingDensity { node, r: grid.r()[node].as_f64() });
            }
            continue;
        }
        for i in 0..m {
            for j in i..m {
                let v = vals[i] * vals[j] / total;
                out[i][j][node] = v;
                out[j][i][node] = v;
            }
        }
    }
    Ok(out)
}

/// Exchange field and enclosed hole charge for one spin channel.
pub fn fermi_hole_exchange_field<T: Real>(grid: &Arc<RadialGrid<T>>, orbitals: &[&Orbital<T>]) -> Result<FermiHoleField<T>> {
    let n = grid.order();
    if orbitals.is_empty() {
        return Err(Error::InvalidArgument("exchange field needs at least one occupied orbital".into()));
    }
    if orbitals.iter().any(|o| o.values().len() != n + 1) {
        return Err(Error::GridMismatch);
    }
    let ratio = ratios(grid, orbitals)?;
    let r = grid.r();
    let mut field = vec![T::zero(); n + 1];
    let mut hole_charge = vec![T::zero(); n + 1];
    for t in terms(orbitals) {
        let mp = multipoles(grid, orbitals[t.i].values(), orbitals[t.j].values(), t.k);
        let kf = T::of(t.k);
        let scale = -T::lit(t.coef) / T::of(2 * t.k + 1);
        let kk = t.k as i32;
        for node in 1..=n {
            let rj = r[node];
            let bracket = (kf + T::one()) * mp.inner[node] / rj.powi(kk + 2) - kf * rj.powi(kk - 1) * mp.outer[node];
            field[node] += scale * ratio[t.i][t.j][node] * bracket;
        }
        if t.k == 0 {
            let total = mp.inner[n];
            for node in 0..=n {
                hole_charge[node] -= T::lit(t.coef) * ratio[t.i][t.j][node] * total;
            }
        }
    }
    field[0] = T::zero();
    Ok(FermiHoleField { grid: grid.clone(), field, hole_charge })
}

/// `v_x(r) = -1/r_c + ∫_r^{r_c} E(s) ds`, the work done against the hole field.
pub fn work_function_exchange<T: Real>(field: &FermiHoleField<T>) -> PotentialField<T> {
    let grid = &field.grid;
    let wall = -T::one() / grid.r_c();
    let values = grid.tail_integral(&field.field).into_iter().map(|v| wall + v).collect();
    PotentialField::new(grid.clone(), values, PotentialKind::Exchange).expect("field lives on its own grid")
}

/// Exchange energy `(1/2) ∫ ρ_σ(r) Φ_x(r) d³r` of one spin channel, where
/// `Φ_x` is the Coulomb potential of the hole at the electron.
pub fn exchange_energy<T: Real>(grid: &Arc<RadialGrid<T>>, orbitals: &[&Orbital<T>]) -> Result<T> {
    let n = grid.order();
    if orbitals.is_empty() {
        return Ok(T::zero());
    }
    let ratio = ratios(grid, orbitals)?;
    let r = grid.r();
    let mut phi = vec![T::zero(); n + 1];
    for t in terms(orbitals) {
        let mp = multipoles(grid, orbitals[t.i].values(), orbitals[t.j].values(), t.k);
        let scale = -T::lit(t.coef) / T::of(2 * t.k + 1);
        let kk = t.k as i32;
        for node in 1..n {
            let rj = r[node];
            phi[node] += scale * ratio[t.i][t.j][node] * (mp.inner[node] / rj.powi(kk + 1) + rj.powi(kk) * mp.outer[node]);
        }
    }
    let density: Vec<T> = (0..=n).map(|j| orbitals.iter().map(|o| o.values()[j] * o.values()[j]).sum()).collect();
    let integrand: Vec<T> = density.iter().zip(&phi).map(|(&a, &b)| a * b).collect();
    Ok(grid.integrate(&integrand) / T::lit(2.0))
}
