use crate::density::{Normalization, RadialDensity};
use crate::error::Result;
use crate::Real;

use super::{PotentialField, PotentialKind};

/// `v_H(r) = (1/r) ∫_0^r q(s) ds + ∫_r^{r_c} q(s)/s ds` with `q = 4π s² ρ`.
///
/// Requires an N-electron density so unit-normalized input cannot slip in.
pub fn hartree_potential<T: Real>(density: &RadialDensity<T>) -> Result<PotentialField<T>> {
    density.require(Normalization::Electrons)?;
    let grid = density.grid();
    let q = density.shell_charge();
    let r = grid.r();
    let over_s: Vec<T> = q.iter().zip(r).map(|(&qj, &rj)| if rj > T::zero() { qj / rj } else { T::zero() }).collect();
    let inner = grid.cumulative_integral(&q);
    let outer = grid.tail_integral(&over_s);
    let values = (0..r.len())
        .map(|j| if r[j] > T::zero() { inner[j] / r[j] + outer[j] } else { outer[j] })
        .collect();
    PotentialField::new(grid.clone(), values, PotentialKind::Hartree)
}

/// `E_H = (1/2) ∫ ρ v_H d³r`
pub fn hartree_energy<T: Real>(density: &RadialDensity<T>, hartree: &PotentialField<T>) -> T {
    let q = density.shell_charge();
    let f: Vec<T> = q.iter().zip(hartree.values()).map(|(&a, &b)| a * b).collect();
    density.grid().integrate(&f) / T::lit(2.0)
}
