//! Terms of the Kohn-Sham effective potential on the radial grid.
//!
//! Confinement adds no term: the hard wall is realised by the Dirichlet
//! truncation of the grid operator.

mod constants;
mod exchange;
mod hartree;
mod lyp;
mod wigner;

use std::sync::Arc;

pub use constants::{parse_constants, CorrelationConstants, LypConstants, WignerConstants, CONSTANTS_ENV};
pub use exchange::{exchange_energy, fermi_hole_exchange_field, work_function_exchange, FermiHoleField};
pub use hartree::{hartree_energy, hartree_potential};
pub use lyp::{lyp_correlation, lyp_energy_density, lyp_laplacian_energy_density, LypSpin};
pub use wigner::{wigner_correlation, wigner_energy_density};

use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::Real;

/// Densities below this are treated as zero by the correlation functionals.
pub const DENSITY_FLOOR: f64 = 1e-20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialKind {
    Nuclear,
    Hartree,
    Exchange,
    Correlation,
    Effective,
}

/// Potential values at every grid node.
///
/// Interior values are always finite. Endpoint values of terms that are
/// singular at the origin are placeholders; orbitals vanish there.
#[derive(Debug, Clone)]
pub struct PotentialField<T> {
    grid: Arc<RadialGrid<T>>,
    values: Vec<T>,
    kind: PotentialKind,
}

impl<T: Real> PotentialField<T> {
    pub fn new(grid: Arc<RadialGrid<T>>, values: Vec<T>, kind: PotentialKind) -> Result<Self> {
        if values.len() != grid.order() + 1 {
            return Err(Error::GridMismatch);
        }
        Ok(Self { grid, values, kind })
    }

    pub fn zero(grid: Arc<RadialGrid<T>>, kind: PotentialKind) -> Self {
        let values = vec![T::zero(); grid.order() + 1];
        Self { grid, values, kind }
    }

    /// `-Z/r`, with `-∞` stored at the origin.
    pub fn nuclear(grid: Arc<RadialGrid<T>>, z: T) -> Self {
        let values = grid.r().iter().map(|&r| if r > T::zero() { -z / r } else { T::neg_infinity() }).collect();
        Self { grid, values, kind: PotentialKind::Nuclear }
    }

    pub fn grid(&self) -> &Arc<RadialGrid<T>> {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn kind(&self) -> PotentialKind {
        self.kind
    }

    /// Values at the interior nodes `1..N`.
    pub fn interior(&self) -> &[T] {
        &self.values[1..self.values.len() - 1]
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }
}

/// Output of a correlation functional.
#[derive(Debug, Clone)]
pub struct Correlation<T> {
    pub potential: PotentialField<T>,
    pub energy: T,
}

/// `v_eff = -Z/r + v_H + v_x (+ v_c)`.
pub fn assemble_effective_potential<T: Real>(
    z: T,
    hartree: &PotentialField<T>,
    exchange: &PotentialField<T>,
    correlation: Option<&PotentialField<T>>,
) -> Result<PotentialField<T>> {
    let grid = hartree.grid();
    let same = |f: &PotentialField<T>| f.grid().same_as(grid);
    if !same(exchange) || !correlation.is_none_or(same) {
        return Err(Error::GridMismatch);
    }
    let nuclear = PotentialField::nuclear(grid.clone(), z);
    let values = (0..=grid.order())
        .map(|j| {
            let c = correlation.map_or(T::zero(), |f| f.values[j]);
            nuclear.values[j] + hartree.values[j] + exchange.values[j] + c
        })
        .collect();
    PotentialField::new(grid.clone(), values, PotentialKind::Effective)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, Mapping};

    #[test]
    fn effective_potential_rejects_foreign_grid() {
        let a = Arc::new(build_grid::<f64>(16, 1.0, Mapping::Affine).unwrap());
        let b = Arc::new(build_grid::<f64>(16, 2.0, Mapping::Affine).unwrap());
        let h = PotentialField::zero(a.clone(), PotentialKind::Hartree);
        let x = PotentialField::zero(b, PotentialKind::Exchange);
        assert!(matches!(assemble_effective_potential(2.0, &h, &x, None), Err(Error::GridMismatch)));
        let x = PotentialField::zero(a, PotentialKind::Exchange);
        let v = assemble_effective_potential(2.0, &h, &x, None).unwrap();
        assert_eq!(v.values()[16], -2.0);
        assert_eq!(v.kind(), PotentialKind::Effective);
    }
}
