//! Spherically averaged electron densities in position space.

use std::sync::Arc;

use crate::configuration::Configuration;
use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::scf::Orbital;
use crate::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// Integrates to one.
    Unit,
    /// Integrates to the electron count.
    Electrons,
}

impl Normalization {
    pub fn name(self) -> &'static str {
        match self {
            Normalization::Unit => "unit",
            Normalization::Electrons => "N-electron",
        }
    }
}

/// `ρ(r_j)` on every grid node, endpoints included.
#[derive(Debug, Clone)]
pub struct RadialDensity<T> {
    grid: Arc<RadialGrid<T>>,
    values: Vec<T>,
    normalization: Normalization,
    electrons: T,
}

impl<T: Real> RadialDensity<T> {
    /// Wraps nodal values; rejects negative entries.
    pub fn new(grid: Arc<RadialGrid<T>>, values: Vec<T>, normalization: Normalization, electrons: T) -> Result<Self> {
        if values.len() != grid.order() + 1 {
            return Err(Error::GridMismatch);
        }
        if !(electrons > T::zero()) {
            return Err(Error::InvalidElectronCount(electrons.as_f64()));
        }
        if let Some((node, &v)) = values.iter().enumerate().find(|(_, v)| !(**v >= T::zero())) {
            return Err(Error::NegativeDensity { node, value: v.as_f64() });
        }
        Ok(Self { grid, values, normalization, electrons })
    }

    pub fn grid(&self) -> &Arc<RadialGrid<T>> {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn electrons(&self) -> T {
        self.electrons
    }

    /// `4π r² ρ(r)` at every node.
    pub fn shell_charge(&self) -> Vec<T> {
        let four_pi = T::lit(4.0) * T::PI();
        self.grid.r().iter().zip(&self.values).map(|(&r, &rho)| four_pi * r * r * rho).collect()
    }

    /// `4π ∫ ρ r² dr`
    pub fn norm(&self) -> T {
        self.grid.integrate(&self.shell_charge())
    }

    /// Fails when the integral deviates from its tag by more than `tolerance`.
    pub fn check_normalization(&self, tolerance: T) -> Result<()> {
        let expected = match self.normalization {
            Normalization::Unit => T::one(),
            Normalization::Electrons => self.electrons,
        };
        let defect = (self.norm() - expected).abs();
        if defect > tolerance {
            return Err(Error::NormalizationDefect { defect: defect.as_f64(), tolerance: tolerance.as_f64() });
        }
        Ok(())
    }

    pub fn require(&self, normalization: Normalization) -> Result<()> {
        if self.normalization != normalization {
            return Err(Error::WrongNormalization { expected: normalization.name(), found: self.normalization.name() });
        }
        Ok(())
    }

    pub fn to_unit(&self) -> Self {
        self.rescaled(Normalization::Unit)
    }

    pub fn to_electrons(&self) -> Self {
        self.rescaled(Normalization::Electrons)
    }

    fn rescaled(&self, target: Normalization) -> Self {
        let factor = match (self.normalization, target) {
            (Normalization::Unit, Normalization::Electrons) => self.electrons,
            (Normalization::Electrons, Normalization::Unit) => T::one() / self.electrons,
            _ => T::one(),
        };
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| v * factor).collect(),
            normalization: target,
            electrons: self.electrons,
        }
    }

    /// `dρ/dr` at every node.
    pub fn gradient(&self) -> Vec<T> {
        self.grid.derivative(&self.values)
    }
}

/// Occupation-weighted `Σ n_i u_i(r)²` at every node.
pub fn radial_occupation_sum<T: Real>(orbitals: &[(&Orbital<T>, T)]) -> Vec<T> {
    let len = orbitals.first().map(|(o, _)| o.values().len()).unwrap_or(0);
    let mut out = vec![T::zero(); len];
    for (orb, occ) in orbitals {
        for (o, &u) in out.iter_mut().zip(orb.values()) {
            *o += *occ * u * u;
        }
    }
    out
}

/// Finds the orbital for each shell of `configuration`, paired with its occupation.
pub fn occupied<'a, T: Real>(orbitals: &'a [Orbital<T>], configuration: &Configuration) -> Result<Vec<(&'a Orbital<T>, T)>> {
    configuration
        .shells()
        .iter()
        .map(|s| {
            orbitals
                .iter()
                .find(|o| o.n() == s.n && o.l() == s.l)
                .map(|o| (o, T::of(s.occupation)))
                .ok_or_else(|| Error::MissingShell(s.label()))
        })
        .collect()
}

/// N-electron density `ρ = Σ n_i |u_i|² / (4π r²)`, spherically averaged.
pub fn build_density<T: Real>(
    grid: &Arc<RadialGrid<T>>,
    orbitals: &[Orbital<T>],
    configuration: &Configuration,
) -> Result<RadialDensity<T>> {
    let occ = occupied(orbitals, configuration)?;
    let n = grid.order();
    let four_pi = T::lit(4.0) * T::PI();
    let sum = radial_occupation_sum(&occ);
    let mut values = vec![T::zero(); n + 1];
    for j in 1..n {
        let r = grid.r()[j];
        values[j] = sum[j] / (four_pi * r * r);
    }
    // R(0) = u'(0) for s shells, zero otherwise.
    let mut origin = T::zero();
    for (orb, w) in &occ {
        if orb.l() == 0 {
            let du0 = grid.derivative(orb.values())[0];
            origin += *w * du0 * du0;
        }
    }
    values[0] = origin / four_pi;
    RadialDensity::new(grid.clone(), values, Normalization::Electrons, T::of(configuration.electrons()))
}
