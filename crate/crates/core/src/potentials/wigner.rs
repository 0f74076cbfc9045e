//! Local Wigner-type correlation, `e_c(ρ) = -ρ / (a + b ρ^{-1/3})` per volume.

use crate::density::RadialDensity;
use crate::Real;

use super::{Correlation, PotentialField, PotentialKind, WignerConstants, DENSITY_FLOOR};

/// Energy per unit volume at density `rho`.
pub fn wigner_energy_density<T: Real>(rho: T, k: &WignerConstants) -> T {
    if rho < T::lit(DENSITY_FLOOR) {
        return T::zero();
    }
    let t = rho.cbrt().recip();
    -rho / (T::lit(k.a) + T::lit(k.b) * t)
}

fn wigner_potential<T: Real>(rho: T, k: &WignerConstants) -> T {
    if rho < T::lit(DENSITY_FLOOR) {
        return T::zero();
    }
    let (a, b) = (T::lit(k.a), T::lit(k.b));
    let t = rho.cbrt().recip();
    let den = a + b * t;
    -(a + T::lit(4.0 / 3.0) * b * t) / (den * den)
}

/// Potential and energy; the density is used with N-electron normalization.
pub fn wigner_correlation<T: Real>(density: &RadialDensity<T>, k: &WignerConstants) -> Correlation<T> {
    let rho = density.to_electrons();
    let grid = rho.grid();
    let values: Vec<T> = rho.values().iter().map(|&p| wigner_potential(p, k)).collect();
    let four_pi = T::lit(4.0) * T::PI();
    let integrand: Vec<T> = rho
        .values()
        .iter()
        .zip(grid.r())
        .map(|(&p, &r)| four_pi * r * r * wigner_energy_density(p, k))
        .collect();
    let energy = grid.integrate(&integrand);
    let potential = PotentialField::new(grid.clone(), values, PotentialKind::Correlation).expect("density grid");
    Correlation { potential, energy }
}
