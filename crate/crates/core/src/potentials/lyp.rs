//! Lee-Yang-Parr correlation.
//!
//! The functional is defined by its Laplacian-containing form
//!
//! ```text
//! E_c = -a ∫ 1/(1 + d ρ^{-1/3}) { ρ + b ρ^{-2/3} [C_F ρ^{5/3} - 2 t_W + t_W/9 + ∇²ρ/18] e^{-c ρ^{-1/3}} },
//! t_W = |∇ρ|²/(8ρ) - ∇²ρ/8,
//! ```
//!
//! which after integrating the Laplacian terms by parts depends on `ρ` and
//! `σ = |∇ρ|²` only. The potential is `∂f/∂ρ - ∇·(2 ∂f/∂σ ∇ρ)` of that form.

use crate::configuration::SpinCoupling;
use crate::density::RadialDensity;
use crate::error::Result;
use crate::Real;

use super::{Correlation, LypConstants, PotentialField, PotentialKind, DENSITY_FLOOR};

/// How the functional treats the spin of a triplet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LypSpin {
    /// Total density split equally between the spin channels.
    #[default]
    Compensated,
    /// Actual spin densities; vanishes for a fully polarized pair.
    Polarized,
}

fn c_f<T: Real>() -> T {
    T::lit(0.3) * (T::lit(3.0) * T::PI() * T::PI()).powf(T::lit(2.0 / 3.0))
}

struct Parts<T> {
    t: T,
    den: T,
    g: T,
    delta: T,
}

fn parts<T: Real>(rho: T, k: &LypConstants) -> Parts<T> {
    let t = rho.cbrt().recip();
    let den = T::one() + T::lit(k.d) * t;
    let g = (-T::lit(k.c) * t).exp() / den;
    let delta = T::lit(k.c) * t + T::lit(k.d) * t / den;
    Parts { t, den, g, delta }
}

/// Energy per volume of the spin-compensated gradient form at `(ρ, σ)`.
pub fn lyp_energy_density<T: Real>(rho: T, sigma: T, k: &LypConstants) -> T {
    if rho < T::lit(DENSITY_FLOOR) {
        return T::zero();
    }
    let (a, b) = (T::lit(k.a), T::lit(k.b));
    let p = parts(rho, k);
    let h = T::lit(1.0 / 24.0) + T::lit(7.0 / 72.0) * p.delta;
    -a * rho / p.den - a * b * c_f::<T>() * rho * p.g + a * b * p.g * rho.powf(T::lit(-5.0 / 3.0)) * sigma * h
}

/// Energy per volume of the original Laplacian form.
pub fn lyp_laplacian_energy_density<T: Real>(rho: T, sigma: T, laplacian: T, k: &LypConstants) -> T {
    if rho < T::lit(DENSITY_FLOOR) {
        return T::zero();
    }
    let (a, b, c) = (T::lit(k.a), T::lit(k.b), T::lit(k.c));
    let p = parts(rho, k);
    let t_w = sigma / (T::lit(8.0) * rho) - laplacian / T::lit(8.0);
    let bracket = c_f::<T>() * rho.powf(T::lit(5.0 / 3.0)) - T::lit(2.0) * t_w + t_w / T::lit(9.0) + laplacian / T::lit(18.0);
    -a / p.den * (rho + b * rho.powf(T::lit(-2.0 / 3.0)) * bracket * (-c * p.t).exp())
}

/// `(∂f/∂ρ, ∂f/∂σ, ∂²f/∂σ∂ρ)` of [`lyp_energy_density`]; `f` is linear in `σ`.
fn partials<T: Real>(rho: T, sigma: T, k: &LypConstants) -> (T, T, T) {
    if rho < T::lit(DENSITY_FLOOR) {
        return (T::zero(), T::zero(), T::zero());
    }
    let (a, b, c, d) = (T::lit(k.a), T::lit(k.b), T::lit(k.c), T::lit(k.d));
    let three = T::lit(3.0);
    let p = parts(rho, k);
    let h = T::lit(1.0 / 24.0) + T::lit(7.0 / 72.0) * p.delta;
    let f1 = -a / p.den - a * d * p.t / (three * p.den * p.den);
    let f2 = -a * b * c_f::<T>() * p.g * (T::one() + p.delta / three);
    let d_delta = -(p.t / (three * rho)) * (c + d / (p.den * p.den));
    let rho_m53 = rho.powf(T::lit(-5.0 / 3.0));
    let f_sigma_rho = a * b * p.g * rho_m53 * ((p.delta / three - T::lit(5.0 / 3.0)) * h / rho + T::lit(7.0 / 72.0) * d_delta);
    let f_sigma = a * b * p.g * rho_m53 * h;
    (f1 + f2 + sigma * f_sigma_rho, f_sigma, f_sigma_rho)
}

/// Potential and energy for the total density of a configuration with the
/// given spin coupling.
pub fn lyp_correlation<T: Real>(
    density: &RadialDensity<T>,
    coupling: SpinCoupling,
    spin: LypSpin,
    k: &LypConstants,
) -> Result<Correlation<T>> {
    let rho = density.to_electrons();
    let grid = rho.grid().clone();
    let n = grid.order();
    if spin == LypSpin::Polarized && coupling == SpinCoupling::Triplet {
        // Every term carries ρ_α ρ_β or cancels when one channel is empty.
        let potential = PotentialField::zero(grid, PotentialKind::Correlation);
        return Ok(Correlation { potential, energy: T::zero() });
    }
    let r = grid.r();
    let values = rho.values();
    let grad = rho.gradient();
    let second = grid.derivative(&grad);
    let mut v = vec![T::zero(); n + 1];
    let mut energy_density = vec![T::zero(); n + 1];
    let four_pi = T::lit(4.0) * T::PI();
    let two = T::lit(2.0);
    for j in 0..=n {
        let sigma = grad[j] * grad[j];
        energy_density[j] = four_pi * r[j] * r[j] * lyp_energy_density(values[j], sigma, k);
        if j == 0 || j == n {
            continue;
        }
        // ∇·(2 f_σ ∇ρ) expanded pointwise, since f_σ depends on ρ alone
        let (f_rho, f_sigma, f_sigma_rho) = partials(values[j], sigma, k);
        let laplacian = second[j] + two * grad[j] / r[j];
        v[j] = f_rho - two * f_sigma_rho * sigma - two * f_sigma * laplacian;
    }
    // The Laplacian is singular at the nuclear cusp; endpoints copy their neighbours.
    v[0] = v[1];
    v[n] = v[n - 1];
    let energy = grid.integrate(&energy_density);
    let potential = PotentialField::new(grid, v, PotentialKind::Correlation)?;
    Ok(Correlation { potential, energy })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::CorrelationConstants;

    fn k() -> LypConstants {
        CorrelationConstants::builtin().lyp
    }

    #[test]
    fn uniform_limit() {
        for &rho in &[0.01f64, 0.5, 3.0] {
            let t = rho.powf(-1.0 / 3.0);
            let den = 1.0 + 0.349 * t;
            let cf = 0.3 * (3.0 * std::f64::consts::PI.powi(2)).powf(2.0 / 3.0);
            let exact = -0.04918 * rho / den * (1.0 + 0.132 * cf * (-0.2533 * t).exp());
            assert!((lyp_energy_density(rho, 0.0, &k()) - exact).abs() < 1e-15);
            assert!((lyp_laplacian_energy_density(rho, 0.0, 0.0, &k()) - exact).abs() < 1e-15);
        }
    }

    #[test]
    fn analytic_partials_match_differences() {
        for &(rho, sigma) in &[(0.05f64, 0.01f64), (1.0, 0.7), (20.0, 300.0)] {
            let (fr, fs, fsr) = partials(rho, sigma, &k());
            let h = rho * 1e-6;
            let fd_r = (lyp_energy_density(rho + h, sigma, &k()) - lyp_energy_density(rho - h, sigma, &k())) / (2.0 * h);
            let hs = sigma * 1e-6;
            let fd_s = (lyp_energy_density(rho, sigma + hs, &k()) - lyp_energy_density(rho, sigma - hs, &k())) / (2.0 * hs);
            assert!(((fr - fd_r) / fd_r).abs() < 1e-7, "rho {rho}");
            assert!(((fs - fd_s) / fd_s).abs() < 1e-7, "sigma {sigma}");
            let fd_sr = (partials(rho + h, sigma, &k()).1 - partials(rho - h, sigma, &k()).1) / (2.0 * h);
            assert!(((fsr - fd_sr) / fd_sr).abs() < 1e-6, "cross {rho}");
        }
    }

    #[test]
    fn potential_is_the_functional_derivative() {
        use std::sync::Arc;

        use crate::density::Normalization;
        use crate::grid::{build_grid, Mapping};

        let r_c = 3.0;
        let grid = Arc::new(build_grid::<f64>(64, r_c, Mapping::default()).unwrap());
        let pi = std::f64::consts::PI;
        // two electrons in a hydrogen-like 1s shell cut off smoothly at the wall
        let sinc = |x: f64| if x > 0.0 { x.sin() / x } else { 1.0 };
        let mut rho: Vec<f64> = grid.r().iter().map(|&r| (-3.4 * r).exp() * sinc(pi * r / r_c).powi(2)).collect();
        let shell: Vec<f64> = rho.iter().zip(grid.r()).map(|(&p, &r)| 4.0 * pi * r * r * p).collect();
        let scale = 2.0 / grid.integrate(&shell);
        rho.iter_mut().for_each(|p| *p *= scale);

        let energy = |values: Vec<f64>| {
            let d = RadialDensity::new(grid.clone(), values, Normalization::Electrons, 2.0).unwrap();
            lyp_correlation(&d, SpinCoupling::Singlet, LypSpin::Compensated, &k()).unwrap()
        };
        let base = energy(rho.clone());
        for bump in [|r: f64| (-r).exp(), |r: f64| (r - 1.0).powi(2)] {
            let delta: Vec<f64> = rho.iter().zip(grid.r()).map(|(&p, &r)| p * bump(r)).collect();
            let eps = 1e-4;
            let shifted = |s: f64| energy(rho.iter().zip(&delta).map(|(&p, &d)| p + s * d).collect()).energy;
            let fd = (shifted(eps) - shifted(-eps)) / (2.0 * eps);
            let first: Vec<f64> =
                base.potential.values().iter().zip(&delta).zip(grid.r()).map(|((&v, &d), &r)| 4.0 * pi * r * r * v * d).collect();
            let analytic = grid.integrate(&first);
            assert!(((analytic - fd) / fd).abs() < 1e-6, "{analytic} vs {fd}");
        }
    }
}
