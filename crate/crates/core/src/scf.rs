//! Self-consistent solution of the confined radial Kohn-Sham equations.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::configuration::{Configuration, Shell};
use crate::density::{build_density, occupied, radial_occupation_sum, RadialDensity};
use crate::error::{Error, Result};
use crate::grid::{build_grid, default_order, ChannelOperator, Mapping, RadialGrid};
use crate::linalg::{symmetric_eigen, Matrix};
use crate::potentials::{
    exchange_energy, fermi_hole_exchange_field, hartree_energy, hartree_potential, lyp_correlation, wigner_correlation,
    work_function_exchange, Correlation, CorrelationConstants, LypSpin, PotentialField,
};
use crate::Real;

/// Radial orbital `u(r) = r R(r)` on every node (zero at both ends).
#[derive(Debug, Clone, PartialEq)]
pub struct Orbital<T> {
    n: usize,
    l: usize,
    energy: T,
    values: Vec<T>,
}

impl<T: Real> Orbital<T> {
    pub fn new(n: usize, l: usize, energy: T, values: Vec<T>) -> Self {
        Self { n, l, energy, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn energy(&self) -> T {
        self.energy
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn label(&self) -> String {
        Shell { n: self.n, l: self.l, occupation: 1 }.label()
    }

    /// `∫ u² dr`
    pub fn norm(&self, grid: &RadialGrid<T>) -> T {
        let sq: Vec<T> = self.values.iter().map(|&u| u * u).collect();
        grid.integrate(&sq)
    }

    /// Sign changes on the interior, ignoring numerically zero values.
    pub fn node_count(&self) -> usize {
        let peak = self.values.iter().fold(T::zero(), |m, &u| m.max(u.abs()));
        let floor = peak * T::lit(1e-10);
        let mut last = T::zero();
        let mut count = 0;
        for &u in &self.values {
            if u.abs() <= floor {
                continue;
            }
            if last != T::zero() && (u > T::zero()) != (last > T::zero()) {
                count += 1;
            }
            last = u;
        }
        count
    }
}

/// Lowest `count` eigenpairs of `op + v` with `v` given on the interior nodes.
pub fn solve_channel_with<T: Real>(op: &ChannelOperator<T>, v_interior: &[T], count: usize) -> Result<Vec<Orbital<T>>> {
    let m = op.matrix().dim();
    let l = op.l();
    if count > m {
        return Err(Error::TooFewEigenpairs { l, requested: count, available: m });
    }
    let h = op.with_potential(v_interior);
    let eig = symmetric_eigen(&h).map_err(|reason| Error::EigenSolver { l, order: m + 1, reason })?;
    let sw = op.sqrt_weights();
    Ok((0..count)
        .map(|k| {
            let mut values = vec![T::zero(); m + 2];
            for a in 0..m {
                values[a + 1] = eig.vectors.get(a, k) / sw[a];
            }
            let peak = values.iter().fold(T::zero(), |acc, &u| acc.max(u.abs()));
            let first = values.iter().copied().find(|u| u.abs() > peak * T::lit(1e-3)).unwrap_or(T::one());
            if first < T::zero() {
                values.iter_mut().for_each(|u| *u = -*u);
            }
            Orbital::new(l + 1 + k, l, eig.values[k], values)
        })
        .collect())
}

/// Lowest `count` orbitals of angular momentum `l` in the effective potential.
pub fn solve_channel<T: Real>(v_eff: &PotentialField<T>, l: i64, count: usize) -> Result<Vec<Orbital<T>>> {
    let op = v_eff.grid().channel_operator(l)?;
    solve_channel_with(&op, v_eff.interior(), count)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    XOnly,
    Wigner,
    Lyp,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::XOnly, Variant::Wigner, Variant::Lyp];

    pub fn label(self) -> &'static str {
        match self {
            Variant::XOnly => "X-only",
            Variant::Wigner => "XC-Wigner",
            Variant::Lyp => "XC-LYP",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
        match key.as_str() {
            "xonly" | "x" => Ok(Variant::XOnly),
            "xcwigner" | "wigner" => Ok(Variant::Wigner),
            "xclyp" | "lyp" => Ok(Variant::Lyp),
            _ => Err(Error::InvalidArgument(format!("unknown functional variant `{s}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScfControls<T> {
    pub max_iter: usize,
    pub mixing: T,
    pub potential_tolerance: T,
    pub energy_tolerance: T,
    /// Collocation order; `None` picks [`default_order`].
    pub order: Option<usize>,
    pub mapping: Mapping<T>,
    pub lyp_spin: LypSpin,
    pub constants: CorrelationConstants,
    /// History length of the Anderson accelerator that takes over once
    /// halving the linear mixing has stalled; 0 keeps pure linear mixing.
    pub anderson_depth: usize,
}

impl<T: Real> Default for ScfControls<T> {
    fn default() -> Self {
        Self {
            max_iter: 500,
            mixing: T::lit(0.3),
            potential_tolerance: T::lit(1e-8),
            energy_tolerance: T::lit(1e-9),
            order: None,
            mapping: Mapping::default(),
            lyp_spin: LypSpin::default(),
            constants: CorrelationConstants::default(),
            anderson_depth: 5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Energies<T> {
    pub kinetic: T,
    pub nuclear: T,
    pub hartree: T,
    pub exchange: T,
    pub correlation: T,
    pub total: T,
}

#[derive(Debug, Clone)]
pub struct ScfResult<T> {
    pub z: T,
    pub configuration: Configuration,
    pub variant: Variant,
    pub grid: Arc<RadialGrid<T>>,
    /// Occupied orbitals in configuration order.
    pub orbitals: Vec<Orbital<T>>,
    /// N-electron density.
    pub density: RadialDensity<T>,
    pub energies: Energies<T>,
    pub iterations: usize,
    pub residual: T,
    /// Hartree-exchange-correlation potential the orbitals were solved in.
    pub v_hxc: Vec<T>,
}

impl<T: Real> ScfResult<T> {
    pub fn r_c(&self) -> T {
        self.grid.r_c()
    }

    pub fn unit_density(&self) -> RadialDensity<T> {
        self.density.to_unit()
    }
}

struct Step<T> {
    v_out: Vec<T>,
    hartree: T,
    exchange: T,
    correlation: T,
}

fn solve_orbitals<T: Real>(
    ops: &[ChannelOperator<T>],
    nuclear: &[T],
    v_hxc: &[T],
    configuration: &Configuration,
) -> Result<Vec<Orbital<T>>> {
    let n = v_hxc.len() - 1;
    let v: Vec<T> = (1..n).map(|j| nuclear[j] + v_hxc[j]).collect();
    let mut out = Vec::with_capacity(configuration.shells().len());
    let mut cache: Vec<Option<Vec<Orbital<T>>>> = vec![None; ops.len()];
    for shell in configuration.shells() {
        if cache[shell.l].is_none() {
            let need = configuration.shells().iter().filter(|s| s.l == shell.l).map(|s| s.radial_index() + 1).max().unwrap_or(1);
            cache[shell.l] = Some(solve_channel_with(&ops[shell.l], &v, need)?);
        }
        let orb = cache[shell.l].as_ref().expect("filled above")[shell.radial_index()].clone();
        out.push(orb);
    }
    Ok(out)
}

fn channel_orbitals<'a, T: Real>(orbitals: &'a [Orbital<T>], channel: &[Shell]) -> Vec<&'a Orbital<T>> {
    channel
        .iter()
        .filter_map(|s| orbitals.iter().find(|o| o.n() == s.n && o.l() == s.l))
        .collect()
}

fn potentials_from<T: Real>(
    grid: &Arc<RadialGrid<T>>,
    orbitals: &[Orbital<T>],
    density: &RadialDensity<T>,
    configuration: &Configuration,
    variant: Variant,
    controls: &ScfControls<T>,
) -> Result<Step<T>> {
    let v_h = hartree_potential(density)?;
    let e_h = hartree_energy(density, &v_h);
    let [up, down] = configuration.spin_channels();
    let up_orbs = channel_orbitals(orbitals, &up);
    let down_orbs = channel_orbitals(orbitals, &down);
    let field = fermi_hole_exchange_field(grid, &up_orbs)?;
    let v_x = work_function_exchange(&field);
    let e_up = exchange_energy(grid, &up_orbs)?;
    let e_x = if up == down { e_up + e_up } else { e_up + exchange_energy(grid, &down_orbs)? };
    let correlation: Option<Correlation<T>> = match variant {
        Variant::XOnly => None,
        Variant::Wigner => Some(wigner_correlation(density, &controls.constants.wigner)),
        Variant::Lyp => Some(lyp_correlation(density, configuration.coupling(), controls.lyp_spin, &controls.constants.lyp)?),
    };
    let (v_c, e_c) = match &correlation {
        Some(c) => (Some(c.potential.values()), c.energy),
        None => (None, T::zero()),
    };
    let v_out = (0..=grid.order())
        .map(|j| v_h.values()[j] + v_x.values()[j] + v_c.map_or(T::zero(), |v| v[j]))
        .collect();
    Ok(Step { v_out, hartree: e_h, exchange: e_x, correlation: e_c })
}

/// Solves for the self-consistent state of `configuration` at nuclear charge `z`.
pub fn scf_solve<T: Real>(
    z: T,
    r_c: T,
    configuration: &Configuration,
    variant: Variant,
    controls: &ScfControls<T>,
) -> Result<ScfResult<T>> {
    scf_solve_from(z, r_c, configuration, variant, controls, None)
}

/// As [`scf_solve`], optionally starting from a previous `v_hxc` on a grid of the same order.
pub fn scf_solve_from<T: Real>(
    z: T,
    r_c: T,
    configuration: &Configuration,
    variant: Variant,
    controls: &ScfControls<T>,
    initial: Option<&[T]>,
) -> Result<ScfResult<T>> {
    if !(z > T::zero()) {
        return Err(Error::InvalidArgument(format!("nuclear charge must be positive, got {z}")));
    }
    let order = controls.order.unwrap_or_else(|| default_order(r_c.as_f64()));
    let grid = Arc::new(build_grid(order, r_c, controls.mapping)?);
    let n = grid.order();
    let ops: Vec<ChannelOperator<T>> =
        (0..=configuration.max_l()).map(|l| grid.channel_operator(l as i64)).collect::<Result<_>>()?;
    let nuclear = PotentialField::nuclear(grid.clone(), z).into_values();

    let mut v_in = match initial {
        Some(v) if v.len() == n + 1 => v.to_vec(),
        _ => vec![T::zero(); n + 1],
    };
    let mut mixing = controls.mixing;
    let mut history: Vec<T> = Vec::new();
    let mut previous_energy: Option<T> = None;
    let mut rising = 0;
    let mut anderson: Option<Anderson<T>> = None;

    for iteration in 1..=controls.max_iter {
        let orbitals = solve_orbitals(&ops, &nuclear, &v_in, configuration)?;
        let density = build_density(&grid, &orbitals, configuration)?;
        let step = potentials_from(&grid, &orbitals, &density, configuration, variant, controls)?;

        let occ = occupied(&orbitals, configuration)?;
        let band: T = occ.iter().map(|(o, w)| *w * o.energy()).sum();
        let radial = radial_occupation_sum(&occ);
        let mut potential_energy = T::zero();
        let mut nuclear_energy = T::zero();
        for j in 1..n {
            potential_energy += grid.weights()[j] * radial[j] * v_in[j];
            nuclear_energy += grid.weights()[j] * radial[j] * nuclear[j];
        }
        let kinetic = band - potential_energy - nuclear_energy;
        let total = kinetic + nuclear_energy + step.hartree + step.exchange + step.correlation;

        let residual = (1..n).fold(T::zero(), |m, j| m.max((step.v_out[j] - v_in[j]).abs()));
        let energy_change = previous_energy.map_or(T::infinity(), |e| (total - e).abs());
        if let Some(&last) = history.last() {
            rising = if residual > last { rising + 1 } else { 0 };
            if rising >= 2 && anderson.is_none() {
                rising = 0;
                if controls.anderson_depth > 0 && mixing * T::lit(8.0) <= controls.mixing {
                    // a mode with gain above one cannot be damped by linear mixing
                    anderson = Some(Anderson::new(controls.anderson_depth));
                    mixing = controls.mixing;
                    log::debug!("SCF switching to Anderson mixing at iteration {iteration}");
                } else if mixing > T::lit(1e-3) {
                    mixing /= T::lit(2.0);
                    log::debug!("SCF residual rising at iteration {iteration}; mixing reduced to {mixing}");
                }
            }
        }
        history.push(residual);
        previous_energy = Some(total);

        if residual <= controls.potential_tolerance && energy_change <= controls.energy_tolerance {
            let energies = Energies {
                kinetic,
                nuclear: nuclear_energy,
                hartree: step.hartree,
                exchange: step.exchange,
                correlation: step.correlation,
                total,
            };
            return Ok(ScfResult {
                z,
                configuration: configuration.clone(),
                variant,
                grid,
                orbitals,
                density,
                energies,
                iterations: iteration,
                residual,
                v_hxc: v_in,
            });
        }
        match anderson.as_mut() {
            Some(acc) => v_in = acc.next(&v_in, &step.v_out, mixing),
            None => {
                for (v, &out) in v_in.iter_mut().zip(&step.v_out) {
                    *v += mixing * (out - *v);
                }
            }
        }
    }
    let last = history.last().copied().unwrap_or(T::infinity());
    let oscillating = history.len() > 4 && history.windows(2).rev().take(4).any(|w| w[1] > w[0]);
    let hint = if oscillating { "; residual oscillates, try a smaller mixing".to_string() } else { String::new() };
    Err(Error::NoConvergence {
        iterations: controls.max_iter,
        last: last.as_f64(),
        mixing: mixing.as_f64(),
        history: history.iter().map(|h| h.as_f64()).collect(),
        hint,
    })
}

/// Anderson (Pulay) extrapolation over the last few input/residual pairs.
struct Anderson<T> {
    depth: usize,
    previous: Option<(Vec<T>, Vec<T>)>,
    dv: Vec<Vec<T>>,
    df: Vec<Vec<T>>,
}

impl<T: Real> Anderson<T> {
    fn new(depth: usize) -> Self {
        Self { depth, previous: None, dv: Vec::new(), df: Vec::new() }
    }

    fn next(&mut self, v: &[T], out: &[T], mixing: T) -> Vec<T> {
        let f: Vec<T> = out.iter().zip(v).map(|(&o, &x)| o - x).collect();
        if let Some((pv, pf)) = self.previous.take() {
            self.dv.push(v.iter().zip(&pv).map(|(&a, &b)| a - b).collect());
            self.df.push(f.iter().zip(&pf).map(|(&a, &b)| a - b).collect());
            if self.dv.len() > self.depth {
                self.dv.remove(0);
                self.df.remove(0);
            }
        }
        self.previous = Some((v.to_vec(), f.clone()));
        let gamma = self.coefficients(&f);
        let mut next: Vec<T> = v.iter().zip(&f).map(|(&x, &r)| x + mixing * r).collect();
        for ((g, dv), df) in gamma.iter().zip(&self.dv).zip(&self.df) {
            for ((x, &a), &b) in next.iter_mut().zip(dv).zip(df) {
                *x -= *g * (a + mixing * b);
            }
        }
        next
    }

    /// Least-squares `min |f - ΔF γ|` through a truncated eigen-decomposition
    /// of the Gram matrix.
    fn coefficients(&self, f: &[T]) -> Vec<T> {
        let m = self.df.len();
        if m == 0 {
            return Vec::new();
        }
        let dot = |a: &[T], b: &[T]| a.iter().zip(b).map(|(&x, &y)| x * y).sum::<T>();
        let gram = Matrix::from_fn(m, |i, j| dot(&self.df[i], &self.df[j]));
        let rhs: Vec<T> = self.df.iter().map(|d| dot(d, f)).collect();
        let Ok(eig) = symmetric_eigen(&gram) else {
            return vec![T::zero(); m];
        };
        let top = eig.values.iter().fold(T::zero(), |a, &b| a.max(b.abs()));
        let mut gamma = vec![T::zero(); m];
        for (k, &lambda) in eig.values.iter().enumerate() {
            if lambda <= top * T::lit(1e-10) {
                continue;
            }
            let vec = eig.vector(k);
            let c = dot(&vec, &rhs) / lambda;
            for (g, &x) in gamma.iter_mut().zip(&vec) {
                *g += c * x;
            }
        }
        gamma
    }
}

/// Solves every radius in order, warm-starting each point from its predecessor.
///
/// A point whose warm start fails is retried cold. Failures are returned in
/// place and the next point then starts cold as well.
pub fn scan<T: Real>(
    z: T,
    configuration: &Configuration,
    variant: Variant,
    radii: &[T],
    controls: &ScfControls<T>,
) -> Vec<Result<ScfResult<T>>> {
    let mut out = Vec::with_capacity(radii.len());
    let mut seed: Option<Vec<T>> = None;
    for &r_c in radii {
        let mut res = scf_solve_from(z, r_c, configuration, variant, controls, seed.as_deref());
        if res.is_err() && seed.is_some() {
            res = scf_solve_from(z, r_c, configuration, variant, controls, None);
        }
        seed = res.as_ref().ok().map(|r| r.v_hxc.clone());
        out.push(res);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variant_names_round_trip() {
        for v in Variant::ALL {
            assert_eq!(v.label().parse::<Variant>().unwrap(), v);
        }
        assert!("B3LYP".parse::<Variant>().is_err());
    }

    #[test]
    fn free_hydrogen_levels() {
        let grid = Arc::new(build_grid::<f64>(96, 40.0, Mapping::default()).unwrap());
        let v = PotentialField::nuclear(grid.clone(), 1.0);
        let orbs = solve_channel(&v, 0, 2).unwrap();
        assert!((orbs[0].energy() + 0.5).abs() < 1e-7, "{}", orbs[0].energy());
        assert!((orbs[1].energy() + 0.125).abs() < 1e-7, "{}", orbs[1].energy());
        assert!((orbs[0].norm(&grid) - 1.0).abs() < 1e-10);
        assert_eq!(orbs[1].node_count(), 1);
        assert!(orbs[0].values()[5] > 0.0);
    }

    #[test]
    fn free_particle_p_wave() {
        let grid = Arc::new(build_grid::<f64>(64, 1.0, Mapping::default()).unwrap());
        let v = PotentialField::zero(grid, crate::potentials::PotentialKind::Effective);
        let orbs = solve_channel(&v, 1, 1).unwrap();
        let zero = 4.493_409_457_909_064f64;
        assert!((orbs[0].energy() - zero * zero / 2.0).abs() < 1e-9);
    }

    #[test]
    fn ground_state_converges() {
        let res = scf_solve(2.0f64, 4.0, &Configuration::ground(), Variant::XOnly, &ScfControls::default()).unwrap();
        assert!(res.residual <= 1e-8);
        // X-only helium energy is close to Hartree-Fock (-2.8617) at this radius
        assert!(res.energies.total < -2.85 && res.energies.total > -2.87, "{}", res.energies.total);
        assert!((res.energies.exchange + res.energies.hartree / 2.0).abs() < 1e-10);
    }
}
