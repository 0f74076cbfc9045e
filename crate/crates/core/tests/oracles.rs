//! Checks against closed forms and independent numerical references.

use std::f64::consts::PI;
use std::sync::Arc;

use confined_ks::potentials::{fermi_hole_exchange_field, hartree_potential, work_function_exchange};
use confined_ks::special::gauss_legendre;
use confined_ks::*;

/// Number of eigenvalues of the symmetric tridiagonal `(d, e)` below `x`.
fn sturm_count(d: &[f64], e: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = d[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for k in 1..d.len() {
        let q_prev = if q == 0.0 { 1e-300 } else { q };
        q = d[k] - x - e[k - 1] * e[k - 1] / q_prev;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Lowest eigenvalue of `-u''/2 - z u / r` on `(0, r_c)` by second-order
/// differences on `m` intervals.
fn finite_difference_ground(z: f64, r_c: f64, m: usize) -> f64 {
    let h = r_c / m as f64;
    let d: Vec<f64> = (1..m).map(|i| 1.0 / (h * h) - z / (i as f64 * h)).collect();
    let e = vec![-0.5 / (h * h); m - 2];
    let (mut lo, mut hi) = (-z * z * 4.0, 1.0 / (h * h) * 2.0 + 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if sturm_count(&d, &e, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Two-level Richardson extrapolation over halving steps.
fn extrapolated_ground(z: f64, r_c: f64) -> f64 {
    let e: Vec<f64> = [2000, 4000, 8000].iter().map(|&m| finite_difference_ground(z, r_c, m)).collect();
    let a = (4.0 * e[1] - e[0]) / 3.0;
    let b = (4.0 * e[2] - e[1]) / 3.0;
    (16.0 * b - a) / 15.0
}

#[test]
fn particle_in_sphere() {
    for &r_c in &[0.5, 1.0, 2.0, 7.0] {
        let grid = Arc::new(build_grid::<f64>(64, r_c, Mapping::default()).unwrap());
        let v = PotentialField::zero(grid, PotentialKind::Effective);
        let e = solve_channel(&v, 0, 1).unwrap()[0].energy();
        let exact = PI * PI / (2.0 * r_c * r_c);
        assert!((e - exact).abs() < 1e-10 * exact.max(1.0), "r_c = {r_c}: {e} vs {exact}");
    }
}

#[test]
fn confined_hydrogen_matches_finite_differences() {
    let oracle = extrapolated_ground(1.0, 1.0);
    assert!((oracle - 2.374).abs() < 5e-4, "oracle {oracle}");
    let grid = Arc::new(build_grid::<f64>(64, 1.0, Mapping::default()).unwrap());
    let e = solve_channel(&PotentialField::nuclear(grid, 1.0), 0, 1).unwrap()[0].energy();
    assert!((e - oracle).abs() < 1e-6, "{e} vs {oracle}");
}

/// `-∫ Π ln Π d³p` of the hydrogen 1s momentum density `8 / (π² (1 + p²)⁴)`.
fn hydrogen_momentum_entropy() -> f64 {
    let (x, w) = gauss_legendre::<f64>(400);
    // p = tan θ over θ in (0, π/2)
    x.iter()
        .zip(&w)
        .map(|(&x, &w)| {
            let theta = PI / 4.0 * (x + 1.0);
            let p = theta.tan();
            let jac = PI / 4.0 / theta.cos().powi(2);
            let rho = 8.0 / (PI * PI * (1.0 + p * p).powi(4));
            -w * jac * 4.0 * PI * p * p * rho * rho.ln()
        })
        .sum()
}

#[test]
fn free_hydrogen_limits() {
    let grid = Arc::new(build_grid::<f64>(96, 40.0, Mapping::default()).unwrap());
    let orbitals = solve_channel(&PotentialField::nuclear(grid.clone(), 1.0), 0, 1).unwrap();
    assert!((orbitals[0].energy() + 0.5).abs() < 1e-7);

    // a doubly occupied 1s has the unit-normalised density of a single one
    let ground = Configuration::ground();
    let density = build_density(&grid, &orbitals, &ground).unwrap().to_unit();
    let s_r = shannon_r(&density).unwrap();
    assert!((s_r - (3.0 + PI.ln())).abs() < 1e-6, "S_r = {s_r}");

    let oracle = hydrogen_momentum_entropy();
    assert!((oracle - 2.42186).abs() < 1e-5, "oracle {oracle}");
    let pi = momentum_density(&grid, &orbitals, &ground, 1.0, &MomentumOptions::default()).unwrap();
    let s_p = shannon_p(&pi).unwrap();
    assert!((s_p - oracle).abs() < 1e-5, "S_p = {s_p} vs {oracle}");
}

#[test]
fn closed_shell_exchange_is_half_hartree() {
    for &(z, r_c) in &[(2.0, 1.0), (3.0, 4.0), (4.0, 0.3)] {
        let res = scf_solve(z, r_c, &Configuration::ground(), Variant::XOnly, &ScfControls64::default()).unwrap();
        let vh = hartree_potential(&res.density).unwrap();
        let one_s: Vec<&Orbital64> = res.orbitals.iter().filter(|o| o.n() == 1).collect();
        let vx = work_function_exchange(&fermi_hole_exchange_field(&res.grid, &one_s).unwrap());
        let worst = vh.values().iter().zip(vx.values()).skip(1).map(|(h, x)| (x + h / 2.0).abs()).fold(0.0, f64::max);
        assert!(worst < 1e-8, "Z = {z}, r_c = {r_c}: {worst:e}");
    }
}

#[test]
fn fermi_hole_holds_one_electron() {
    for label in ["1s2s 3S", "1s2p 3P", "1s3d 3D"] {
        let state: Configuration = label.parse().unwrap();
        let res = scf_solve(2.0, 3.0, &state, Variant::XOnly, &ScfControls64::default()).unwrap();
        let occupied: Vec<&Orbital64> = res.orbitals.iter().collect();
        let field = fermi_hole_exchange_field(&res.grid, &occupied).unwrap();
        // wherever the reference electron sits, its hole integrates to -1
        let charge = field.hole_charge();
        let n = charge.len() - 1;
        for &j in &[n / 4, n / 2, 3 * n / 4] {
            assert!((charge[j] + 1.0).abs() < 1e-6, "{label}, node {j}: {}", charge[j]);
        }
    }
}

#[test]
fn parseval_per_orbital() {
    for (label, z, r_c) in [("1s2 1S", 2.0, 0.5), ("1s2s 3S", 3.0, 6.0), ("1s2p 3P", 4.0, 2.0), ("1s3d 3D", 2.0, 10.0)] {
        let state: Configuration = label.parse().unwrap();
        let res = scf_solve(z, r_c, &state, Variant::XOnly, &ScfControls64::default()).unwrap();
        let (_, pi) = entropies(&res, &MomentumOptions::default(), AngularModel::default()).unwrap();
        for &n in pi.orbital_norms() {
            assert!((n - 1.0).abs() < 1e-6, "{label} r_c = {r_c}: {n}");
        }
        assert!(pi.parseval_defect().abs() < 1e-6);
    }
}

#[test]
fn grid_refinement_is_stable() {
    for (label, z, r_c) in [("1s2 1S", 2.0, 2.0), ("1s2s 3S", 3.0, 7.0), ("1s2p 3P", 2.0, 5.0), ("1s3d 3D", 4.0, 0.5)] {
        let state: Configuration = label.parse().unwrap();
        let order = confined_ks::grid::default_order(r_c);
        let at = |n: usize| {
            let controls = ScfControls64 { order: Some(n), ..Default::default() };
            let res = scf_solve(z, r_c, &state, Variant::Lyp, &controls).unwrap();
            entropies(&res, &MomentumOptions::default(), AngularModel::default()).unwrap().0
        };
        let (a, b) = (at(order), at(order + 16));
        for (x, y) in [(a.s_r, b.s_r), (a.s_p, b.s_p), (a.s_t, b.s_t)] {
            assert!((x - y).abs() <= 5e-4, "{label} r_c = {r_c}: {x} vs {y}");
        }
    }
}

#[test]
fn electron_normalised_entropy_matches_direct_integration() {
    for (label, z, r_c) in [("1s2 1S", 2.0, 1.0), ("1s2s 3S", 3.0, 5.0), ("1s3d 3D", 4.0, 0.4)] {
        let state: Configuration = label.parse().unwrap();
        let res = scf_solve(z, r_c, &state, Variant::Wigner, &ScfControls64::default()).unwrap();
        let converted = normalization_convert(shannon_r(&res.density.to_unit()).unwrap(), 2.0).unwrap();
        let f: Vec<f64> = res
            .grid
            .r()
            .iter()
            .zip(res.density.values())
            .map(|(&r, &rho)| if rho > 0.0 { -4.0 * PI * r * r * rho * rho.ln() } else { 0.0 })
            .collect();
        let direct = res.grid.integrate(&f);
        assert!((converted - direct).abs() <= 1e-8, "{label}: {converted} vs {direct}");
    }
}

#[test]
fn momentum_quadrature_is_converged() {
    for (label, z, r_c) in [("1s2 1S", 2.0, 0.3), ("1s2p 3P", 3.0, 4.0), ("1s3d 3D", 2.0, 12.0)] {
        let state: Configuration = label.parse().unwrap();
        let res = scf_solve(z, r_c, &state, Variant::XOnly, &ScfControls64::default()).unwrap();
        let coarse = MomentumOptions::default();
        let fine = MomentumOptions { points_per_panel: 2 * coarse.points_per_panel, tolerance: coarse.tolerance / 10.0, ..coarse };
        let s_p = |o: &MomentumOptions<f64>| entropies(&res, o, AngularModel::default()).unwrap().0.s_p;
        let (a, b) = (s_p(&coarse), s_p(&fine));
        assert!((a - b).abs() <= 5e-4, "{label} r_c = {r_c}: {a} vs {b}");
    }
}
