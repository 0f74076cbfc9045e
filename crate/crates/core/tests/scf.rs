use confined_ks::*;

fn entropy_of(res: &ScfResult64) -> EntropyResult64 {
    entropies(res, &MomentumOptions::default(), AngularModel::default()).unwrap().0
}

#[test]
fn warm_and_cold_scans_agree() {
    let state: Configuration = "1s2s 3S".parse().unwrap();
    let radii = [2.0, 2.5, 3.0];
    let controls = ScfControls64::default();
    let warm = scan(3.0, &state, Variant::Lyp, &radii, &controls);
    for (res, &r_c) in warm.iter().zip(&radii) {
        let warm = entropy_of(res.as_ref().unwrap());
        let cold = entropy_of(&scf_solve(3.0, r_c, &state, Variant::Lyp, &controls).unwrap());
        assert!((warm.s_r - cold.s_r).abs() <= 1e-6 && (warm.s_p - cold.s_p).abs() <= 1e-6, "r_c = {r_c}");
    }
    // later points of a warm scan should not need more work than a cold start
    assert!(warm[2].as_ref().unwrap().iterations <= scf_solve(3.0, 3.0, &state, Variant::Lyp, &controls).unwrap().iterations);
}

#[test]
fn converged_result_does_not_depend_on_mixing() {
    let state = Configuration::ground();
    let at = |mixing: f64| {
        let controls = ScfControls64 { mixing, ..Default::default() };
        entropy_of(&scf_solve(2.0, 1.5, &state, Variant::Wigner, &controls).unwrap())
    };
    let (a, b) = (at(0.3), at(0.15));
    assert!((a.s_r - b.s_r).abs() <= 1e-6 && (a.s_p - b.s_p).abs() <= 1e-6);
}

#[test]
fn correlation_variants_are_consistent() {
    let state = Configuration::ground();
    let controls = ScfControls64::default();
    let solve = |v: Variant, r_c: f64| scf_solve(2.0, r_c, &state, v, &controls).unwrap();

    // both functionals give a small negative correlation energy near the free atom
    for v in [Variant::Wigner, Variant::Lyp] {
        let ec = solve(v, 6.0).energies.correlation;
        assert!(ec < -0.03 && ec > -0.06, "{v}: {ec}");
    }
    assert_eq!(solve(Variant::XOnly, 6.0).energies.correlation, 0.0);

    // correlation lowers the total energy
    let x = solve(Variant::XOnly, 3.0).energies.total;
    for v in [Variant::Wigner, Variant::Lyp] {
        assert!(solve(v, 3.0).energies.total < x);
    }

    // under strong confinement kinetic energy dominates and the variants coincide
    let s: Vec<EntropyResult64> = Variant::ALL.iter().map(|&v| entropy_of(&solve(v, 0.1))).collect();
    for pair in s.windows(2) {
        assert!((pair[0].s_r - pair[1].s_r).abs() <= 1e-3 && (pair[0].s_p - pair[1].s_p).abs() <= 1e-3);
    }
}

#[test]
fn orbitals_have_the_requested_nodes() {
    for label in ["1s2s 3S", "1s3s 3S", "1s4s 3S", "1s3p 3P", "1s3d 3D"] {
        let state: Configuration = label.parse().unwrap();
        let res = scf_solve(2.0, 4.0, &state, Variant::XOnly, &ScfControls64::default()).unwrap();
        for o in &res.orbitals {
            assert_eq!(o.node_count(), o.n() - o.l() - 1, "{label} {}", o.label());
            assert!((o.norm(&res.grid) - 1.0).abs() < 1e-10);
        }
    }
}

#[test]
fn bad_arguments_are_rejected() {
    let state = Configuration::ground();
    let controls = ScfControls64::default();
    assert!(scf_solve(2.0, -1.0, &state, Variant::XOnly, &controls).is_err());
    assert!(scf_solve(0.0, 1.0, &state, Variant::XOnly, &controls).is_err());
    assert!("1s2s 1S".parse::<Configuration>().is_err());
}

#[test]
fn stalled_scf_reports_history() {
    let controls = ScfControls64 { max_iter: 3, ..Default::default() };
    match scf_solve(2.0, 2.0, &Configuration::ground(), Variant::XOnly, &controls) {
        Err(Error::NoConvergence { iterations, history, .. }) => {
            assert_eq!(iterations, 3);
            assert_eq!(history.len(), 3);
        }
        other => panic!("expected non-convergence, got {other:?}"),
    }
}
