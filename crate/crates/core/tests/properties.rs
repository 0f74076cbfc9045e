use std::f64::consts::PI;
use std::sync::Arc;

use confined_ks::*;
use proptest::prelude::*;

proptest! {
    #[test]
    fn normalization_round_trip(s in -10.0f64..20.0, n in 1.0f64..4.0) {
        let s_n = normalization_convert(s, n).unwrap();
        let back = normalization_invert(s_n, n).unwrap();
        prop_assert!((back - s).abs() <= 1e-12 * s.abs().max(1.0));
    }

    #[test]
    fn crossing_is_symmetric_in_its_curves(a0 in -2.0f64..2.0, slope in 0.1f64..3.0, offset in 0.2f64..0.8) {
        let radii: Vec<f64> = (0..11).map(|k| k as f64 * 0.1).collect();
        // a - b changes sign once, at `offset`
        let a: Vec<f64> = radii.iter().map(|r| a0 + slope * (r - offset)).collect();
        let b: Vec<f64> = radii.iter().map(|_| a0).collect();
        let ab = crossover_detect(&radii, &a, &radii, &b).unwrap();
        let ba = crossover_detect(&radii, &b, &radii, &a).unwrap();
        prop_assert_eq!(ab.len(), 1);
        prop_assert_eq!(ba.len(), 1);
        prop_assert!((ab[0].r_c - offset).abs() < 1e-9);
        prop_assert!((ab[0].r_c - ba[0].r_c).abs() < 1e-12);
    }

    #[test]
    fn free_particle_levels_scale_with_radius(r_c in 0.05f64..30.0, l in 0i64..3) {
        let grid = Arc::new(build_grid::<f64>(64, r_c, Mapping::default()).unwrap());
        let v = PotentialField::zero(grid, PotentialKind::Effective);
        let e = solve_channel(&v, l, 1).unwrap()[0].energy();
        let zeros = [PI, 4.493_409_457_909_064, 5.763_459_196_894_550];
        let k = zeros[l as usize];
        prop_assert!((e * r_c * r_c - k * k / 2.0).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn entropies_respect_the_uncertainty_bound(z in 2usize..5, r_c in 0.1f64..12.0, k in 0usize..7) {
        let state = supported_configurations()[k].clone();
        let res = scf_solve(z as f64, r_c, &state, Variant::XOnly, &ScfControls64::default()).unwrap();
        let (e, pi) = entropies(&res, &MomentumOptions::default(), AngularModel::default()).unwrap();
        prop_assert!(e.s_t >= bbm_bound::<f64>(), "{} Z = {z}, r_c = {r_c}: {}", state, e.s_t);
        prop_assert!((e.s_t - e.s_r - e.s_p).abs() < 1e-12);
        prop_assert!(pi.parseval_defect().abs() < 1e-6);
    }

    #[test]
    fn density_integrates_to_electron_count(z in 2usize..5, r_c in 0.2f64..10.0) {
        let res = scf_solve(z as f64, r_c, &Configuration::ground(), Variant::Lyp, &ScfControls64::default()).unwrap();
        prop_assert!((res.density.norm() - 2.0).abs() < 1e-9);
        prop_assert!(res.density.values().iter().all(|&v| v >= 0.0));
    }
}
