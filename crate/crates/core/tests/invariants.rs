use hyperwave::nterm::{best_nterm, error_curve, SortedWeights};
use hyperwave::seqnorms::{besov_hybrid_norm, gk_norm, NormParams};
use hyperwave::tensorbasis::{
    hyper_forward, hyper_forward_axis_order, hyper_from_iso, iso_from_hyper, parse_coeffs, write_coeffs,
    CoeffVector, System,
};
use hyperwave::testfunctions::random_sparse_coefficients;
use hyperwave::transform1d::{forward, inverse};
use hyperwave::{make_dku13_basis, make_haar_basis, BasisSpec};
use ndarray::{ArrayD, IxDyn};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sparse(spec: &BasisSpec, system: System, m: u32, count: usize, seed: u64) -> CoeffVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_sparse_coefficients(spec, system, 2, m, count, &mut rng).unwrap()
}

fn scaled(spec: &BasisSpec, u: &CoeffVector, c: f64) -> CoeffVector {
    let mut out = CoeffVector::new(spec, System::Hyperbolic, u.dim(), u.max_level()).unwrap();
    for (idx, v) in u.hyper().unwrap() {
        out.insert_hyper(spec, *idx, c * v).unwrap();
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn univariate_round_trip(seed in any::<u64>(), m in 3u32..=10, dku in any::<bool>()) {
        let spec = if dku { make_dku13_basis(10).unwrap() } else { make_haar_basis(0) };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x: Vec<f64> = (0..spec.delta_size(m)).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let back = inverse(&spec, &forward(&spec, &x).unwrap()).unwrap();
        let err = x.iter().zip(&back).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(err <= 1e-12);
    }

    #[test]
    fn axis_order_does_not_matter(seed in any::<u64>(), m in 1u32..=4) {
        let spec = make_haar_basis(0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let extent = spec.delta_size(m);
        let x = ArrayD::from_shape_fn(IxDyn(&[extent; 3]), |_| rng.gen_range(-1.0..1.0));
        let a = hyper_forward(&spec, 3, &x).unwrap();
        let b = hyper_forward_axis_order(&spec, 3, &x, &[2, 0, 1]).unwrap();
        let (a, b) = (a.hyper().unwrap(), b.hyper().unwrap());
        for (idx, v) in a {
            prop_assert!((v - b.get(idx).copied().unwrap_or(0.0)).abs() <= 1e-13);
        }
    }

    #[test]
    fn change_of_basis_round_trip(seed in any::<u64>(), m in 1u32..=6, count in 1usize..40) {
        let spec = make_haar_basis(0);
        let u = sparse(&spec, System::Hyperbolic, m, count, seed);
        let back = hyper_from_iso(&spec, &iso_from_hyper(&spec, &u).unwrap()).unwrap();
        let back = back.hyper().unwrap();
        for (idx, v) in u.hyper().unwrap() {
            prop_assert!((v - back.get(idx).copied().unwrap_or(0.0)).abs() <= 1e-12);
        }
        prop_assert!((u.l2() - back.values().map(|v| v * v).sum::<f64>().sqrt()).abs() <= 1e-12 * u.l2().max(1.0));
    }

    #[test]
    fn coefficient_files_round_trip(seed in any::<u64>(), m in 1u32..=5, count in 1usize..30, iso in any::<bool>()) {
        let spec = make_haar_basis(0);
        let system = if iso { System::Isotropic } else { System::Hyperbolic };
        let u = sparse(&spec, system, m, count, seed);
        let back = parse_coeffs(&write_coeffs(&u), &spec).unwrap();
        prop_assert_eq!(back, u);
    }

    #[test]
    fn nterm_errors_decrease_and_split_the_mass(seed in any::<u64>(), count in 1usize..80, q in -1.0f64..1.0) {
        let spec = make_haar_basis(0);
        let u = sparse(&spec, System::Hyperbolic, 6, count, seed);
        let sorted = SortedWeights::new(&u, q).unwrap();
        let total = sorted.error(0).powi(2);
        for n in 0..=sorted.len() {
            prop_assert!(sorted.error(n + 1) <= sorted.error(n));
            prop_assert!((sorted.error(n).powi(2) + sorted.kept_mass(n) - total).abs() <= 1e-12 * total);
        }
        prop_assert_eq!(sorted.error(sorted.len()), 0.0);
        let grid: Vec<usize> = (0..=sorted.len()).collect();
        let curve = error_curve(&u, q, &grid).unwrap();
        for &(n, e) in &curve.errors {
            prop_assert_eq!(best_nterm(&u, q, n).unwrap().errors[0].1, e);
        }
    }

    #[test]
    fn selection_is_scale_invariant(seed in any::<u64>(), count in 1usize..60, n in 0usize..60, c in prop_oneof![-1e3f64..-1e-3, 1e-3f64..1e3]) {
        let spec = make_haar_basis(0);
        let u = sparse(&spec, System::Hyperbolic, 5, count, seed);
        let a = best_nterm(&u, 0.3, n).unwrap();
        let b = best_nterm(&scaled(&spec, &u, c), 0.3, n).unwrap();
        let mut sa = a.support.clone();
        let mut sb = b.support.clone();
        sa.sort();
        sb.sort();
        prop_assert_eq!(sa, sb);
    }

    #[test]
    fn hybrid_norm_is_homogeneous_and_matches_gk(seed in any::<u64>(), count in 1usize..40, q in -1.0f64..1.0, s in -1.0f64..1.0, c in 0.01f64..100.0) {
        let spec = make_haar_basis(0);
        let u = sparse(&spec, System::Hyperbolic, 5, count, seed);
        let params = NormParams::new(q, s, 2.0, 2.0);
        let a = besov_hybrid_norm(&u, params).unwrap();
        prop_assert_eq!(a.to_bits(), gk_norm(&u, q, s).unwrap().to_bits());
        let b = besov_hybrid_norm(&scaled(&spec, &u, c), params).unwrap();
        prop_assert!((b - c * a).abs() <= 1e-12 * c * a);
        for tau in [0.5, 1.0, 1.5] {
            let p = NormParams::new(q, s, 2.0, tau);
            let x = besov_hybrid_norm(&scaled(&spec, &u, c), p).unwrap();
            prop_assert!((x - c * besov_hybrid_norm(&u, p).unwrap()).abs() <= 1e-11 * x);
        }
    }

    #[test]
    fn config_never_overrides_flags(seed in 0u64..1000, q in -1.0f64..1.0) {
        let mut args: Vec<String> = ["hyperwave", "nterm", "--seed", &seed.to_string()].iter().map(|s| s.to_string()).collect();
        let accepted = vec!["seed".to_string(), "q".to_string()];
        let cfg = vec![("seed".to_string(), "5000".to_string()), ("q".to_string(), q.to_string())];
        hyperwave::cli::config::merge_config(&mut args, 1, &accepted, &cfg);
        prop_assert!(args.contains(&seed.to_string()));
        prop_assert!(!args.iter().any(|a| a.contains("5000")));
        let expected = format!("--q={}", q);
        prop_assert!(args.contains(&expected));
    }
}
