use std::collections::BTreeMap;

use hyperwave::basis1d::{evaluate_on_dyadic_grid, make_mask_basis_unchecked, parse_mask_file, write_mask_file};
use hyperwave::tensorbasis::{hyper_from_iso, hyper_inverse, iso_from_hyper, iso_synthesis, System};
use hyperwave::testfunctions::random_sparse_coefficients;
use hyperwave::verify::{check_biorthogonality, check_riesz};
use hyperwave::{build_transform, make_dku13_basis, LevelIndex, MaskSet};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn left_boundary_wavelet_cell_values() {
    let spec = make_dku13_basis(6).unwrap();
    let r = 0.125 * 8f64.sqrt();
    let left = [5.0, -11.0, 4.0, 4.0, -1.0, -1.0, 0.0, 0.0].map(|v| v * r);
    let values = evaluate_on_dyadic_grid(&spec, LevelIndex::wavelet(3, 0), 4).unwrap();
    for (i, v) in values.iter().enumerate() {
        assert!((v - left[i / 2]).abs() < 1e-13, "cell {i}: {v}");
    }
    assert!((left[0] - 1.76776695296637).abs() < 1e-13);
    assert!((left[1] + 3.88908729652601).abs() < 1e-13);
    assert!((left[2] - 1.41421356237309).abs() < 1e-13);
    assert!((left[4] + 0.353553390593274).abs() < 1e-13);
    // interior wavelet at level 4: six consecutive cells carry (-1, -1, 8, -8, 1, 1) / 8
    let values = evaluate_on_dyadic_grid(&spec, LevelIndex::wavelet(4, 3), 5).unwrap();
    let cells: Vec<f64> = values.chunks(2).map(|c| c[0]).collect();
    let start = cells.iter().position(|v| v.abs() > 1e-12).unwrap();
    let pattern = [-1.0, -1.0, 8.0, -8.0, 1.0, 1.0].map(|v| v / 8.0 * 4.0);
    for (i, c) in cells.iter().enumerate() {
        let expected = if (start..start + 6).contains(&i) { pattern[i - start] } else { 0.0 };
        assert!((c - expected).abs() < 1e-13, "cell {i}: {c}");
    }
}

#[test]
fn biorthogonal_up_to_level_ten() {
    let spec = make_dku13_basis(10).unwrap();
    for m in 2..=10 {
        let defect = check_biorthogonality(&spec, m).unwrap();
        assert!(defect <= 1e-10, "m = {m}: {defect}");
    }
}

#[test]
fn perturbed_detail_mask_breaks_biorthogonality() {
    let spec = make_dku13_basis(5).unwrap();
    let mut masks = BTreeMap::new();
    for j in 3..=5 {
        let mut set = spec.masks(j).unwrap().into_owned();
        if j == 3 {
            set = MaskSet {
                primal_detail: set.primal_detail.with_added(0, 0, 1e-3).unwrap(),
                ..set
            };
        }
        masks.insert(j, set);
    }
    let broken = make_mask_basis_unchecked(masks, spec.params().clone()).unwrap();
    assert!(check_biorthogonality(&broken, 3).unwrap() >= 1e-4);
    assert!(check_biorthogonality(&spec, 3).unwrap() <= 1e-12);
}

#[test]
fn transform_is_not_orthogonal() {
    // primal and dual transforms differ, so mixing them up is visible below
    let spec = make_dku13_basis(6).unwrap();
    let (t, t_dual) = build_transform(&spec, 5).unwrap();
    let diff = t
        .to_dense()
        .iter()
        .zip(t_dual.to_dense().iter())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    assert!(diff > 1e-2, "{diff}");
}

#[test]
fn change_of_basis_preserves_the_function() {
    let spec = make_dku13_basis(6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for m in 3..=6 {
        let u = random_sparse_coefficients(&spec, System::Hyperbolic, 2, m, 30, &mut rng).unwrap();
        let v = iso_from_hyper(&spec, &u).unwrap();
        let a = hyper_inverse(&spec, &u).unwrap();
        let b = iso_synthesis(&spec, &v).unwrap();
        let err = (&a - &b).mapv(f64::abs).fold(0.0, |x: f64, &y| x.max(y));
        assert!(err <= 1e-12 * a.mapv(f64::abs).fold(0.0, |x: f64, &y| x.max(y)), "m = {m}: {err}");
        let back = hyper_from_iso(&spec, &v).unwrap();
        for (idx, value) in u.hyper().unwrap() {
            let got = back.hyper().unwrap().get(idx).copied().unwrap_or(0.0);
            assert!((got - value).abs() <= 1e-12, "{idx:?}");
        }
        for (_, value) in back.hyper().unwrap().iter().filter(|(i, _)| !u.hyper().unwrap().contains_key(i)) {
            assert!(value.abs() <= 1e-12);
        }
    }
}

#[test]
fn riesz_condition_settles() {
    let spec = make_dku13_basis(14).unwrap();
    let conds: Vec<f64> = (3..=8).map(|m| check_riesz(&spec, m).unwrap().condition).collect();
    for w in conds.windows(2) {
        assert!(w[1] >= w[0] * (1.0 - 1e-9), "{conds:?}");
    }
    let last = conds[conds.len() - 1] / conds[conds.len() - 2];
    let first = conds[1] / conds[0];
    assert!(last - 1.0 < first - 1.0 && last < 1.05, "{conds:?}");
}

#[test]
fn mask_file_round_trip() {
    let spec = make_dku13_basis(6).unwrap();
    let text = write_mask_file(&spec, 6).unwrap();
    let back = parse_mask_file(&text, "unused").unwrap();
    assert_eq!(back.name(), "dku13");
    assert_eq!(back.j0(), 2);
    assert_eq!(back.max_level(), 6);
    for j in 3..=6 {
        let (a, b) = (spec.masks(j).unwrap(), back.masks(j).unwrap());
        for (x, y) in [
            (&a.primal_coarse, &b.primal_coarse),
            (&a.primal_detail, &b.primal_detail),
            (&a.dual_coarse, &b.dual_coarse),
            (&a.dual_detail, &b.dual_detail),
        ] {
            assert_eq!(x.triplets().collect::<Vec<_>>(), y.triplets().collect::<Vec<_>>());
        }
    }
    assert_eq!(write_mask_file(&back, 6).unwrap(), text);
}
