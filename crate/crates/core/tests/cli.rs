use std::path::Path;
use std::process::Command;

use hyperwave::cli::{run, EXIT_CHECK_FAILED, EXIT_IO, EXIT_OK, EXIT_INVALID};
use hyperwave::tensorbasis::{parse_array, write_array};
use ndarray::{ArrayD, IxDyn};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn hw(args: &[&str]) -> i32 {
    let mut v = vec!["hyperwave".to_string()];
    v.extend(args.iter().map(|s| s.to_string()));
    run(v)
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn random_array(n: usize, extent: usize, seed: u64) -> ArrayD<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ArrayD::from_shape_fn(IxDyn(&vec![extent; n]), |_| rng.gen_range(-1.0..1.0))
}

#[test]
fn forward_then_inverse_reproduces_input() {
    let dir = tempfile::tempdir().unwrap();
    for (system, n) in [("hyper", 2), ("iso", 2), ("hyper", 3)] {
        let x = random_array(n, 16, 1);
        let input = dir.path().join("x.txt");
        let coeffs = dir.path().join("c.txt");
        let back = dir.path().join("y.txt");
        std::fs::write(&input, write_array(&x)).unwrap();
        let fwd = [
            "transform", "--direction", "forward", "--system", system, "--input", path_str(&input), "--n",
        ];
        let mut args: Vec<&str> = fwd.to_vec();
        let n_str = n.to_string();
        args.extend([n_str.as_str(), "--out", path_str(&coeffs)]);
        assert_eq!(hw(&args), EXIT_OK);
        let inv = ["transform", "--direction", "inverse", "--input", path_str(&coeffs), "--out", path_str(&back)];
        assert_eq!(hw(&inv), EXIT_OK);
        let y = parse_array(&std::fs::read_to_string(&back).unwrap()).unwrap();
        let err = (&y - &x).mapv(|v| v * v).sum().sqrt() / x.mapv(|v| v * v).sum().sqrt();
        assert!(err <= 1e-12, "{system} n={n}: relative error {err}");
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.txt");
    std::fs::write(&empty, "").unwrap();
    assert_eq!(hw(&["transform", "--input", path_str(&empty)]), EXIT_IO);
    assert_eq!(hw(&["transform", "--input", path_str(&dir.path().join("missing"))]), EXIT_IO);
    assert_eq!(hw(&["frobnicate"]), EXIT_IO);
    assert_eq!(
        hw(&["transform", "--system", "iso", "--kind", "smooth", "--n", "3", "--jmax", "3"]),
        EXIT_INVALID
    );
    assert_eq!(hw(&["nterm", "--kind", "smooth", "--n", "4"]), EXIT_INVALID);
    assert_eq!(hw(&["verify", "--suite", "lemma4", "--p", "0.01"]), EXIT_INVALID);
    assert_eq!(hw(&["verify", "--suite", "nonsense"]), EXIT_INVALID);
}

#[test]
fn mismatched_basis_header_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("c.txt");
    std::fs::write(&file, "hyperwave-coeffs v1 hyperbolic n=2 p=2 basis=dku13 jmax=3\n0 0 0 0 1.0\n").unwrap();
    assert_eq!(hw(&["nterm", "--input", path_str(&file)]), EXIT_INVALID);
    assert_eq!(hw(&["transform", "--direction", "inverse", "--input", path_str(&file)]), EXIT_INVALID);
}

#[test]
fn power_law_coefficients_give_exact_rate() {
    // u_1 = 1 and u_i^2 = (i-1)^-2 - i^-2 up to `count`, then `count` equal coefficients carrying
    // the remaining mass count^-2; every one of them is smaller than u_count, so E_N = 1/N for N <= count
    let count = 8192usize;
    let mut text = String::from("hyperwave-coeffs v1 hyperbolic n=2 p=2 basis=haar jmax=7\n");
    let mut i = 0;
    for j1 in 0..=7u32 {
        for j2 in 0..=7u32 {
            let (s1, s2) = (1usize << j1.saturating_sub(1), 1usize << j2.saturating_sub(1));
            for k1 in 0..s1 {
                for k2 in 0..s2 {
                    i += 1;
                    let u = if i == 1 {
                        1.0
                    } else if i > count {
                        (count as f64).powf(-1.5)
                    } else {
                        let a = (i - 1) as f64;
                        let b = i as f64;
                        (1.0 / (a * a) - 1.0 / (b * b)).sqrt()
                    };
                    text.push_str(&format!("{j1} {j2} {k1} {k2} {u:.17e}\n"));
                }
            }
        }
    }
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("power.txt");
    let csv = dir.path().join("curve.csv");
    std::fs::write(&file, text).unwrap();
    let args = ["nterm", "--input", path_str(&file), "--out", path_str(&csv), "--nmin", "16", "--nmax", "4096"];
    assert_eq!(hw(&args), EXIT_OK);
    let rows: Vec<(f64, f64)> = std::fs::read_to_string(&csv)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap())
        })
        .collect();
    let fitted: Vec<_> = rows.iter().filter(|(n, _)| (16.0..=4096.0).contains(n)).collect();
    assert!(fitted.len() >= 5);
    for (n, e) in &fitted {
        assert!((e * n - 1.0).abs() < 1e-10, "E_{n} = {e}");
    }
    // least squares slope of log E against log N
    let xs: Vec<f64> = fitted.iter().map(|(n, _)| n.ln()).collect();
    let ys: Vec<f64> = fitted.iter().map(|(_, e)| e.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / xs.len() as f64, ys.iter().sum::<f64>() / ys.len() as f64);
    let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    assert!((slope + 1.0).abs() < 1e-10);
    let rate = hyperwave::nterm::fit_rate(
        &hyperwave::nterm::error_curve(
            &hyperwave::tensorbasis::parse_coeffs(&std::fs::read_to_string(&file).unwrap(), &hyperwave::make_haar_basis(0))
                .unwrap(),
            0.0,
            &hyperwave::nterm::doubling_grid(4096),
        )
        .unwrap(),
        16,
        4096,
    )
    .unwrap();
    assert!((rate - 1.0).abs() < 1e-10, "rate {rate}");
}

#[test]
fn config_values_apply_unless_overridden() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# nterm manifest\nkind = random_decay\nn = 2\njmax = 5\nseed = 3\nnmax = 64\n").unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let c = dir.path().join("c.csv");
    assert_eq!(hw(&["--config", path_str(&cfg), "nterm", "--out", path_str(&a)]), EXIT_OK);
    let flags = ["nterm", "--kind", "random_decay", "--n", "2", "--jmax", "5", "--seed", "3", "--nmax", "64"];
    let mut args = flags.to_vec();
    args.extend(["--out", path_str(&b)]);
    assert_eq!(hw(&args), EXIT_OK);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let args = ["--config", path_str(&cfg), "nterm", "--seed", "4", "--out", path_str(&c)];
    assert_eq!(hw(&args), EXIT_OK);
    let text = std::fs::read_to_string(&c).unwrap();
    assert!(text.lines().nth(1).unwrap().ends_with(",4"), "{text}");
}

#[test]
fn verify_suites_pass() {
    assert_eq!(hw(&["verify", "--suite", "biorth"]), EXIT_OK);
    assert_eq!(hw(&["verify", "--suite", "kron"]), EXIT_OK);
    assert_eq!(hw(&["verify", "--suite", "lemma4", "--p", "0.6"]), EXIT_OK);
}

#[test]
fn failing_check_exits_with_one() {
    // at p = 0.6 the norm ratios have not settled by level 8
    assert_eq!(hw(&["verify", "--suite", "lemma4", "--p", "0.6", "--jmax", "8"]), EXIT_CHECK_FAILED);
}

#[test]
fn mask_file_breaking_biorthogonality_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let spec = hyperwave::make_haar_basis(0);
    let mut masks = std::collections::BTreeMap::new();
    for j in 1..=4 {
        let set = spec.masks(j).unwrap().into_owned();
        let bad = set.primal_detail.with_added(0, 0, 1e-3).unwrap();
        masks.insert(j, hyperwave::MaskSet { primal_detail: bad, ..set });
    }
    let params = hyperwave::BasisParams {
        name: "perturbed".into(),
        ..spec.params().clone()
    };
    let perturbed = hyperwave::basis1d::make_mask_basis_unchecked(masks, params).unwrap();
    let file = dir.path().join("masks.txt");
    std::fs::write(&file, hyperwave::basis1d::write_mask_file(&perturbed, 4).unwrap()).unwrap();
    let basis = format!("maskfile={}", path_str(&file));
    assert_eq!(hw(&["verify", "--basis", &basis, "--suite", "biorth", "--jmax", "4"]), EXIT_INVALID);
}

#[test]
fn binary_writes_csv_to_stdout() {
    let out = Command::new(env!("CARGO_BIN_EXE_hyperwave"))
        .args(["nterm", "--kind", "smooth", "--n", "2", "--jmax", "4", "--nmax", "32"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("N,E_N,q,r,tau,basis,n,seed\n"), "{stdout}");
    assert!(String::from_utf8(out.stderr).unwrap().contains("fitted rate"));
}
