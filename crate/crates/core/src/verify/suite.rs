//! Named verification suites producing [`Report`]s.

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::checks::{
    check_biorthogonality, check_kron_identity, check_riesz, check_transform_norms, decay_sweep, running_max,
    stabilizes, NORM_TRIALS, STABILITY_TOLERANCE,
};
use super::embedding::{check_embedding_chain, embedding_window_warning, observe_sandwich};
use super::pnorm::{matrix_p_norm_bound, operator_p_norm_estimate};
use super::report::{Report, ReportRow};
use crate::band::BandMatrix;
use crate::basis1d::BasisSpec;
use crate::error::{Error, Result};
use crate::nterm::jackson_bernstein_ratios;
use crate::tensorbasis::System;
use crate::testfunctions::random_sparse_coefficients;

/// Relative rounding slack when comparing a norm with its closed-form bound.
pub const ROUNDING_SLACK: f64 = 1e-12;

/// Accepted spread of a running maximum around its final value for the embedding sweeps.
pub const EMBEDDING_TOLERANCE: f64 = 0.25;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Biorth,
    Lemma1,
    Decay,
    Lemma4,
    Kron,
    Riesz,
    Embedding,
    Sandwich,
    Jackson,
    All,
}

impl Suite {
    pub const EACH: [Suite; 9] = [
        Suite::Biorth,
        Suite::Lemma1,
        Suite::Decay,
        Suite::Lemma4,
        Suite::Kron,
        Suite::Riesz,
        Suite::Embedding,
        Suite::Sandwich,
        Suite::Jackson,
    ];

    /// Finest level swept when none is configured.
    pub fn default_level(self) -> u32 {
        match self {
            Suite::Lemma4 => 12,
            Suite::Biorth | Suite::Decay | Suite::Riesz => 10,
            _ => 8,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Biorth => "biorth",
            Suite::Lemma1 => "lemma1",
            Suite::Decay => "decay",
            Suite::Lemma4 => "lemma4",
            Suite::Kron => "kron",
            Suite::Riesz => "riesz",
            Suite::Embedding => "embedding",
            Suite::Sandwich => "sandwich",
            Suite::Jackson => "jackson",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    /// Largest level of every sweep; `None` selects [`Suite::default_level`].
    pub m_max: Option<u32>,
    /// Exponents for `lemma1` and `lemma4`; empty selects the suite defaults.
    pub p_grid: Vec<f64>,
    pub seed: u64,
    pub q: f64,
    pub s: f64,
    /// Decay exponent of the `decay` suite.
    pub alpha: f64,
    /// Bound on the worst decay ratio.
    pub decay_bound: f64,
    /// Random samples per parameter (matrices, vectors).
    pub samples: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            m_max: None,
            p_grid: Vec::new(),
            seed: 0,
            q: 0.0,
            s: 0.25,
            alpha: 4.0,
            decay_bound: 2.0,
            samples: 100,
        }
    }
}

impl SuiteConfig {
    /// The configured level, or the suite default capped by the finest level of `spec`.
    fn level(&self, suite: Suite, spec: &BasisSpec) -> u32 {
        self.m_max
            .unwrap_or_else(|| suite.default_level().min(spec.max_level()))
    }

    fn grid(&self, default: &[f64]) -> Vec<f64> {
        if self.p_grid.is_empty() {
            default.to_vec()
        } else {
            self.p_grid.clone()
        }
    }
}

/// A random sparse matrix of size up to `max_size x max_size` with about 30% nonzeros.
pub fn random_sparse_matrix(rng: &mut impl Rng, max_size: usize) -> BandMatrix {
    let rows = rng.gen_range(1..=max_size);
    let cols = rng.gen_range(1..=max_size);
    let mut triplets = Vec::new();
    for c in 0..cols {
        for r in 0..rows {
            if rng.gen_bool(0.3) {
                triplets.push((r, c, rng.sample::<f64, _>(StandardNormal)));
            }
        }
    }
    BandMatrix::from_triplets(rows, cols, triplets).expect("valid positions")
}

/// Runs one suite (or all of them) with the given configuration.
pub fn run_suite(spec: &BasisSpec, suite: Suite, cfg: &SuiteConfig) -> Result<Report> {
    match suite {
        Suite::All => {
            let mut report = Report::default();
            for s in Suite::EACH {
                report.extend(run_suite(spec, s, cfg)?);
            }
            Ok(report)
        }
        Suite::Biorth => biorth(spec, cfg),
        Suite::Lemma1 => lemma1(cfg),
        Suite::Decay => decay(spec, cfg),
        Suite::Lemma4 => lemma4(spec, cfg),
        Suite::Kron => kron(cfg),
        Suite::Riesz => riesz(spec, cfg),
        Suite::Embedding => embedding(spec, cfg),
        Suite::Sandwich => sandwich(spec, cfg),
        Suite::Jackson => jackson(spec, cfg),
    }
}

fn biorth(spec: &BasisSpec, cfg: &SuiteConfig) -> Result<Report> {
    let bound = if spec.is_haar() { 1e-12 } else { 1e-10 };
    let rows = (spec.j0()..=cfg.level(Suite::Biorth, spec))
        .into_par_iter()
        .map(|m| Ok(ReportRow::at_most("biorth", spec.name(), Some(m), check_biorthogonality(spec, m)?, bound)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Report { rows, notes: vec![] })
}

fn lemma1(cfg: &SuiteConfig) -> Result<Report> {
    let mut report = Report::default();
    for p in cfg.grid(&[0.5, 0.8, 1.0]) {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut worst = 0.0f64;
        for i in 0..cfg.samples {
            let a = random_sparse_matrix(&mut rng, 12);
            let bound = matrix_p_norm_bound(&a, p)?;
            let est = operator_p_norm_estimate(&a, p, NORM_TRIALS, cfg.seed.wrapping_add(i as u64))?;
            if bound > 0.0 {
                worst = worst.max(est / bound);
            }
        }
        report.push(ReportRow::at_most(
            "lemma1",
            format!("p={p} estimate/bound"),
            None,
            worst,
            1.0 + ROUNDING_SLACK,
        ));
    }
    Ok(report)
}

fn decay(spec: &BasisSpec, cfg: &SuiteConfig) -> Result<Report> {
    let rows = decay_sweep(spec, cfg.alpha, cfg.level(Suite::Decay, spec))?
        .into_iter()
        .map(|(m, r)| ReportRow::at_most("decay", format!("alpha={}", cfg.alpha), Some(m), r, cfg.decay_bound))
        .collect();
    Ok(Report { rows, notes: vec![] })
}

fn stability_row(check: &str, param: String, values: &[f64], tol: f64) -> ReportRow {
    let r = running_max(values);
    let (first, last) = if r.len() >= 3 { (r[r.len() - 3], r[r.len() - 1]) } else { (0.0, 1.0) };
    ReportRow {
        check: check.to_string(),
        param,
        m: None,
        value: if last > 0.0 { 1.0 - first / last } else { 0.0 },
        bound: Some(tol),
        pass: stabilizes(values, tol),
    }
}

fn lemma4(spec: &BasisSpec, cfg: &SuiteConfig) -> Result<Report> {
    let mut report = Report::default();
    for p in cfg.grid(&[0.6, 1.0, 1.5, 2.0]) {
        let t = check_transform_norms(spec, p, cfg.level(Suite::Lemma4, spec), cfg.seed)?;
        for r in &t.rows {
            for (name, v) in [
                ("T^T", r.primal_transposed),
                ("dual T^T", r.dual_transposed),
                ("T ratio", r.primal_ratio(p)),
                ("dual T ratio", r.dual_ratio(p)),
            ] {
                report.push(ReportRow::observation("lemma4", format!("p={p} {name}"), Some(r.m), v));
            }
        }
        let series: [(&str, Vec<f64>); 4] = [
            ("T^T", t.rows.iter().map(|r| r.primal_transposed).collect()),
            ("dual T^T", t.rows.iter().map(|r| r.dual_transposed).collect()),
            ("T ratio", t.rows.iter().map(|r| r.primal_ratio(p)).collect()),
            ("dual T ratio", t.rows.iter().map(|r| r.dual_ratio(p)).collect()),
        ];
        for (name, values) in series {
            report.push(stability_row("lemma4", format!("p={p} {name} stable"), &values, STABILITY_TOLERANCE));
        }
    }
    Ok(report)
}

fn kron(cfg: &SuiteConfig) -> Result<Report> {
    let mut report = Report::default();
    for (p, tol) in [(1.0, 1e-12), (2.0, 1e-9), (f64::INFINITY, 1e-12)] {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let a = dense_random(&mut rng, 4);
            let b = dense_random(&mut rng, 4);
            let (lhs, rhs) = check_kron_identity(&a, &b, p)?;
            worst = worst.max((lhs - rhs).abs() / rhs.max(f64::MIN_POSITIVE));
        }
        report.push(ReportRow::at_most("kron", format!("p={p} relative gap"), None, worst, tol));
    }
    Ok(report)
}

fn dense_random(rng: &mut impl Rng, size: usize) -> BandMatrix {
    let v: Vec<f64> = (0..size * size).map(|_| rng.gen_range(-1.0..1.0)).collect();
    BandMatrix::from_dense(size, size, &v).expect("square data")
}

/// Largest level for which the Gram matrix is assembled densely.
const RIESZ_MAX_LEVEL: u32 = 10;

fn riesz(spec: &BasisSpec, cfg: &SuiteConfig) -> Result<Report> {
    let wanted = cfg.level(Suite::Riesz, spec);
    let top = wanted.min(RIESZ_MAX_LEVEL);
    let estimates = (spec.j0()..=top)
        .into_par_iter()
        .map(|m| check_riesz(spec, m))
        .collect::<Result<Vec<_>>>()?;
    let mut report = Report::default();
    for e in &estimates {
        report.push(ReportRow::observation("riesz", "condition", Some(e.m), e.condition));
        report.push(ReportRow::observation("riesz", "diagonal defect", Some(e.m), e.diagonal_defect));
    }
    let conditions: Vec<f64> = estimates.iter().map(|e| e.condition).collect();
    report.push(stability_row("riesz", "condition stable".into(), &conditions, STABILITY_TOLERANCE));
    if top < wanted {
        report.note(format!("riesz: Gram matrices assembled up to m = {top} only"));
    }
    Ok(report)
}

/// Levels of the embedding sweeps: from `max(j0 + 1, m_max - 4)` to `m_max`.
fn sweep_levels(spec: &BasisSpec, m_max: u32) -> std::ops::RangeInclusive<u32> {
    (spec.j0() + 1).max(m_max.saturating_sub(4))..=m_max
}

fn embedding(spec: &BasisSpec, cfg: &SuiteConfig) -> Result<Report> {
    let mut report = Report::default();
    if let Some(w) = embedding_window_warning(spec, cfg.q, cfg.s) {
        report.note(format!("embedding: {w}"));
    }
    let per_level = sweep_levels(spec, cfg.level(Suite::Embedding, spec))
        .into_par_iter()
        .map(|m| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (u64::from(m) << 32));
            let (mut lower, mut upper) = (0.0f64, 0.0f64);
            for _ in 0..cfg.samples {
                let u = random_sparse_coefficients(spec, System::Hyperbolic, 2, m, 64, &mut rng)?;
                let r = check_embedding_chain(spec, &u, cfg.q, cfg.s)?;
                lower = lower.max(r.lower);
                upper = upper.max(r.upper);
            }
            Ok((m, lower, upper))
        })
        .collect::<Result<Vec<_>>>()?;
    let param = |name: &str| format!("q={} s={} {name}", cfg.q, cfg.s);
    for &(m, lower, upper) in &per_level {
        report.push(ReportRow::observation("embedding", param("lower"), Some(m), lower));
        report.push(ReportRow::observation("embedding", param("upper"), Some(m), upper));
    }
    for (name, values) in [
        ("lower", per_level.iter().map(|r| r.1).collect::<Vec<_>>()),
        ("upper", per_level.iter().map(|r| r.2).collect()),
    ] {
        report.push(spread_row("embedding", param(&format!("{name} stable")), &values, EMBEDDING_TOLERANCE));
    }
    Ok(report)
}

/// Largest relative distance of the running maxima from the final one.
pub fn running_max_spread(values: &[f64]) -> f64 {
    let r = running_max(values);
    let Some(&last) = r.last() else { return 0.0 };
    if last <= 0.0 {
        return 0.0;
    }
    r.iter().map(|v| (last - v) / last).fold(0.0, f64::max)
}

fn spread_row(check: &str, param: String, values: &[f64], tol: f64) -> ReportRow {
    ReportRow::at_most(check, param, None, running_max_spread(values), tol)
}

fn sandwich(spec: &BasisSpec, cfg: &SuiteConfig) -> Result<Report> {
    const EPS: f64 = 0.1;
    let mut report = Report::default();
    let levels: Vec<u32> = sweep_levels(spec, cfg.level(Suite::Sandwich, spec)).collect();
    let results = levels
        .par_iter()
        .map(|&m| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (u64::from(m) << 32) ^ 0x5a);
            let (mut lower, mut upper) = (0.0f64, 0.0f64);
            for _ in 0..cfg.samples {
                let u = random_sparse_coefficients(spec, System::Hyperbolic, 2, m, 64, &mut rng)?;
                let (l, h) = observe_sandwich(spec, &u, cfg.q, cfg.s, EPS)?;
                lower = lower.max(l);
                upper = upper.max(h);
            }
            Ok((m, lower, upper))
        })
        .collect::<Result<Vec<_>>>()?;
    for (m, lower, upper) in results {
        let param = |name: &str| format!("q={} s={} eps={EPS} {name}", cfg.q, cfg.s);
        report.push(ReportRow::observation("sandwich", param("lower"), Some(m), lower));
        report.push(ReportRow::observation("sandwich", param("upper"), Some(m), upper));
    }
    Ok(report)
}

/// Bound on the Jackson and Bernstein suprema.
pub const JACKSON_BERNSTEIN_BOUND: f64 = 4.0;

fn jackson(spec: &BasisSpec, cfg: &SuiteConfig) -> Result<Report> {
    let mut report = Report::default();
    let grid = [(0.0, 1.0), (0.25, 0.5), (-0.25, 0.5)];
    let jobs: Vec<(f64, f64, u32)> = grid
        .iter()
        .flat_map(|&(q, r)| sweep_levels(spec, cfg.level(Suite::Jackson, spec)).map(move |m| (q, r, m)))
        .collect();
    let results = jobs
        .par_iter()
        .map(|&(q, r, m)| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (u64::from(m) << 32));
            let (mut jack, mut bern) = (0.0f64, 0.0f64);
            for _ in 0..cfg.samples {
                let u = random_sparse_coefficients(spec, System::Hyperbolic, 2, m, 64, &mut rng)?;
                let (j, b) = jackson_bernstein_ratios(&u, q, r)?;
                jack = jack.max(j);
                bern = bern.max(b);
            }
            Ok((q, r, m, jack, bern))
        })
        .collect::<Result<Vec<_>>>()?;
    for (q, r, m, jack, bern) in results {
        let p = |name: &str| format!("q={q} r={r} {name}");
        report.push(ReportRow::at_most("jackson", p("jackson"), Some(m), jack, JACKSON_BERNSTEIN_BOUND));
        report.push(ReportRow::at_most("jackson", p("bernstein"), Some(m), bern, JACKSON_BERNSTEIN_BOUND));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis1d::make_haar_basis;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::EACH {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn small_suites_pass_on_haar() {
        let spec = make_haar_basis(0);
        let cfg = SuiteConfig {
            m_max: Some(6),
            samples: 10,
            ..SuiteConfig::default()
        };
        for s in [Suite::Biorth, Suite::Kron, Suite::Lemma1, Suite::Decay] {
            let r = run_suite(&spec, s, &cfg).unwrap();
            assert!(r.passed(), "{}", r.summary());
        }
    }

    #[test]
    fn spread() {
        assert_eq!(running_max_spread(&[1.0, 2.0, 2.0]), 0.5);
        assert_eq!(running_max_spread(&[]), 0.0);
    }
}
