//! Command line front end of the `hyperwave` binary.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 I/O or parse
//! error, 3 invalid input (dimensions, systems, bases, parameters).

pub mod config;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use ndarray::ArrayD;

pub use config::{merge_config, parse_config, read_config, take_config_path};

use crate::basis1d::{make_haar_basis, read_mask_file, BasisSpec};
use crate::error::{Error, Result};
use crate::nterm::{doubling_grid, error_curve, fit_rate, NTermResult};
use crate::seqnorms::{besov_hybrid_norm, NormParams};
use crate::tensorbasis::{
    hyper_forward, hyper_inverse, iso_analysis, iso_synthesis, parse_array, parse_coeffs, write_array, write_coeffs,
    CoeffVector, System,
};
use crate::testfunctions::{sample_function, single_scale_to_values, values_to_single_scale, Kind, SampleParams};
use crate::verify::{format_float, run_suite, SuiteConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_INVALID: i32 = 3;

/// Environment variable capping the worker pool.
pub const THREADS_ENV: &str = "HYPERWAVE_THREADS";

#[derive(Parser, Debug)]
#[command(name = "hyperwave", version, about = "Wavelet transforms, sequence norms and N-term approximation on the unit cube")]
pub struct Cli {
    /// Flat `key = value` file supplying defaults for any flag.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Forward or inverse transform between arrays and coefficient files.
    Transform(TransformArgs),
    /// Best N-term error curve and fitted rate.
    Nterm(NtermArgs),
    /// Run a verification suite and write its report.
    Verify(VerifyArgs),
    /// Hyperbolic against isotropic N-term errors of one test function.
    Compare(CompareArgs),
}

#[derive(Args, Debug, Clone)]
pub struct BasisArgs {
    /// `haar` or `maskfile=PATH`.
    #[arg(long, default_value = "haar")]
    pub basis: String,
    /// Coarsest level of the Haar basis.
    #[arg(long, default_value_t = 0)]
    pub j0: u32,
}

impl BasisArgs {
    pub fn load(&self) -> Result<BasisSpec> {
        if self.basis == "haar" {
            return Ok(make_haar_basis(self.j0));
        }
        match self.basis.strip_prefix("maskfile=") {
            Some(path) => read_mask_file(path),
            None => Err(Error::InvalidArgument(format!(
                "basis must be `haar` or `maskfile=PATH`, got `{}`",
                self.basis
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SystemArg {
    Hyper,
    Iso,
}

impl From<SystemArg> for System {
    fn from(s: SystemArg) -> Self {
        match s {
            SystemArg::Hyper => System::Hyperbolic,
            SystemArg::Iso => System::Isotropic,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Test data from a file or a generator.
#[derive(Args, Debug, Clone)]
pub struct SourceArgs {
    /// Input file (array file for forward transforms, coefficient file otherwise).
    #[arg(long, value_name = "PATH")]
    pub input: Option<PathBuf>,
    /// Generator: smooth, point_kink, tensor_kink or random_decay.
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Finest level.
    #[arg(long, default_value_t = 6)]
    pub jmax: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Kink exponent.
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Isotropic decay of random_decay.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub decay_q: f64,
    /// Mixed decay of random_decay (also the rate `r` of nterm).
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub r: f64,
}

impl SourceArgs {
    fn kind(&self) -> Result<Kind> {
        self.kind
            .as_deref()
            .ok_or_else(|| Error::InvalidArgument("either --input or --kind is required".into()))?
            .parse()
    }

    fn sample(&self, spec: &BasisSpec) -> Result<ArrayD<f64>> {
        let params = SampleParams {
            beta: self.beta,
            q: self.decay_q,
            r: self.r,
            seed: self.seed,
            ..SampleParams::default()
        };
        sample_function(spec, self.kind()?, &params, self.n, self.jmax)
    }

    /// Point values from `--input` (an array file) or from the generator.
    fn values(&self, spec: &BasisSpec) -> Result<ArrayD<f64>> {
        match &self.input {
            Some(path) => parse_array(&std::fs::read_to_string(path)?),
            None => self.sample(spec),
        }
    }
}

#[derive(Args, Debug)]
pub struct TransformArgs {
    #[command(flatten)]
    pub basis: BasisArgs,
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, value_enum, default_value = "forward")]
    pub direction: Direction,
    /// Coefficient system of forward transforms (inverse ones read it from the file).
    #[arg(long, value_enum)]
    pub system: Option<SystemArg>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct NtermArgs {
    #[command(flatten)]
    pub basis: BasisArgs,
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, value_enum, default_value = "hyper")]
    pub system: SystemArg,
    /// Sobolev index of the error norm.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub q: f64,
    /// Besov summability reported with the curve; defaults to `1/(r + 1/2)`.
    #[arg(long)]
    pub tau: Option<f64>,
    /// Fit window.
    #[arg(long, default_value_t = 16)]
    pub nmin: usize,
    #[arg(long, default_value_t = 4096)]
    pub nmax: usize,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub basis: BasisArgs,
    /// biorth, lemma1, decay, lemma4, kron, riesz, embedding, sandwich, jackson or all.
    #[arg(long, default_value = "all")]
    pub suite: String,
    /// Largest level of the sweeps (default: 12 for lemma4, 10 for biorth, decay and riesz, 8 otherwise).
    #[arg(long)]
    pub jmax: Option<u32>,
    /// Comma separated exponents for lemma1 and lemma4.
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub q: f64,
    #[arg(long, default_value_t = 0.25, allow_negative_numbers = true)]
    pub s: f64,
    /// Decay exponent of the decay suite.
    #[arg(long, default_value_t = 4.0)]
    pub alpha: f64,
    /// Random samples per parameter.
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[command(flatten)]
    pub basis: BasisArgs,
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub q: f64,
    #[arg(long, default_value_t = 16)]
    pub nmin: usize,
    #[arg(long, default_value_t = 4096)]
    pub nmax: usize,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

/// Result of a subcommand: output text, summary and whether all checks passed.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub output: String,
    pub summary: String,
    pub passed: bool,
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_) | Error::Parse { .. } => EXIT_IO,
        _ => EXIT_INVALID,
    }
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run(args: Vec<String>) -> i32 {
    let mut args = args;
    if let Some(path) = take_config_path(&mut args) {
        let cfg = match read_config(&path) {
            Ok(cfg) => cfg,
            Err(e) => {
                eprintln!("error: config {path}: {e}");
                return exit_code(&e);
            }
        };
        apply_config(&mut args, &cfg);
    }
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_IO } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return exit_code(&e);
    }
    match execute(cli.command) {
        Ok(outcome) => {
            eprint!("{}", outcome.summary);
            if outcome.passed {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn apply_config(args: &mut Vec<String>, cfg: &[(String, String)]) {
    let command = Cli::command();
    let Some((pos, sub)) = args
        .iter()
        .enumerate()
        .skip(1)
        .find_map(|(i, a)| command.find_subcommand(a).map(|s| (i, s)))
    else {
        return;
    };
    let accepted: Vec<String> = sub
        .get_arguments()
        .filter_map(|a| a.get_long().map(str::to_string))
        .filter(|l| l != "config")
        .collect();
    merge_config(args, pos, &accepted, cfg);
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Error::InvalidArgument(format!("{THREADS_ENV} must be a positive integer, got `{value}`")))?;
    // a pool that already exists (repeated calls in one process) is kept
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

fn execute(command: Command) -> Result<Outcome> {
    match command {
        Command::Transform(a) => cmd_transform(&a),
        Command::Nterm(a) => cmd_nterm(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Compare(a) => cmd_compare(&a),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn finish(out: &Option<PathBuf>, output: String, summary: String, passed: bool) -> Result<Outcome> {
    emit(out.as_deref(), &output)?;
    Ok(Outcome {
        output,
        summary,
        passed,
    })
}

/// The isotropic path is offered for `n <= 2` only.
fn check_system(system: System, n: usize) -> Result<()> {
    if system == System::Isotropic && n > 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    Ok(())
}

fn analyse(spec: &BasisSpec, system: System, values: &ArrayD<f64>) -> Result<CoeffVector> {
    let n = values.ndim();
    check_system(system, n)?;
    let c = values_to_single_scale(values);
    match system {
        System::Hyperbolic => hyper_forward(spec, n, &c),
        System::Isotropic => iso_analysis(spec, n, &c),
    }
}

pub fn cmd_transform(a: &TransformArgs) -> Result<Outcome> {
    let spec = a.basis.load()?;
    match a.direction {
        Direction::Forward => {
            let values = a.source.values(&spec)?;
            let system = a.system.map_or(System::Hyperbolic, System::from);
            let coeffs = analyse(&spec, system, &values)?;
            let summary = format!("{} nonzero {} coefficients\n", coeffs.len(), system.name());
            finish(&a.out, write_coeffs(&coeffs), summary, true)
        }
        Direction::Inverse => {
            let path = a
                .source
                .input
                .as_ref()
                .ok_or_else(|| Error::InvalidArgument("inverse transforms need --input".into()))?;
            let coeffs = parse_coeffs(&std::fs::read_to_string(path)?, &spec)?;
            if let Some(s) = a.system {
                if System::from(s) != coeffs.system() {
                    return Err(Error::WrongSystem {
                        expected: System::from(s).name(),
                        found: coeffs.system().name(),
                    });
                }
            }
            check_system(coeffs.system(), coeffs.dim())?;
            let coeffs = coeffs.rescale(2.0)?;
            let c = match coeffs.system() {
                System::Hyperbolic => hyper_inverse(&spec, &coeffs)?,
                System::Isotropic => iso_synthesis(&spec, &coeffs)?,
            };
            let values = single_scale_to_values(&c);
            let summary = format!("{} values\n", values.len());
            finish(&a.out, write_array(&values), summary, true)
        }
    }
}

fn curve_for(spec: &BasisSpec, source: &SourceArgs, system: System, q: f64, nmax: usize) -> Result<(CoeffVector, NTermResult)> {
    let u = match &source.input {
        Some(path) if source.kind.is_none() => {
            let text = std::fs::read_to_string(path)?;
            if text.starts_with(crate::tensorbasis::ARRAY_MAGIC) {
                analyse(spec, system, &parse_array(&text)?)?
            } else {
                parse_coeffs(&text, spec)?
            }
        }
        _ => analyse(spec, system, &source.sample(spec)?)?,
    };
    let curve = error_curve(&u, q, &doubling_grid(nmax))?;
    Ok((u, curve))
}

fn rate_line(label: &str, curve: &NTermResult, nmin: usize, nmax: usize) -> String {
    match fit_rate(curve, nmin, nmax) {
        Ok(rate) => format!("{label} rate {} over N in [{nmin}, {nmax}]\n", format_float(rate)),
        Err(e) => format!("{label} rate unavailable: {e}\n"),
    }
}

pub fn cmd_nterm(a: &NtermArgs) -> Result<Outcome> {
    let spec = a.basis.load()?;
    let (u, curve) = curve_for(&spec, &a.source, a.system.into(), a.q, a.nmax)?;
    let r = a.source.r;
    let tau = a.tau.unwrap_or(1.0 / (r + 0.5));
    let mut csv = String::from("N,E_N,q,r,tau,basis,n,seed\n");
    for (n, e) in &curve.errors {
        writeln!(
            csv,
            "{n},{},{},{},{},{},{},{}",
            format_float(*e),
            format_float(a.q),
            format_float(r),
            format_float(tau),
            spec.name(),
            u.dim(),
            a.source.seed
        )
        .unwrap();
    }
    let mut summary = rate_line("fitted", &curve, a.nmin, a.nmax);
    if u.system() == System::Hyperbolic {
        let norm = besov_hybrid_norm(&u, NormParams::new(a.q, r, tau, tau))?;
        writeln!(summary, "hybrid Besov norm (q={}, s={r}, tau={tau}) {}", a.q, format_float(norm)).unwrap();
    }
    finish(&a.out, csv, summary, true)
}

pub fn parse_p_grid(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|t| {
            let t = t.trim();
            if t == "inf" {
                return Ok(f64::INFINITY);
            }
            t.parse::<f64>()
                .map_err(|_| Error::InvalidArgument(format!("invalid exponent `{t}` in --p")))
        })
        .collect()
}

pub fn cmd_verify(a: &VerifyArgs) -> Result<Outcome> {
    let spec = a.basis.load()?;
    let suite = a.suite.parse()?;
    let cfg = SuiteConfig {
        m_max: a.jmax,
        p_grid: a.p.as_deref().map(parse_p_grid).transpose()?.unwrap_or_default(),
        seed: a.seed,
        q: a.q,
        s: a.s,
        alpha: a.alpha,
        samples: a.samples,
        ..SuiteConfig::default()
    };
    let report = run_suite(&spec, suite, &cfg)?;
    finish(&a.out, report.to_csv(), report.summary(), report.passed())
}

pub fn cmd_compare(a: &CompareArgs) -> Result<Outcome> {
    let spec = a.basis.load()?;
    check_system(System::Isotropic, a.source.n)?;
    let values = a.source.values(&spec)?;
    let hyper = analyse(&spec, System::Hyperbolic, &values)?;
    let iso = analyse(&spec, System::Isotropic, &values)?;
    let grid = doubling_grid(a.nmax);
    let ch = error_curve(&hyper, a.q, &grid)?;
    let ci = error_curve(&iso, a.q, &grid)?;
    let kind = a.source.kind.as_deref().unwrap_or("file");
    let mut csv = String::from("N,E_N_hyper,E_N_iso,kind,q,n,jmax,seed\n");
    for ((n, eh), (_, ei)) in ch.errors.iter().zip(&ci.errors) {
        writeln!(
            csv,
            "{n},{},{},{kind},{},{},{},{}",
            format_float(*eh),
            format_float(*ei),
            format_float(a.q),
            values.ndim(),
            hyper.max_level(),
            a.source.seed
        )
        .unwrap();
    }
    let summary = rate_line("hyperbolic", &ch, a.nmin, a.nmax) + &rate_line("isotropic", &ci, a.nmin, a.nmax);
    finish(&a.out, csv, summary, true)
}

/// Fitted rates of a `compare` run, for callers that want numbers instead of text.
pub fn compare_rates(a: &CompareArgs) -> Result<(f64, f64)> {
    let spec = a.basis.load()?;
    check_system(System::Isotropic, a.source.n)?;
    let values = a.source.values(&spec)?;
    let grid = doubling_grid(a.nmax);
    let rate = |system| -> Result<f64> {
        let u = analyse(&spec, system, &values)?;
        fit_rate(&error_curve(&u, a.q, &grid)?, a.nmin, a.nmax)
    };
    Ok((rate(System::Hyperbolic)?, rate(System::Isotropic)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn p_grid() {
        assert_eq!(parse_p_grid("0.6, 1,inf").unwrap(), vec![0.6, 1.0, f64::INFINITY]);
        assert!(parse_p_grid("x").is_err());
    }

    #[test]
    fn basis_selection() {
        let b = BasisArgs {
            basis: "haar".into(),
            j0: 1,
        };
        assert_eq!(b.load().unwrap().j0(), 1);
        let b = BasisArgs {
            basis: "db4".into(),
            j0: 0,
        };
        assert!(matches!(b.load(), Err(Error::InvalidArgument(_))));
    }
}
