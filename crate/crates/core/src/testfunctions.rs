//! Deterministic test data on dyadic grids.
//!
//! All kinds return point values at the cell midpoints `(k + 1/2)/|Δ_m|` of
//! the level-`m` grid. Use [`values_to_single_scale`] before transforming.

use std::str::FromStr;

use ndarray::{ArrayD, IxDyn};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::basis1d::BasisSpec;
use crate::error::{Error, Result};
use crate::tensorbasis::{check_dim, hyper_inverse, iso_extent, CoeffVector, HyperIndex, IsoIndex, System};

/// Finest admissible sampling level.
pub const MAX_SAMPLE_LEVEL: u32 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    /// `Π sin(π x_i)`.
    Smooth,
    /// `|x - x0|^β`, low isotropic smoothness at a single point.
    PointKink,
    /// `Π |x_i - 1/2|^β`, dominating mixed smoothness with kinks along hyperplanes.
    TensorKink,
    /// Random hyperbolic coefficients with a prescribed level envelope.
    RandomDecay,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Smooth => "smooth",
            Kind::PointKink => "point_kink",
            Kind::TensorKink => "tensor_kink",
            Kind::RandomDecay => "random_decay",
        }
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "smooth" => Ok(Kind::Smooth),
            "point_kink" => Ok(Kind::PointKink),
            "tensor_kink" => Ok(Kind::TensorKink),
            "random_decay" => Ok(Kind::RandomDecay),
            other => Err(Error::UnknownKind(other.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleParams {
    /// Exponent of the kinks.
    pub beta: f64,
    /// Location of the point kink.
    pub x0: [f64; 3],
    /// Isotropic decay of `random_decay`.
    pub q: f64,
    /// Mixed decay of `random_decay`.
    pub r: f64,
    pub seed: u64,
}

impl Default for SampleParams {
    fn default() -> Self {
        Self {
            beta: 1.0,
            x0: [1.0 / 3.0; 3],
            q: 0.0,
            r: 1.0,
            seed: 0,
        }
    }
}

/// Point values of the chosen kind on the level-`m` grid of `spec`.
pub fn sample_function(spec: &BasisSpec, kind: Kind, params: &SampleParams, n: usize, m: u32) -> Result<ArrayD<f64>> {
    check_dim(n)?;
    if m > MAX_SAMPLE_LEVEL {
        return Err(Error::InvalidArgument(format!(
            "sampling level {m} exceeds {MAX_SAMPLE_LEVEL}"
        )));
    }
    spec.check_level(m)?;
    let size = spec.delta_size(m);
    let h = 1.0 / size as f64;
    let x = |k: usize| (k as f64 + 0.5) * h;
    let shape = IxDyn(&vec![size; n]);
    Ok(match kind {
        Kind::Smooth => ArrayD::from_shape_fn(shape, |p| {
            (0..n).map(|a| (std::f64::consts::PI * x(p[a])).sin()).product()
        }),
        Kind::PointKink => ArrayD::from_shape_fn(shape, |p| {
            let d2: f64 = (0..n).map(|a| (x(p[a]) - params.x0[a]).powi(2)).sum();
            d2.sqrt().powf(params.beta)
        }),
        Kind::TensorKink => ArrayD::from_shape_fn(shape, |p| {
            (0..n).map(|a| (x(p[a]) - 0.5).abs().powf(params.beta)).product()
        }),
        Kind::RandomDecay => {
            let u = random_decay_coefficients(spec, n, m, params.q, params.r, params.seed)?;
            let c = hyper_inverse(spec, &u)?;
            let scale = (size as f64).powf(n as f64 / 2.0);
            c.mapv(|v| v * scale)
        }
    })
}

/// Single-scale coefficients `c_m` from point values: each value is scaled by
/// `|Δ_m|^{-n/2}`, exact for piecewise constant data in the Haar basis.
pub fn values_to_single_scale(values: &ArrayD<f64>) -> ArrayD<f64> {
    let size = values.shape().first().copied().unwrap_or(1) as f64;
    let scale = size.powf(-(values.ndim() as f64) / 2.0);
    values.mapv(|v| v * scale)
}

/// Inverse of [`values_to_single_scale`].
pub fn single_scale_to_values(c: &ArrayD<f64>) -> ArrayD<f64> {
    let size = c.shape().first().copied().unwrap_or(1) as f64;
    let scale = size.powf(c.ndim() as f64 / 2.0);
    c.mapv(|v| v * scale)
}

/// Random hyperbolic coefficients on all levels up to `m`.
///
/// The amplitude of every term `u_𝛌 ψ_𝛌` in the `L^∞` normalization is
/// `2^{-(q|𝐣|_∞ + r|𝐣|_1)} ξ` with `ξ` uniform on `[1/2, 1)` and a random sign;
/// the returned values are the corresponding `L²` normalized coefficients
/// `2^{-|𝐣|_1/2 - q|𝐣|_∞ - r|𝐣|_1} (±ξ)`. For Haar this gives every level block
/// a hybrid Besov mass of order one in the `(q, r, τ, τ)` norm, `1/τ = r + 1/2`.
pub fn random_decay_coefficients(spec: &BasisSpec, n: usize, m: u32, q: f64, r: f64, seed: u64) -> Result<CoeffVector> {
    check_dim(n)?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut u = CoeffVector::new(spec, System::Hyperbolic, n, m)?;
    let levels: Vec<u32> = (spec.j0()..=m).collect();
    let mut js = vec![spec.j0(); n];
    let mut ks = vec![0usize; n];
    // level vectors and positions in lexicographic order, so the draw sequence is fixed
    loop {
        let l1: u32 = js.iter().sum();
        let linf = js.iter().copied().max().unwrap_or(0);
        let amplitude = (-(0.5 * l1 as f64 + q * linf as f64 + r * l1 as f64)).exp2();
        let sizes: Vec<usize> = js.iter().map(|&j| spec.nabla_size(j)).collect();
        ks.fill(0);
        loop {
            let xi: f64 = rng.gen_range(0.5..1.0);
            let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            u.insert_hyper(spec, HyperIndex::new(&js, &ks)?, sign * xi * amplitude)?;
            if !advance(&mut ks, |a| sizes[a]) {
                break;
            }
        }
        if !advance_levels(&mut js, &levels) {
            break;
        }
    }
    Ok(u)
}

/// A random vector with `count` nonzero coefficients on levels `j0..=m`.
///
/// Every draw picks the level (vector) uniformly, then a position uniformly
/// inside that level block, then a standard normal value; repeated picks of
/// the same index overwrite. Coarse and fine levels are therefore hit
/// equally often, which keeps ratios of level-weighted norms comparable
/// across truncation levels.
pub fn random_sparse_coefficients(
    spec: &BasisSpec,
    system: System,
    n: usize,
    m: u32,
    count: usize,
    rng: &mut impl Rng,
) -> Result<CoeffVector> {
    check_dim(n)?;
    let mut u = CoeffVector::new(spec, system, n, m)?;
    let j0 = spec.j0();
    for _ in 0..count {
        let value: f64 = rng.sample(rand_distr::StandardNormal);
        match system {
            System::Hyperbolic => {
                let js: Vec<u32> = (0..n).map(|_| rng.gen_range(j0..=m)).collect();
                let ks: Vec<usize> = js.iter().map(|&j| rng.gen_range(0..spec.nabla_size(j))).collect();
                u.insert_hyper(spec, HyperIndex::new(&js, &ks)?, value)?;
            }
            System::Isotropic => {
                let level = rng.gen_range(j0..=m);
                let e: Vec<u8> = if level == j0 {
                    vec![0; n]
                } else {
                    // a nonzero type vector
                    let t = rng.gen_range(1..(1u32 << n));
                    (0..n).map(|a| ((t >> (n - 1 - a)) & 1) as u8).collect()
                };
                let ks: Vec<usize> = e.iter().map(|&ea| rng.gen_range(0..iso_extent(spec, level, ea))).collect();
                u.insert_iso(spec, IsoIndex::new(level, &e, &ks)?, value)?;
            }
        }
    }
    Ok(u)
}

/// Odometer increment of `ks` with per-axis bounds; false once it wraps around.
fn advance(ks: &mut [usize], bound: impl Fn(usize) -> usize) -> bool {
    for a in (0..ks.len()).rev() {
        ks[a] += 1;
        if ks[a] < bound(a) {
            return true;
        }
        ks[a] = 0;
    }
    false
}

fn advance_levels(js: &mut [u32], levels: &[u32]) -> bool {
    let (lo, hi) = (levels[0], *levels.last().unwrap());
    for a in (0..js.len()).rev() {
        if js[a] < hi {
            js[a] += 1;
            return true;
        }
        js[a] = lo;
    }
    false
}
