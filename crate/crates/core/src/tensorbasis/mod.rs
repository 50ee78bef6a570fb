//! Multivariate coefficient systems on the cube `[0, 1]^n`, `n <= 3`.
//!
//! Two systems are supported. Hyperbolic (tensor product) indices carry one
//! univariate level per axis; isotropic indices `μ = (m, e, k)` carry a
//! single level and a type vector `e ∈ {0,1}^n` selecting scaling (`0`,
//! positions in `Δ_{m-1}`) or wavelet (`1`, positions in `∇_m`) factors.
//!
//! Internally both systems are laid out on dense arrays of extent `|Δ_m|` per
//! axis: the hyperbolic layout is the full 1D multiscale transform along
//! each axis, the isotropic one is the cube-by-cube decomposition.

mod change;
mod hyper;
mod io;
mod iso;

use std::collections::BTreeMap;

pub use change::{hyper_from_iso, iso_from_hyper};
pub use hyper::{hyper_forward, hyper_forward_axis_order, hyper_from_dense, hyper_inverse, hyper_to_dense};
pub use io::{parse_array, parse_coeffs, write_array, write_coeffs, ARRAY_MAGIC, COEFF_MAGIC};
pub use iso::{iso_analysis, iso_synthesis};

use crate::basis1d::BasisSpec;
use crate::error::{Error, Result};

/// Largest supported spatial dimension.
pub const MAX_DIM: usize = 3;

/// A tensor product index `𝛌 = (λ_1, …, λ_n)`.
///
/// The derived order is lexicographic in (dimension, level vector, position vector).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HyperIndex {
    n: u8,
    j: [u8; MAX_DIM],
    k: [u32; MAX_DIM],
}

impl HyperIndex {
    pub fn new(levels: &[u32], positions: &[usize]) -> Result<Self> {
        let n = levels.len();
        check_dim(n)?;
        if positions.len() != n {
            return Err(Error::dims("positions of a hyperbolic index", n, positions.len()));
        }
        let mut idx = Self {
            n: n as u8,
            j: [0; MAX_DIM],
            k: [0; MAX_DIM],
        };
        for a in 0..n {
            idx.j[a] = narrow(levels[a], "level")?;
            idx.k[a] = narrow(positions[a], "position")?;
        }
        Ok(idx)
    }

    pub fn dim(&self) -> usize {
        self.n as usize
    }

    pub fn levels(&self) -> &[u8] {
        &self.j[..self.dim()]
    }

    pub fn positions(&self) -> &[u32] {
        &self.k[..self.dim()]
    }

    /// Level along axis `a`.
    pub fn level(&self, a: usize) -> u32 {
        u32::from(self.levels()[a])
    }

    /// Position along axis `a`.
    pub fn position(&self, a: usize) -> usize {
        self.positions()[a] as usize
    }

    /// `|𝛌|_1`.
    pub fn l1(&self) -> u32 {
        self.levels().iter().map(|&j| u32::from(j)).sum()
    }

    /// `|𝛌|_∞`.
    pub fn linf(&self) -> u32 {
        self.levels().iter().copied().max().map_or(0, u32::from)
    }
}

/// An isotropic index `μ = (m, e, k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IsoIndex {
    n: u8,
    m: u32,
    e: [u8; MAX_DIM],
    k: [u32; MAX_DIM],
}

impl IsoIndex {
    pub fn new(m: u32, e: &[u8], positions: &[usize]) -> Result<Self> {
        let n = e.len();
        check_dim(n)?;
        if positions.len() != n {
            return Err(Error::dims("positions of an isotropic index", n, positions.len()));
        }
        if e.iter().any(|&x| x > 1) {
            return Err(Error::InvalidIndex(format!("type vector {e:?} is not binary")));
        }
        let mut idx = Self {
            n: n as u8,
            m,
            e: [0; MAX_DIM],
            k: [0; MAX_DIM],
        };
        idx.e[..n].copy_from_slice(e);
        for (slot, &k) in idx.k.iter_mut().zip(positions) {
            *slot = narrow(k, "position")?;
        }
        Ok(idx)
    }

    pub fn dim(&self) -> usize {
        self.n as usize
    }

    /// `|μ| = m`.
    pub fn level(&self) -> u32 {
        self.m
    }

    pub fn kind(&self) -> &[u8] {
        &self.e[..self.dim()]
    }

    pub fn positions(&self) -> &[u32] {
        &self.k[..self.dim()]
    }

    /// Position along axis `a`.
    pub fn position(&self, a: usize) -> usize {
        self.positions()[a] as usize
    }
}

fn narrow<T: TryFrom<S>, S: Copy + std::fmt::Display>(value: S, what: &str) -> Result<T> {
    T::try_from(value).map_err(|_| Error::InvalidIndex(format!("{what} {value} too large")))
}

pub(crate) fn check_dim(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DIM {
        return Err(Error::UnsupportedDimension(n));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum System {
    Hyperbolic,
    Isotropic,
}

impl System {
    pub fn name(self) -> &'static str {
        match self {
            System::Hyperbolic => "hyperbolic",
            System::Isotropic => "isotropic",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CoeffData {
    Hyperbolic(BTreeMap<HyperIndex, f64>),
    Isotropic(BTreeMap<IsoIndex, f64>),
}

/// Sparse coefficients of one system, tagged with their normalization exponent.
///
/// A coefficient with `p_norm = p` belongs to the `L^p` normalized basis
/// function; `p_norm = 2` is the plain orthonormal-type expansion.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffVector {
    n: usize,
    p_norm: f64,
    max_level: u32,
    j0: u32,
    basis: String,
    data: CoeffData,
}

impl CoeffVector {
    /// Empty coefficients of the given system.
    pub fn new(spec: &BasisSpec, system: System, n: usize, max_level: u32) -> Result<Self> {
        check_dim(n)?;
        spec.check_level(max_level)?;
        Ok(Self {
            n,
            p_norm: 2.0,
            max_level,
            j0: spec.j0(),
            basis: spec.name().to_string(),
            data: match system {
                System::Hyperbolic => CoeffData::Hyperbolic(BTreeMap::new()),
                System::Isotropic => CoeffData::Isotropic(BTreeMap::new()),
            },
        })
    }

    pub fn system(&self) -> System {
        match self.data {
            CoeffData::Hyperbolic(_) => System::Hyperbolic,
            CoeffData::Isotropic(_) => System::Isotropic,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn p_norm(&self) -> f64 {
        self.p_norm
    }

    pub fn max_level(&self) -> u32 {
        self.max_level
    }

    pub fn j0(&self) -> u32 {
        self.j0
    }

    pub fn basis_name(&self) -> &str {
        &self.basis
    }

    pub fn data(&self) -> &CoeffData {
        &self.data
    }

    pub fn len(&self) -> usize {
        match &self.data {
            CoeffData::Hyperbolic(d) => d.len(),
            CoeffData::Isotropic(d) => d.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn hyper(&self) -> Result<&BTreeMap<HyperIndex, f64>> {
        match &self.data {
            CoeffData::Hyperbolic(d) => Ok(d),
            CoeffData::Isotropic(_) => Err(Error::WrongSystem {
                expected: "hyperbolic",
                found: "isotropic",
            }),
        }
    }

    pub fn iso(&self) -> Result<&BTreeMap<IsoIndex, f64>> {
        match &self.data {
            CoeffData::Isotropic(d) => Ok(d),
            CoeffData::Hyperbolic(_) => Err(Error::WrongSystem {
                expected: "isotropic",
                found: "hyperbolic",
            }),
        }
    }

    pub fn values(&self) -> Box<dyn Iterator<Item = f64> + '_> {
        match &self.data {
            CoeffData::Hyperbolic(d) => Box::new(d.values().copied()),
            CoeffData::Isotropic(d) => Box::new(d.values().copied()),
        }
    }

    /// Inserts a hyperbolic coefficient after checking it against `spec` and the truncation.
    pub fn insert_hyper(&mut self, spec: &BasisSpec, idx: HyperIndex, value: f64) -> Result<()> {
        self.check_hyper(spec, &idx)?;
        match &mut self.data {
            CoeffData::Hyperbolic(d) => {
                d.insert(idx, value);
                Ok(())
            }
            CoeffData::Isotropic(_) => Err(Error::WrongSystem {
                expected: "isotropic",
                found: "hyperbolic",
            }),
        }
    }

    /// Inserts an isotropic coefficient after checking it against `spec` and the truncation.
    pub fn insert_iso(&mut self, spec: &BasisSpec, idx: IsoIndex, value: f64) -> Result<()> {
        self.check_iso(spec, &idx)?;
        match &mut self.data {
            CoeffData::Isotropic(d) => {
                d.insert(idx, value);
                Ok(())
            }
            CoeffData::Hyperbolic(_) => Err(Error::WrongSystem {
                expected: "hyperbolic",
                found: "isotropic",
            }),
        }
    }

    fn check_hyper(&self, spec: &BasisSpec, idx: &HyperIndex) -> Result<()> {
        if idx.dim() != self.n {
            return Err(Error::dims("index dimension", self.n, idx.dim()));
        }
        for a in 0..idx.dim() {
            let (j, k) = (idx.level(a), idx.position(a));
            if j < spec.j0() || j > self.max_level {
                return Err(Error::InvalidIndex(format!(
                    "level {j} outside {}..={}",
                    spec.j0(),
                    self.max_level
                )));
            }
            if k >= spec.nabla_size(j) {
                return Err(Error::InvalidIndex(format!("position {k} out of range at level {j}")));
            }
        }
        Ok(())
    }

    fn check_iso(&self, spec: &BasisSpec, idx: &IsoIndex) -> Result<()> {
        if idx.dim() != self.n {
            return Err(Error::dims("index dimension", self.n, idx.dim()));
        }
        let m = idx.level();
        if m < spec.j0() || m > self.max_level {
            return Err(Error::InvalidIndex(format!(
                "level {m} outside {}..={}",
                spec.j0(),
                self.max_level
            )));
        }
        let all_zero = idx.kind().iter().all(|&e| e == 0);
        if (m == spec.j0()) != all_zero {
            return Err(Error::InvalidIndex(format!(
                "type vector {:?} not allowed at level {m}",
                idx.kind()
            )));
        }
        for (a, &e) in idx.kind().iter().enumerate() {
            let k = idx.position(a);
            let size = iso_extent(spec, m, e);
            if k >= size {
                return Err(Error::InvalidIndex(format!("position {k} out of range at level {m}")));
            }
        }
        Ok(())
    }

    /// The same coefficients in the `L^{new_p}` normalization.
    ///
    /// Hyperbolic coefficients are multiplied by `2^{|𝛌|_1 (1/p - 1/new_p)}`,
    /// isotropic ones by `2^{n|μ| (1/p - 1/new_p)}`, with `1/∞ = 0`.
    pub fn rescale(&self, new_p: f64) -> Result<CoeffVector> {
        check_exponent(new_p)?;
        let shift = inv(self.p_norm) - inv(new_p);
        let mut out = self.clone();
        out.p_norm = new_p;
        if shift == 0.0 {
            return Ok(out);
        }
        match &mut out.data {
            CoeffData::Hyperbolic(d) => {
                for (idx, v) in d.iter_mut() {
                    *v *= (shift * idx.l1() as f64).exp2();
                }
            }
            CoeffData::Isotropic(d) => {
                let n = self.n as f64;
                for (idx, v) in d.iter_mut() {
                    *v *= (shift * n * idx.level() as f64).exp2();
                }
            }
        }
        Ok(out)
    }

    /// Drops entries equal to zero.
    pub fn prune_zeros(&mut self) {
        match &mut self.data {
            CoeffData::Hyperbolic(d) => d.retain(|_, v| *v != 0.0),
            CoeffData::Isotropic(d) => d.retain(|_, v| *v != 0.0),
        }
    }

    /// Euclidean norm of the stored values.
    pub fn l2(&self) -> f64 {
        self.values().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub(crate) fn with_p_norm(mut self, p: f64) -> Self {
        self.p_norm = p;
        self
    }

    pub(crate) fn with_data(&self, data: CoeffData) -> CoeffVector {
        CoeffVector {
            data,
            ..self.clone_meta()
        }
    }

    fn clone_meta(&self) -> CoeffVector {
        CoeffVector {
            n: self.n,
            p_norm: self.p_norm,
            max_level: self.max_level,
            j0: self.j0,
            basis: self.basis.clone(),
            data: CoeffData::Hyperbolic(BTreeMap::new()),
        }
    }

    pub(crate) fn check_basis(&self, spec: &BasisSpec) -> Result<()> {
        if self.basis != spec.name() || self.j0 != spec.j0() {
            return Err(Error::InvalidArgument(format!(
                "coefficients belong to basis `{}` (j0 = {}), not `{}` (j0 = {})",
                self.basis,
                self.j0,
                spec.name(),
                spec.j0()
            )));
        }
        spec.check_level(self.max_level)
    }
}

/// `1/p` with `1/∞ = 0`.
pub(crate) fn inv(p: f64) -> f64 {
    if p.is_infinite() {
        0.0
    } else {
        1.0 / p
    }
}

pub fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p <= 0.0 {
        return Err(Error::InvalidExponent(p));
    }
    Ok(())
}

/// Extent of one isotropic factor: `|Δ_{m-1}|` for `e = 0` (or `|Δ_{j0}|` at `m = j0`), `|∇_m|` for `e = 1`.
pub(crate) fn iso_extent(spec: &BasisSpec, m: u32, e: u8) -> usize {
    if m == spec.j0() {
        spec.delta_size(m)
    } else if e == 0 {
        spec.delta_size(m - 1)
    } else {
        spec.nabla_size(m)
    }
}

/// Cardinalities of the hyperbolic index set truncated at level `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DimensionAudit {
    /// `|{𝛌 : |𝛌|_∞ = m}|`.
    pub finest: usize,
    /// `|{𝛌 : |𝛌|_∞ < m}|`.
    pub coarser: usize,
    /// `|Δ_m|^n`.
    pub single_scale: usize,
}

impl DimensionAudit {
    pub fn holds(&self) -> bool {
        self.finest + self.coarser == self.single_scale
    }
}

/// Counts hyperbolic indices level vector by level vector.
pub fn dimension_audit(spec: &BasisSpec, n: usize, m: u32) -> Result<DimensionAudit> {
    check_dim(n)?;
    spec.check_level(m)?;
    let levels: Vec<u32> = (spec.j0()..=m).collect();
    let mut finest = 0;
    let mut coarser = 0;
    let mut count = |js: &[u32]| {
        let size: usize = js.iter().map(|&j| spec.nabla_size(j)).product();
        if js.iter().copied().max() == Some(m) {
            finest += size;
        } else {
            coarser += size;
        }
    };
    for_each_level_vector(&levels, n, &mut count);
    Ok(DimensionAudit {
        finest,
        coarser,
        single_scale: spec.delta_size(m).pow(n as u32),
    })
}

fn for_each_level_vector(levels: &[u32], n: usize, f: &mut impl FnMut(&[u32])) {
    let mut js = vec![0u32; n];
    fn rec(levels: &[u32], js: &mut [u32], axis: usize, f: &mut impl FnMut(&[u32])) {
        if axis == js.len() {
            f(js);
            return;
        }
        for &j in levels {
            js[axis] = j;
            rec(levels, js, axis + 1, f);
        }
    }
    rec(levels, &mut js, 0, f);
}
