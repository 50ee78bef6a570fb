//! Univariate multiscale transforms `T_m` and `T̃_m`.
//!
//! Multiscale coefficient vectors are stored in the block order
//! `[c_{j0}, d_{j0+1}, …, d_m]`, which is also the column order of `T_m`.
//! `T_m` maps them to single-scale coefficients `c_m`; the dual transform
//! applied as `T̃_m^T` goes the other way.

use crate::band::BandMatrix;
use crate::basis1d::{BasisSpec, MaskSet};
use crate::error::{Error, Result};

/// Multiscale coefficients `(c_{j0}, d_{j0+1}, …, d_m)` stored contiguously.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiscaleVector {
    j0: u32,
    m: u32,
    /// Start of each block; `offsets[i]` belongs to level `j0 + i`, last entry is the total length.
    offsets: Vec<usize>,
    data: Vec<f64>,
}

impl MultiscaleVector {
    pub fn from_vec(spec: &BasisSpec, m: u32, data: Vec<f64>) -> Result<Self> {
        spec.check_level(m)?;
        let mut offsets = vec![0];
        for j in spec.j0()..=m {
            offsets.push(offsets.last().unwrap() + spec.nabla_size(j));
        }
        let total = *offsets.last().unwrap();
        if data.len() != total {
            return Err(Error::dims(format!("multiscale vector at level {m}"), total, data.len()));
        }
        Ok(Self {
            j0: spec.j0(),
            m,
            offsets,
            data,
        })
    }

    pub fn zeros(spec: &BasisSpec, m: u32) -> Result<Self> {
        spec.check_level(m)?;
        Self::from_vec(spec, m, vec![0.0; spec.delta_size(m)])
    }

    pub fn j0(&self) -> u32 {
        self.j0
    }

    pub fn level(&self) -> u32 {
        self.m
    }

    /// Block of level `j` (`c_{j0}` for `j = j0`).
    pub fn block(&self, j: u32) -> &[f64] {
        let i = (j - self.j0) as usize;
        &self.data[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn block_mut(&mut self, j: u32) -> &mut [f64] {
        let i = (j - self.j0) as usize;
        &mut self.data[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }
}

/// The masks of levels `j0 + 1 ..= m`, fetched once and reused for many vectors.
#[derive(Clone, Debug)]
pub struct Cascade {
    j0: u32,
    m: u32,
    masks: Vec<MaskSet>,
    len: usize,
}

impl Cascade {
    pub fn new(spec: &BasisSpec, m: u32) -> Result<Self> {
        spec.check_level(m)?;
        let masks = (spec.j0() + 1..=m)
            .map(|j| spec.masks(j).map(|c| c.into_owned()))
            .collect::<Result<_>>()?;
        Ok(Self {
            j0: spec.j0(),
            m,
            masks,
            len: spec.delta_size(m),
        })
    }

    pub fn level(&self) -> u32 {
        self.m
    }

    pub fn j0(&self) -> u32 {
        self.j0
    }

    /// `|Δ_m|`.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub(crate) fn level_masks(&self, j: u32) -> &MaskSet {
        &self.masks[(j - self.j0 - 1) as usize]
    }

    fn upto(&self, level: u32) -> &[MaskSet] {
        &self.masks[..(level - self.j0) as usize]
    }

    /// In place `buf ← T̃_m^T buf`; `scratch` must hold at least `|Δ_m|` values.
    pub fn forward_in_place(&self, buf: &mut [f64], scratch: &mut [f64]) {
        self.forward_upto(self.m, buf, scratch)
    }

    /// In place `buf ← T_m buf`.
    pub fn inverse_in_place(&self, buf: &mut [f64], scratch: &mut [f64]) {
        self.inverse_upto(self.m, buf, scratch)
    }

    /// `T̃_l^T` for a level `j0 <= l <= m`; `buf` has length `|Δ_l|`.
    pub fn forward_upto(&self, level: u32, buf: &mut [f64], scratch: &mut [f64]) {
        for set in self.upto(level).iter().rev() {
            analysis_step(set, buf, scratch);
        }
    }

    /// `T_l` for a level `j0 <= l <= m`; `buf` has length `|Δ_l|`.
    pub fn inverse_upto(&self, level: u32, buf: &mut [f64], scratch: &mut [f64]) {
        for set in self.upto(level) {
            synthesis_step(set, buf, scratch);
        }
    }
}

/// One analysis step on the leading `|Δ_j|` entries: `c_j ↦ (M̃_{j,0}^T c_j, M̃_{j,1}^T c_j)`.
pub(crate) fn analysis_step(set: &MaskSet, buf: &mut [f64], scratch: &mut [f64]) {
    let n = set.primal_coarse.rows();
    let nc = set.dual_coarse.cols();
    let (lo, hi) = scratch[..n].split_at_mut(nc);
    set.dual_coarse.tr_mul_into(&buf[..n], lo);
    set.dual_detail.tr_mul_into(&buf[..n], hi);
    buf[..n].copy_from_slice(&scratch[..n]);
}

/// One synthesis step on the leading `|Δ_j|` entries: `(c_{j-1}, d_j) ↦ M_{j,0} c_{j-1} + M_{j,1} d_j`.
pub(crate) fn synthesis_step(set: &MaskSet, buf: &mut [f64], scratch: &mut [f64]) {
    let n = set.primal_coarse.rows();
    let nc = set.primal_coarse.cols();
    let out = &mut scratch[..n];
    out.fill(0.0);
    set.primal_coarse.mul_acc(&buf[..nc], out);
    set.primal_detail.mul_acc(&buf[nc..n], out);
    buf[..n].copy_from_slice(out);
}

/// Finest level `m` with `|Δ_m| = len`.
pub fn level_for_length(spec: &BasisSpec, len: usize) -> Result<u32> {
    (spec.j0()..=spec.max_level())
        .take_while(|&j| spec.delta_size(j) <= len)
        .find(|&j| spec.delta_size(j) == len)
        .ok_or_else(|| Error::dims("length not equal to |Δ_m| for any level", spec.delta_size(spec.j0()), len))
}

/// `T̃_m^T c_m`, with `m` determined by the length of `c_m`.
pub fn forward(spec: &BasisSpec, c_m: &[f64]) -> Result<MultiscaleVector> {
    let m = level_for_length(spec, c_m.len())?;
    let cascade = Cascade::new(spec, m)?;
    let mut buf = c_m.to_vec();
    let mut scratch = vec![0.0; buf.len()];
    cascade.forward_in_place(&mut buf, &mut scratch);
    MultiscaleVector::from_vec(spec, m, buf)
}

/// `T_m` applied to the concatenated blocks.
pub fn inverse(spec: &BasisSpec, ms: &MultiscaleVector) -> Result<Vec<f64>> {
    if ms.j0() != spec.j0() {
        return Err(Error::InvalidArgument(format!(
            "multiscale vector starts at level {}, basis at {}",
            ms.j0(),
            spec.j0()
        )));
    }
    let cascade = Cascade::new(spec, ms.level())?;
    if ms.as_slice().len() != cascade.len() {
        return Err(Error::dims("multiscale vector", cascade.len(), ms.as_slice().len()));
    }
    let mut buf = ms.as_slice().to_vec();
    let mut scratch = vec![0.0; buf.len()];
    cascade.inverse_in_place(&mut buf, &mut scratch);
    Ok(buf)
}

/// Explicit `(T_m, T̃_m)` as products of the padded one-level factors.
pub fn build_transform(spec: &BasisSpec, m: u32) -> Result<(BandMatrix, BandMatrix)> {
    spec.check_level(m)?;
    let n = spec.delta_size(m);
    let mut t = BandMatrix::identity(n);
    let mut td = BandMatrix::identity(n);
    for l in spec.j0() + 1..=m {
        let set = spec.masks(l)?;
        let f = set.primal_coarse.hstack(&set.primal_detail)?.pad_identity(n)?;
        let fd = set.dual_coarse.hstack(&set.dual_detail)?.pad_identity(n)?;
        t = f.matmul(&t)?;
        td = fd.matmul(&td)?;
    }
    Ok((t, td))
}

/// Worst ratio of an entry of `T_m` to its decay envelope.
///
/// Row `ℓ` is the level-`m` scaling function, column `λ = (j, k)` a wavelet
/// (or coarsest scaling function). With `h = |∇_j| / |Δ_m|` the relative
/// resolution of the column, the envelope is `h^{1/2} (1 + |k - ⌊hℓ⌋|)^{-alpha}`;
/// for dyadic bases `h = 2^{j'-m}` where `j'` is the resolution of `ψ_λ`.
/// Entries that vanish contribute nothing.
pub fn check_entry_decay(spec: &BasisSpec, m: u32, alpha: f64) -> Result<f64> {
    if m <= spec.j0() {
        return Err(Error::LevelBelowCoarsest { level: m, j0: spec.j0() + 1 });
    }
    let (t, _) = build_transform(spec, m)?;
    let rows = spec.delta_size(m) as f64;
    // column -> (position k within its block, relative resolution h)
    let mut columns = Vec::with_capacity(t.cols());
    for j in spec.j0()..=m {
        let size = spec.nabla_size(j);
        let h = size as f64 / rows;
        columns.extend((0..size).map(|k| (k, h)));
    }
    let mut worst = 0.0f64;
    for (row, col, v) in t.triplets() {
        let (k, h) = columns[col];
        let centre = (h * row as f64).floor();
        let envelope = h.sqrt() * (1.0 + (k as f64 - centre).abs()).powf(-alpha);
        worst = worst.max(v.abs() / envelope);
    }
    Ok(worst)
}
