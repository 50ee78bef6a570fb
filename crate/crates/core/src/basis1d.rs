//! Univariate biorthogonal multiscale bases on `[0, 1]`.
//!
//! A basis is described by its refinement masks: for every level `j > j0`
//! four sparse matrices `M_{j,0}`, `M_{j,1}` (primal) and `M̃_{j,0}`,
//! `M̃_{j,1}` (dual) with
//!
//! ```text
//! Φ_{j-1} = Φ_j M_{j,0},   Ψ_j = Φ_j M_{j,1}
//! ```
//!
//! and `[M̃_{j,0}, M̃_{j,1}]^T [M_{j,0}, M_{j,1}] = I`. The orthonormal Haar
//! basis is built in; anything else is supplied through [`make_mask_basis`]
//! or read from a mask file with [`read_mask_file`].

use std::borrow::Cow;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use crate::band::BandMatrix;
use crate::error::{Error, Result};

/// Decay exponent recorded for compactly supported bases.
pub const COMPACT_SUPPORT_ALPHA: f64 = 64.0;

/// Largest admissible row span of a single mask column.
pub const MAX_MASK_SPAN: usize = 64;

/// Tolerance of the block identities for user supplied masks.
pub const MASK_TOLERANCE: f64 = 1e-10;

/// Entries of inverted dual masks below this modulus are dropped.
pub const DUAL_DROP_TOLERANCE: f64 = 1e-14;

/// Finest level the built-in Haar basis will produce masks for.
pub const HAAR_MAX_LEVEL: u32 = 26;

/// The four refinement masks of one level.
#[derive(Clone, Debug, PartialEq)]
pub struct MaskSet {
    /// `M_{j,0}`, size `|Δ_j| x |Δ_{j-1}|`.
    pub primal_coarse: BandMatrix,
    /// `M_{j,1}`, size `|Δ_j| x |∇_j|`.
    pub primal_detail: BandMatrix,
    /// `M̃_{j,0}`.
    pub dual_coarse: BandMatrix,
    /// `M̃_{j,1}`.
    pub dual_detail: BandMatrix,
}

impl MaskSet {
    pub fn haar(j: u32) -> Self {
        let half = 1usize << (j - 1);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let coarse: Vec<_> = (0..half)
            .flat_map(|k| [(2 * k, k, h), (2 * k + 1, k, h)])
            .collect();
        let detail: Vec<_> = (0..half)
            .flat_map(|k| [(2 * k, k, h), (2 * k + 1, k, -h)])
            .collect();
        let coarse = BandMatrix::from_triplets(2 * half, half, coarse).expect("haar mask");
        let detail = BandMatrix::from_triplets(2 * half, half, detail).expect("haar mask");
        Self {
            primal_coarse: coarse.clone(),
            primal_detail: detail.clone(),
            dual_coarse: coarse,
            dual_detail: detail,
        }
    }

    /// Completes primal masks with the dual masks of the inverse two-scale matrix.
    ///
    /// `[M̃0, M̃1]` is taken as `([M0, M1]^{-1})^T`; entries below `1e-14` in
    /// modulus are dropped. Fails when `[M0, M1]` is not square or singular.
    pub fn from_primal(primal_coarse: BandMatrix, primal_detail: BandMatrix) -> Result<Self> {
        let rows = primal_coarse.rows();
        let full = primal_coarse.hstack(&primal_detail)?;
        if full.cols() != rows {
            return Err(Error::dims("columns of [M0, M1]", rows, full.cols()));
        }
        let inverse = full
            .to_dense()
            .try_inverse()
            .ok_or_else(|| Error::InvalidArgument("two-scale matrix [M0, M1] is singular".into()))?;
        let dual = inverse.transpose();
        let coarse = primal_coarse.cols();
        let block = |range: std::ops::Range<usize>| {
            let triplets = range
                .clone()
                .flat_map(|c| (0..rows).map(move |r| (r, c)))
                .filter_map(|(r, c)| {
                    let v = dual[(r, c)];
                    (v.abs() >= DUAL_DROP_TOLERANCE).then_some((r, c - range.start, v))
                })
                .collect();
            BandMatrix::from_triplets(rows, range.len(), triplets)
        };
        Ok(Self {
            dual_coarse: block(0..coarse)?,
            dual_detail: block(coarse..rows)?,
            primal_coarse,
            primal_detail,
        })
    }

    /// Completes a detail mask over box scaling functions (Haar `M0`).
    ///
    /// With the Haar detail mask `H1`, `A = M0ᵀM1` and `B = H1ᵀM1`, the duals
    /// are `M̃1 = H1 B^{-T}` and `M̃0 = M0 - M̃1 Aᵀ`, so no inversion of the full
    /// two-scale matrix is needed. `B` is inverted directly when diagonal and
    /// densely otherwise.
    pub fn from_haar_coarse(primal_detail: BandMatrix) -> Result<Self> {
        let rows = primal_detail.rows();
        if rows < 2 || !rows.is_power_of_two() || primal_detail.cols() != rows / 2 {
            return Err(Error::dims("detail mask over box functions", rows / 2, primal_detail.cols()));
        }
        let haar = Self::haar(rows.trailing_zeros());
        let a = haar.primal_coarse.transpose().matmul(&primal_detail)?;
        let b = haar.primal_detail.transpose().matmul(&primal_detail)?;
        let b_inv = if b.triplets().all(|(r, c, _)| r == c) && b.nnz() == b.rows() {
            let triplets = b.triplets().map(|(r, c, v)| (r, c, 1.0 / v)).collect();
            BandMatrix::from_triplets(b.rows(), b.cols(), triplets)?
        } else {
            let dense = b
                .to_dense()
                .try_inverse()
                .ok_or_else(|| Error::InvalidArgument("detail mask is not complementary to Haar".into()))?;
            let triplets = (0..b.rows())
                .flat_map(|r| (0..b.cols()).map(move |c| (r, c)))
                .filter_map(|(r, c)| {
                    let v = dense[(r, c)];
                    (v.abs() >= DUAL_DROP_TOLERANCE).then_some((r, c, v))
                })
                .collect();
            BandMatrix::from_triplets(b.rows(), b.cols(), triplets)?
        };
        let dual_detail = haar.primal_detail.matmul(&b_inv.transpose())?;
        let dual_coarse = haar.primal_coarse.add_scaled(&dual_detail.matmul(&a.transpose())?, -1.0)?;
        Ok(Self {
            primal_coarse: haar.primal_coarse,
            primal_detail,
            dual_coarse: dual_coarse.pruned(DUAL_DROP_TOLERANCE),
            dual_detail: dual_detail.pruned(DUAL_DROP_TOLERANCE),
        })
    }

    /// Largest deviation of the four biorthogonality blocks from `I`, `I`, `0`, `0`,
    /// together with the name of the worst block.
    pub fn block_defect(&self) -> Result<(f64, &'static str)> {
        let dual_c = self.dual_coarse.transpose();
        let dual_d = self.dual_detail.transpose();
        let blocks = [
            ("M̃0ᵀM0 = I", dual_c.matmul(&self.primal_coarse)?, true),
            ("M̃1ᵀM1 = I", dual_d.matmul(&self.primal_detail)?, true),
            ("M̃0ᵀM1 = 0", dual_c.matmul(&self.primal_detail)?, false),
            ("M̃1ᵀM0 = 0", dual_d.matmul(&self.primal_coarse)?, false),
        ];
        let mut worst = (0.0, blocks[0].0);
        for (name, b, is_identity) in &blocks {
            let defect = if *is_identity {
                b.identity_defect()
            } else {
                b.triplets().map(|(_, _, v)| v.abs()).fold(0.0, f64::max)
            };
            if defect > worst.0 {
                worst = (defect, name);
            }
        }
        Ok(worst)
    }

    fn all(&self) -> [(&'static str, &BandMatrix); 4] {
        [
            ("M0", &self.primal_coarse),
            ("M1", &self.primal_detail),
            ("M~0", &self.dual_coarse),
            ("M~1", &self.dual_detail),
        ]
    }
}

#[derive(Debug)]
enum MaskSource {
    Haar,
    /// Masks for levels `j0 + 1 ..= j0 + table.len()`.
    Table {
        coarse_size: usize,
        table: Vec<MaskSet>,
    },
}

/// Scalar parameters of a basis.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisParams {
    pub name: String,
    /// Polynomial exactness of the primal side.
    pub d: u32,
    /// Polynomial exactness of the dual side (vanishing moments of the wavelets).
    pub d_tilde: u32,
    pub gamma: f64,
    pub gamma_tilde: f64,
    pub alpha: f64,
    pub j0: u32,
}

impl BasisParams {
    fn validate(&self) -> Result<()> {
        if !(self.alpha > 1.0) {
            return Err(Error::InvalidArgument(format!("alpha = {} must exceed 1", self.alpha)));
        }
        if !(self.gamma > 0.0 && self.gamma_tilde > 0.0) {
            return Err(Error::InvalidArgument(
                "regularities gamma and gamma_tilde must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// A validated univariate multiscale basis. Cheap to clone.
#[derive(Clone, Debug)]
pub struct BasisSpec {
    params: BasisParams,
    max_level: u32,
    masks: Arc<MaskSource>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IndexKind {
    Scaling,
    Wavelet,
}

/// A univariate index `λ = (j, k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LevelIndex {
    pub j: u32,
    pub k: usize,
    pub kind: IndexKind,
}

impl LevelIndex {
    pub fn scaling(j: u32, k: usize) -> Self {
        Self {
            j,
            k,
            kind: IndexKind::Scaling,
        }
    }

    pub fn wavelet(j: u32, k: usize) -> Self {
        Self {
            j,
            k,
            kind: IndexKind::Wavelet,
        }
    }

    /// The level `|λ|`.
    pub fn level(&self) -> u32 {
        self.j
    }
}

/// The orthonormal Haar basis with coarsest level `j0`.
pub fn make_haar_basis(j0: u32) -> BasisSpec {
    BasisSpec {
        params: BasisParams {
            name: "haar".into(),
            d: 1,
            d_tilde: 1,
            gamma: 0.5,
            gamma_tilde: 0.5,
            alpha: COMPACT_SUPPORT_ALPHA,
            j0,
        },
        max_level: HAAR_MAX_LEVEL,
        masks: Arc::new(MaskSource::Haar),
    }
}

/// Primal wavelet mask of the boundary adapted `(d, d̃) = (1, 3)` basis on level `j >= 3`.
///
/// Interior columns refine to `(-1, -1, 8, -8, 1, 1)/8` on six consecutive
/// level-`j` scaling functions, the two boundary columns to
/// `(5, -11, 4, 4, -1, -1)/8` and its mirror image.
pub fn dku13_detail_mask(j: u32) -> Result<BandMatrix> {
    if j < 3 {
        return Err(Error::LevelBelowCoarsest { level: j, j0: 3 });
    }
    let rows = 1usize << j;
    let cols = rows / 2;
    const LEFT: [f64; 6] = [5.0, -11.0, 4.0, 4.0, -1.0, -1.0];
    const INTERIOR: [f64; 6] = [-1.0, -1.0, 8.0, -8.0, 1.0, 1.0];
    let mut triplets = Vec::with_capacity(6 * cols);
    for (i, v) in LEFT.iter().enumerate() {
        triplets.push((i, 0, v / 8.0));
        triplets.push((rows - 1 - i, cols - 1, v / 8.0));
    }
    for k in 1..cols - 1 {
        for (i, v) in INTERIOR.iter().enumerate() {
            triplets.push((2 * k - 2 + i, k, v / 8.0));
        }
    }
    BandMatrix::from_triplets(rows, cols, triplets)
}

/// The `(1, 3)` basis with box scaling functions on levels `2 ..= max_level`.
///
/// Dual masks come from [`MaskSet::from_haar_coarse`].
pub fn make_dku13_basis(max_level: u32) -> Result<BasisSpec> {
    if max_level < 3 {
        return Err(Error::InvalidArgument(format!("max_level {max_level} must be at least 3")));
    }
    let mut masks = BTreeMap::new();
    for j in 3..=max_level {
        masks.insert(j, MaskSet::from_haar_coarse(dku13_detail_mask(j)?)?);
    }
    make_mask_basis(
        masks,
        BasisParams {
            name: "dku13".into(),
            d: 1,
            d_tilde: 3,
            gamma: 0.5,
            gamma_tilde: 0.5,
            alpha: COMPACT_SUPPORT_ALPHA,
            j0: 2,
        },
    )
}

/// Builds a basis from explicit masks for the levels `j0 + 1 ..= max`.
///
/// Validation checks level contiguity, all matrix dimensions, the four
/// biorthogonality blocks (within [`MASK_TOLERANCE`]) and the column span
/// bound [`MAX_MASK_SPAN`].
pub fn make_mask_basis(masks: BTreeMap<u32, MaskSet>, params: BasisParams) -> Result<BasisSpec> {
    let spec = make_mask_basis_unchecked(masks, params)?;
    if let MaskSource::Table { table, .. } = spec.masks.as_ref() {
        for (i, set) in table.iter().enumerate() {
            let level = spec.params.j0 + 1 + i as u32;
            let (defect, block) = set.block_defect()?;
            if defect > MASK_TOLERANCE {
                return Err(Error::MaskInconsistent {
                    level,
                    block,
                    defect,
                });
            }
            for (_, m) in set.all() {
                let span = m.column_span();
                if span > MAX_MASK_SPAN {
                    return Err(Error::BandwidthExceeded {
                        level,
                        span,
                        limit: MAX_MASK_SPAN,
                    });
                }
            }
        }
    }
    Ok(spec)
}

/// Like [`make_mask_basis`] but only checks dimensions, not biorthogonality.
///
/// Meant for probing the verification routines with deliberately broken masks.
pub fn make_mask_basis_unchecked(
    masks: BTreeMap<u32, MaskSet>,
    params: BasisParams,
) -> Result<BasisSpec> {
    params.validate()?;
    let j0 = params.j0;
    let mut table = Vec::with_capacity(masks.len());
    let mut prev_rows: Option<usize> = None;
    for (expected, (level, set)) in (j0 + 1..).zip(masks) {
        if level != expected {
            return Err(Error::InvalidArgument(format!(
                "mask levels must be contiguous from {}: expected {expected}, found {level}",
                j0 + 1
            )));
        }
        let rows = set.primal_coarse.rows();
        let (coarse, detail) = (set.primal_coarse.cols(), set.primal_detail.cols());
        for (name, m) in set.all() {
            if m.rows() != rows {
                return Err(Error::dims(format!("rows of {name} at level {level}"), rows, m.rows()));
            }
        }
        if set.dual_coarse.cols() != coarse {
            return Err(Error::dims(format!("columns of M~0 at level {level}"), coarse, set.dual_coarse.cols()));
        }
        if set.dual_detail.cols() != detail {
            return Err(Error::dims(format!("columns of M~1 at level {level}"), detail, set.dual_detail.cols()));
        }
        if coarse + detail != rows {
            return Err(Error::dims(format!("|Δ_{{j-1}}| + |∇_j| at level {level}"), rows, coarse + detail));
        }
        if let Some(prev) = prev_rows {
            if prev != coarse {
                return Err(Error::dims(format!("|Δ_{}| between levels", level - 1), prev, coarse));
            }
        }
        prev_rows = Some(rows);
        table.push(set);
    }
    if table.is_empty() {
        return Err(Error::InvalidArgument("no masks supplied".into()));
    }
    let coarse_size = table[0].primal_coarse.cols();
    Ok(BasisSpec {
        max_level: j0 + table.len() as u32,
        params,
        masks: Arc::new(MaskSource::Table { coarse_size, table }),
    })
}

impl BasisSpec {
    pub fn params(&self) -> &BasisParams {
        &self.params
    }

    pub fn name(&self) -> &str {
        &self.params.name
    }

    pub fn j0(&self) -> u32 {
        self.params.j0
    }

    pub fn alpha(&self) -> f64 {
        self.params.alpha
    }

    pub fn gamma(&self) -> f64 {
        self.params.gamma
    }

    pub fn gamma_tilde(&self) -> f64 {
        self.params.gamma_tilde
    }

    /// Finest level for which masks are available.
    pub fn max_level(&self) -> u32 {
        self.max_level
    }

    pub fn is_haar(&self) -> bool {
        matches!(self.masks.as_ref(), MaskSource::Haar)
    }

    pub(crate) fn check_level(&self, j: u32) -> Result<()> {
        if j < self.j0() {
            return Err(Error::LevelBelowCoarsest { level: j, j0: self.j0() });
        }
        if j > self.max_level {
            return Err(Error::LevelBeyondMasks { level: j, max: self.max_level });
        }
        Ok(())
    }

    /// `|Δ_j|`.
    pub fn delta_size(&self, j: u32) -> usize {
        match self.masks.as_ref() {
            MaskSource::Haar => 1usize << j,
            MaskSource::Table { coarse_size, table } => {
                if j <= self.j0() {
                    *coarse_size
                } else {
                    table[(j - self.j0() - 1) as usize].primal_coarse.rows()
                }
            }
        }
    }

    /// `|∇_j|`, with `∇_{j0} = Δ_{j0}`.
    pub fn nabla_size(&self, j: u32) -> usize {
        if j <= self.j0() {
            return self.delta_size(self.j0());
        }
        match self.masks.as_ref() {
            MaskSource::Haar => 1usize << (j - 1),
            MaskSource::Table { table, .. } => table[(j - self.j0() - 1) as usize].primal_detail.cols(),
        }
    }

    /// Offset of the block `∇_j` inside a multiscale vector ordered
    /// `[Φ_{j0}, Ψ_{j0+1}, …]`; equals `|Δ_{j-1}|` for `j > j0`.
    pub fn block_offset(&self, j: u32) -> usize {
        if j <= self.j0() {
            0
        } else {
            self.delta_size(j - 1)
        }
    }

    /// The masks of level `j > j0`.
    pub fn masks(&self, j: u32) -> Result<Cow<'_, MaskSet>> {
        if j <= self.j0() {
            return Err(Error::LevelBelowCoarsest { level: j, j0: self.j0() + 1 });
        }
        self.check_level(j)?;
        Ok(match self.masks.as_ref() {
            MaskSource::Haar => Cow::Owned(MaskSet::haar(j)),
            MaskSource::Table { table, .. } => Cow::Borrowed(&table[(j - self.j0() - 1) as usize]),
        })
    }

    /// Checks that `idx` is a valid index of this basis.
    pub fn check_index(&self, idx: &LevelIndex) -> Result<()> {
        self.check_level(idx.j)?;
        let size = match idx.kind {
            IndexKind::Scaling => self.delta_size(idx.j),
            IndexKind::Wavelet => self.nabla_size(idx.j),
        };
        if idx.k >= size {
            return Err(Error::InvalidIndex(format!(
                "position {} out of range 0..{size} at level {}",
                idx.k, idx.j
            )));
        }
        Ok(())
    }
}

/// Values of `φ_idx` or `ψ_idx` at the midpoints `(k + 1/2) / |Δ_m|` of the level-`m` grid.
///
/// The function is refined to level `m` through the masks and the level-`m`
/// scaling functions are replaced by their cell values `|Δ_m|^{1/2}`; this is
/// exact for piecewise constant primal bases such as Haar.
pub fn evaluate_on_dyadic_grid(spec: &BasisSpec, idx: LevelIndex, m: u32) -> Result<Vec<f64>> {
    spec.check_index(&idx)?;
    if m <= idx.j {
        return Err(Error::LevelTooCoarse { grid: m, level: idx.j });
    }
    spec.check_level(m)?;
    let mut c = vec![0.0; spec.delta_size(idx.j)];
    let mut start = idx.j;
    match idx.kind {
        IndexKind::Wavelet if idx.j > spec.j0() => {
            let mut e = vec![0.0; spec.nabla_size(idx.j)];
            e[idx.k] = 1.0;
            c = spec.masks(idx.j)?.primal_detail.mul_vec(&e)?;
        }
        _ => {
            c[idx.k] = 1.0;
        }
    }
    while start < m {
        start += 1;
        c = spec.masks(start)?.primal_coarse.mul_vec(&c)?;
    }
    let scale = (c.len() as f64).sqrt();
    Ok(c.into_iter().map(|v| v * scale).collect())
}

/// Parses a mask file.
///
/// Layout: optional metadata lines `% key=value …` (keys `name`, `d`,
/// `d_tilde`, `gamma`, `gamma_tilde`, `alpha`, `j0`), then blocks separated by
/// a line `#`. Each block is a header `level rows cols` followed by
/// `row col value` triples. Blocks come in groups of four per level in the
/// order `M_{j,0}`, `M_{j,1}`, `M̃_{j,0}`, `M̃_{j,1}`.
pub fn parse_mask_file(text: &str, default_name: &str) -> Result<BasisSpec> {
    let mut meta: BTreeMap<String, String> = BTreeMap::new();
    let mut blocks: Vec<(u32, BandMatrix)> = Vec::new();
    let mut current: Option<(usize, u32, usize, usize, Vec<(usize, usize, f64)>)> = None;

    let finish = |cur: Option<(usize, u32, usize, usize, Vec<(usize, usize, f64)>)>,
                  blocks: &mut Vec<(u32, BandMatrix)>|
     -> Result<()> {
        if let Some((line, level, rows, cols, trip)) = cur {
            let m = BandMatrix::from_triplets(rows, cols, trip).map_err(|e| Error::Parse {
                line,
                msg: e.to_string(),
            })?;
            blocks.push((level, m));
        }
        Ok(())
    };

    for (no, raw) in text.lines().enumerate() {
        let line_no = no + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('%') {
            for kv in rest.split_whitespace() {
                let (k, v) = kv.split_once('=').ok_or_else(|| Error::Parse {
                    line: line_no,
                    msg: format!("metadata `{kv}` is not key=value"),
                })?;
                meta.insert(k.to_string(), v.to_string());
            }
            continue;
        }
        if line == "#" {
            finish(current.take(), &mut blocks)?;
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected three fields, found {}", fields.len()),
            });
        }
        let bad = |what: &str| Error::Parse {
            line: line_no,
            msg: format!("cannot parse {what}"),
        };
        match current.as_mut() {
            None => {
                let level = fields[0].parse().map_err(|_| bad("level"))?;
                let rows = fields[1].parse().map_err(|_| bad("rows"))?;
                let cols = fields[2].parse().map_err(|_| bad("cols"))?;
                current = Some((line_no, level, rows, cols, Vec::new()));
            }
            Some((_, _, _, _, trip)) => {
                let r = fields[0].parse().map_err(|_| bad("row"))?;
                let c = fields[1].parse().map_err(|_| bad("column"))?;
                let v = fields[2].parse().map_err(|_| bad("value"))?;
                trip.push((r, c, v));
            }
        }
    }
    finish(current.take(), &mut blocks)?;

    if blocks.is_empty() || !blocks.len().is_multiple_of(4) {
        return Err(Error::Parse {
            line: 0,
            msg: format!("expected four blocks per level, found {} blocks", blocks.len()),
        });
    }
    let mut masks = BTreeMap::new();
    for group in blocks.chunks(4) {
        let level = group[0].0;
        if group.iter().any(|b| b.0 != level) {
            return Err(Error::Parse {
                line: 0,
                msg: format!("mask group for level {level} mixes levels"),
            });
        }
        let set = MaskSet {
            primal_coarse: group[0].1.clone(),
            primal_detail: group[1].1.clone(),
            dual_coarse: group[2].1.clone(),
            dual_detail: group[3].1.clone(),
        };
        if masks.insert(level, set).is_some() {
            return Err(Error::Parse {
                line: 0,
                msg: format!("level {level} given twice"),
            });
        }
    }

    let get = |key: &str, default: f64| -> Result<f64> {
        meta.get(key).map_or(Ok(default), |v| {
            v.parse().map_err(|_| Error::Parse {
                line: 0,
                msg: format!("metadata {key}={v} is not a number"),
            })
        })
    };
    let first = *masks.keys().next().expect("nonempty");
    let params = BasisParams {
        name: meta.get("name").cloned().unwrap_or_else(|| default_name.to_string()),
        d: get("d", 1.0)? as u32,
        d_tilde: get("d_tilde", 1.0)? as u32,
        gamma: get("gamma", 0.5)?,
        gamma_tilde: get("gamma_tilde", 0.5)?,
        alpha: get("alpha", COMPACT_SUPPORT_ALPHA)?,
        j0: get("j0", (first - 1) as f64)? as u32,
    };
    make_mask_basis(masks, params)
}

pub fn read_mask_file(path: impl AsRef<Path>) -> Result<BasisSpec> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("maskfile");
    parse_mask_file(&text, stem)
}

/// Serializes the masks of levels `j0 + 1 ..= max_level` in the mask file layout.
pub fn write_mask_file(spec: &BasisSpec, max_level: u32) -> Result<String> {
    let p = spec.params();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "% name={} d={} d_tilde={} gamma={} gamma_tilde={} alpha={} j0={}",
        p.name, p.d, p.d_tilde, p.gamma, p.gamma_tilde, p.alpha, p.j0
    );
    let mut first = true;
    for j in spec.j0() + 1..=max_level {
        let set = spec.masks(j)?;
        for (_, m) in set.all() {
            if !first {
                out.push_str("#\n");
            }
            first = false;
            let _ = m.write_block(j, &mut out);
        }
    }
    Ok(out)
}
