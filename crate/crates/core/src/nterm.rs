//! Best N-term approximation in `H^q`.
//!
//! In the `H^q` metric a coefficient contributes its weighted modulus
//! `w = 2^{q|𝛌|_∞}|u_𝛌|` (hyperbolic) or `w = 2^{q|μ|}|v_μ|` (isotropic).
//! The best N-term approximation keeps the `N` largest weights and its error
//! is the `ℓ²` norm of the rest. Ties are broken by index order.

use crate::error::{Error, Result};
use crate::seqnorms::{besov_hybrid_norm, nonzero_denominator, NormParams};
use crate::tensorbasis::{CoeffData, CoeffVector, HyperIndex, IsoIndex};

/// An index of either coefficient system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AnyIndex {
    Hyper(HyperIndex),
    Iso(IsoIndex),
}

/// Errors `E_N` of a best N-term sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct NTermResult {
    pub q: f64,
    /// Indices kept by the largest requested `N`, best first.
    pub support: Vec<AnyIndex>,
    /// `(N, E_N)` in the requested order.
    pub errors: Vec<(usize, f64)>,
    /// `E_0`, the full `H^q` norm.
    pub total: f64,
}

impl NTermResult {
    pub fn error(&self, n: usize) -> Option<f64> {
        self.errors.iter().find(|(k, _)| *k == n).map(|(_, e)| *e)
    }
}

/// Weighted moduli sorted decreasingly (ties in index order).
#[derive(Clone, Debug)]
pub struct SortedWeights {
    pub entries: Vec<(AnyIndex, f64)>,
    /// `tail[k] = Σ_{i >= k} w_i²`, accumulated from the smallest weight upwards.
    tail: Vec<f64>,
}

impl SortedWeights {
    pub fn new(u: &CoeffVector, q: f64) -> Result<Self> {
        let u2 = u.rescale(2.0)?;
        let mut entries: Vec<(AnyIndex, f64)> = match u2.data() {
            CoeffData::Hyperbolic(d) => d
                .iter()
                .map(|(idx, v)| (AnyIndex::Hyper(*idx), (q * idx.linf() as f64).exp2() * v.abs()))
                .collect(),
            CoeffData::Isotropic(d) => d
                .iter()
                .map(|(idx, v)| (AnyIndex::Iso(*idx), (q * idx.level() as f64).exp2() * v.abs()))
                .collect(),
        };
        // stable: equal weights stay in index order
        entries.sort_by(|a, b| b.1.total_cmp(&a.1));
        let mut tail = vec![0.0; entries.len() + 1];
        for k in (0..entries.len()).rev() {
            tail[k] = tail[k + 1] + entries[k].1 * entries[k].1;
        }
        Ok(Self { entries, tail })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn weights(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|e| e.1)
    }

    /// `E_N`.
    pub fn error(&self, n: usize) -> f64 {
        self.tail[n.min(self.entries.len())].sqrt()
    }

    /// `Σ_{k < N} w_k²`.
    pub fn kept_mass(&self, n: usize) -> f64 {
        self.entries[..n.min(self.entries.len())].iter().map(|e| e.1 * e.1).sum()
    }
}

/// Best N-term approximation error and support for a single `N`.
pub fn best_nterm(u: &CoeffVector, q: f64, n: usize) -> Result<NTermResult> {
    error_curve(u, q, &[n])
}

/// `E_N` for every `N` in `n_list` from one sort.
pub fn error_curve(u: &CoeffVector, q: f64, n_list: &[usize]) -> Result<NTermResult> {
    let sorted = SortedWeights::new(u, q)?;
    let largest = n_list.iter().copied().max().unwrap_or(0).min(sorted.len());
    Ok(NTermResult {
        q,
        support: sorted.entries[..largest].iter().map(|e| e.0).collect(),
        errors: n_list.iter().map(|&n| (n, sorted.error(n))).collect(),
        total: sorted.error(0),
    })
}

/// Minus the least-squares slope of `ln E_N` against `ln N` over `N ∈ [n_min, n_max]`.
pub fn fit_rate(curve: &NTermResult, n_min: usize, n_max: usize) -> Result<f64> {
    let pts: Vec<(f64, f64)> = curve
        .errors
        .iter()
        .filter(|(n, e)| *n >= n_min.max(1) && *n <= n_max && *e > 0.0)
        .map(|(n, e)| ((*n as f64).ln(), e.ln()))
        .collect();
    let distinct = {
        let mut xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
        xs.dedup();
        xs.len()
    };
    if pts.len() < 3 || distinct < 2 {
        return Err(Error::InsufficientPoints(pts.len()));
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Ok(-sxy / sxx)
}

/// Doubling grid `1, 2, 4, …` up to `max` (inclusive when a power of two), with `0` prepended.
pub fn doubling_grid(max: usize) -> Vec<usize> {
    let mut grid = vec![0];
    let mut n = 1;
    while n <= max {
        grid.push(n);
        n *= 2;
    }
    grid
}

/// Suprema of the Jackson and Bernstein ratios of a hyperbolic vector.
///
/// With `1/τ = r + 1/2` and `‖·‖_𝔅` the hybrid Besov norm of parameters
/// `(q, r, τ, τ)`:
///
/// * Jackson: `sup_{0 <= N <= M} max(N, 1)^r E_N(u) / ‖u‖_𝔅`,
/// * Bernstein: `max_{1 <= N <= M} ‖u_N‖_𝔅 / (N^r ‖u_N‖_{H^q})` over the nested
///   greedy truncations `u_N`. This is a necessary condition only, since the
///   inequality is claimed for all N-term vectors.
///
/// For the truncations `‖u_N‖_𝔅^τ` equals the sum of the `τ`-th powers of the
/// kept `H^q` weights, which is used to evaluate all `N` in one pass.
pub fn jackson_bernstein_ratios(u: &CoeffVector, q: f64, r: f64) -> Result<(f64, f64)> {
    u.hyper()?;
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("rate r = {r} must be positive")));
    }
    let params = NormParams::approximation_scale(q, r);
    let tau = params.tau;
    let full = nonzero_denominator(besov_hybrid_norm(u, params)?, "Besov norm of u")?;
    let sorted = SortedWeights::new(u, q)?;

    let mut jackson = 0.0f64;
    for n in 0..=sorted.len() {
        let factor = (n.max(1) as f64).powf(r);
        jackson = jackson.max(factor * sorted.error(n) / full);
    }

    let mut bernstein = 0.0f64;
    let mut sum_tau = 0.0;
    let mut sum_sq = 0.0;
    for (n, w) in sorted.weights().enumerate() {
        sum_tau += w.powf(tau);
        sum_sq += w * w;
        let count = (n + 1) as f64;
        let hq = nonzero_denominator(sum_sq.sqrt(), "H^q norm of a truncation")?;
        bernstein = bernstein.max(sum_tau.powf(1.0 / tau) / (count.powf(r) * hq));
    }
    if sorted.is_empty() {
        return Err(Error::DivisionByZero("H^q norm of a truncation"));
    }
    Ok((jackson, bernstein))
}
