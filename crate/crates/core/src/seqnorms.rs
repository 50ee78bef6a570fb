//! Discrete Sobolev and Besov sequence norms on coefficient vectors.
//!
//! Every norm is evaluated by one routine: coefficients are grouped by level
//! (the level vector `𝐣` for hyperbolic, the level `m` for isotropic
//! coefficients), each group contributes `2^{τ w} (Σ |c|^p)^{τ/p}` with a
//! level weight `w`, and the total is raised to `1/τ`. The Sobolev and
//! Griebel–Knapek norms are the case `p = τ = 2` of the same computation, so
//! the identities between them hold bit for bit.

use crate::basis1d::BasisSpec;
use crate::error::{Error, Result};
use crate::tensorbasis::{check_exponent, CoeffVector};

/// Parameters `(q, s, p, τ)` of a hybrid Besov norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormParams {
    pub q: f64,
    pub s: f64,
    pub p: f64,
    pub tau: f64,
}

impl NormParams {
    pub fn new(q: f64, s: f64, p: f64, tau: f64) -> Self {
        Self { q, s, p, tau }
    }

    /// The `p = τ = 2` parameters of the space `𝔥^{q,s}`.
    pub fn hilbert(q: f64, s: f64) -> Self {
        Self::new(q, s, 2.0, 2.0)
    }

    /// The Jackson/Bernstein scale: `p = τ` with `1/τ = r + 1/2`.
    pub fn approximation_scale(q: f64, r: f64) -> Self {
        let tau = 1.0 / (r + 0.5);
        Self::new(q, r, tau, tau)
    }

    /// A warning when `s` or `q + s` leave `(-γ̃, γ)` of `spec`.
    pub fn window_warning(&self, spec: &BasisSpec) -> Option<String> {
        let (lo, hi) = (-spec.gamma_tilde(), spec.gamma());
        let inside = |x: f64| lo < x && x < hi;
        if inside(self.s) && inside(self.q + self.s) {
            None
        } else {
            Some(format!(
                "s = {} or q + s = {} outside ({lo}, {hi}); norm equivalences are not guaranteed",
                self.s,
                self.q + self.s
            ))
        }
    }
}

/// Accumulates `[Σ_groups 2^{τ w} (Σ |c|^p)^{τ/p}]^{1/τ}` over groups given in order.
struct LevelSum {
    p: f64,
    tau: f64,
    total: f64,
    weight: f64,
    inner: f64,
    open: bool,
}

impl LevelSum {
    fn new(p: f64, tau: f64) -> Self {
        Self {
            p,
            tau,
            total: 0.0,
            weight: 0.0,
            inner: 0.0,
            open: false,
        }
    }

    fn start(&mut self, weight: f64) {
        self.close();
        self.weight = weight;
        self.inner = 0.0;
        self.open = true;
    }

    fn push(&mut self, c: f64) {
        let a = c.abs();
        if self.p.is_infinite() {
            self.inner = self.inner.max(a);
        } else {
            self.inner += a.powf(self.p);
        }
    }

    fn close(&mut self) {
        if !self.open {
            return;
        }
        self.open = false;
        if self.inner == 0.0 {
            return;
        }
        let group = if self.p.is_infinite() {
            self.inner
        } else {
            self.inner.powf(1.0 / self.p)
        };
        if self.tau.is_infinite() {
            self.total = self.total.max(self.weight.exp2() * group);
        } else if self.p == self.tau {
            self.total += (self.tau * self.weight).exp2() * self.inner;
        } else {
            self.total += (self.tau * self.weight).exp2() * group.powf(self.tau);
        }
    }

    fn finish(mut self) -> f64 {
        self.close();
        if self.tau.is_infinite() {
            self.total
        } else {
            self.total.powf(1.0 / self.tau)
        }
    }
}

fn check_pt(p: f64, tau: f64) -> Result<()> {
    check_exponent(p)?;
    check_exponent(tau)
}

/// `[Σ_𝐣 2^{τ(q|𝐣|_∞ + s|𝐣|_1)} (Σ_{𝛌 ∈ ∇_𝐣} |u^{(p)}_𝛌|^p)^{τ/p}]^{1/τ}`, with maxima for infinite exponents.
pub fn besov_hybrid_norm(u: &CoeffVector, params: NormParams) -> Result<f64> {
    check_pt(params.p, params.tau)?;
    u.hyper()?;
    let up = u.rescale(params.p)?;
    let mut sum = LevelSum::new(params.p, params.tau);
    let mut current: Option<&[u8]> = None;
    for (idx, &v) in up.hyper()? {
        if current != Some(idx.levels()) {
            current = Some(idx.levels());
            sum.start(params.q * idx.linf() as f64 + params.s * idx.l1() as f64);
        }
        sum.push(v);
    }
    Ok(sum.finish())
}

/// `[Σ_m 2^{τ m α} (Σ_{|μ| = m} |v^{(p)}_μ|^p)^{τ/p}]^{1/τ}`.
pub fn besov_iso_norm(v: &CoeffVector, alpha: f64, p: f64, tau: f64) -> Result<f64> {
    check_pt(p, tau)?;
    v.iso()?;
    let vp = v.rescale(p)?;
    let mut sum = LevelSum::new(p, tau);
    let mut current = None;
    for (idx, &c) in vp.iso()? {
        if current != Some(idx.level()) {
            current = Some(idx.level());
            sum.start(alpha * idx.level() as f64);
        }
        sum.push(c);
    }
    Ok(sum.finish())
}

/// `(Σ 2^{2q|𝛌|_∞ + 2s|𝛌|_1} |u_𝛌|²)^{1/2}`, for `q` of either sign.
pub fn gk_norm(u: &CoeffVector, q: f64, s: f64) -> Result<f64> {
    besov_hybrid_norm(u, NormParams::hilbert(q, s))
}

/// `(Σ 2^{2s|𝛌|_∞} |u_𝛌|²)^{1/2}`.
pub fn sobolev_norm_hyper(u: &CoeffVector, s: f64) -> Result<f64> {
    gk_norm(u, s, 0.0)
}

/// `(Σ 2^{2s|μ|} |v_μ|²)^{1/2}`.
pub fn sobolev_norm_iso(v: &CoeffVector, s: f64) -> Result<f64> {
    besov_iso_norm(v, s, 2.0, 2.0)
}

/// `sup_k k^{1/τ} |u*(k)|` over the decreasing rearrangement.
pub fn weak_ltau(values: &[f64], tau: f64) -> Result<f64> {
    check_exponent(tau)?;
    let mut a: Vec<f64> = values.iter().map(|v| v.abs()).collect();
    a.sort_unstable_by(|x, y| y.total_cmp(x));
    let e = 1.0 / tau;
    Ok(a.iter()
        .enumerate()
        .map(|(i, v)| ((i + 1) as f64).powf(e) * v)
        .fold(0.0, f64::max))
}

/// `(Σ |u|^τ)^{1/τ}`, or the maximum for `τ = ∞`.
pub fn ltau(values: &[f64], tau: f64) -> Result<f64> {
    check_exponent(tau)?;
    if tau.is_infinite() {
        return Ok(values.iter().map(|v| v.abs()).fold(0.0, f64::max));
    }
    Ok(values.iter().map(|v| v.abs().powf(tau)).sum::<f64>().powf(1.0 / tau))
}

pub(crate) fn nonzero_denominator(x: f64, what: &'static str) -> Result<f64> {
    if x == 0.0 || !x.is_finite() {
        return Err(Error::DivisionByZero(what));
    }
    Ok(x)
}
