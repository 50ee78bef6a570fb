//! Ratios between hybrid and isotropic Besov norms of the same function (`n = 2`).

use crate::basis1d::BasisSpec;
use crate::error::{Error, Result};
use crate::seqnorms::{besov_hybrid_norm, besov_iso_norm, nonzero_denominator, NormParams};
use crate::tensorbasis::{iso_from_hyper, CoeffVector};

#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingRatios {
    /// `‖v‖_{b^{q+s,τ}_τ} / ‖u‖_{𝔟^{q,s,τ}_τ}`
    pub lower: f64,
    /// `‖u‖_{𝔟^{q,s,τ}_τ} / ‖v‖_{b^{q+2s,τ}_τ}`
    pub upper: f64,
    pub tau: f64,
    /// Set when `(q, s)` leave the window in which the embeddings are proven.
    pub warning: Option<String>,
}

/// A warning unless `s < α - 1/2` and `q + s, q + 2s > max{0, 2(s - 1/2)}`.
pub fn embedding_window_warning(spec: &BasisSpec, q: f64, s: f64) -> Option<String> {
    let floor = (2.0 * (s - 0.5)).max(0.0);
    let mut problems = Vec::new();
    if !(s < spec.alpha() - 0.5) {
        problems.push(format!("s = {s} is not below alpha - 1/2 = {}", spec.alpha() - 0.5));
    }
    if !(q + s > floor && q + 2.0 * s > floor) {
        problems.push(format!("q + s = {} and q + 2s = {} must exceed {floor}", q + s, q + 2.0 * s));
    }
    (!problems.is_empty()).then(|| problems.join("; "))
}

fn hybrid_and_iso(spec: &BasisSpec, u: &CoeffVector, q: f64, s: f64) -> Result<(f64, CoeffVector, f64)> {
    if u.dim() != 2 {
        return Err(Error::UnsupportedDimension(u.dim()));
    }
    let params = NormParams::approximation_scale(q, s);
    let hybrid = besov_hybrid_norm(u, params)?;
    let v = iso_from_hyper(spec, u)?;
    Ok((hybrid, v, params.tau))
}

/// Both ratios of the embedding chain for `1/τ = s + 1/2`.
pub fn check_embedding_chain(spec: &BasisSpec, u: &CoeffVector, q: f64, s: f64) -> Result<EmbeddingRatios> {
    let (hybrid, v, tau) = hybrid_and_iso(spec, u, q, s)?;
    let hybrid = nonzero_denominator(hybrid, "hybrid Besov norm")?;
    let coarse = besov_iso_norm(&v, q + s, tau, tau)?;
    let fine = nonzero_denominator(besov_iso_norm(&v, q + 2.0 * s, tau, tau)?, "isotropic Besov norm")?;
    Ok(EmbeddingRatios {
        lower: coarse / hybrid,
        upper: hybrid / fine,
        tau,
        warning: embedding_window_warning(spec, q, s),
    })
}

/// The sandwich with slack `eps`: `(‖v‖_{b^{q+s-ε}} / ‖u‖_𝔟, ‖u‖_𝔟 / ‖v‖_{b^{q+2s+ε}})`.
pub fn observe_sandwich(spec: &BasisSpec, u: &CoeffVector, q: f64, s: f64, eps: f64) -> Result<(f64, f64)> {
    let (hybrid, v, tau) = hybrid_and_iso(spec, u, q, s)?;
    let hybrid = nonzero_denominator(hybrid, "hybrid Besov norm")?;
    let coarse = besov_iso_norm(&v, q + s - eps, tau, tau)?;
    let fine = nonzero_denominator(besov_iso_norm(&v, q + 2.0 * s + eps, tau, tau)?, "isotropic Besov norm")?;
    Ok((coarse / hybrid, hybrid / fine))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis1d::make_haar_basis;
    use crate::tensorbasis::{HyperIndex, System};

    #[test]
    fn diagonal_coefficient_is_a_weight_ratio() {
        let spec = make_haar_basis(0);
        let (q, s) = (0.0, 0.25);
        for m in 1..5u32 {
            let mut u = CoeffVector::new(&spec, System::Hyperbolic, 2, 5).unwrap();
            u.insert_hyper(&spec, HyperIndex::new(&[m, m], &[0, 0]).unwrap(), 1.0).unwrap();
            let r = check_embedding_chain(&spec, &u, q, s).unwrap();
            // 1/τ - 1/2 = s: the τ-normalization of a level-(m, m) entry is 2^{-2ms}
            let tau = 1.0 / (s + 0.5);
            let scale = (-2.0 * m as f64 * s).exp2();
            let hybrid = (q * m as f64 + s * 2.0 * m as f64).exp2() * scale;
            let iso = |a: f64| (a * m as f64).exp2() * scale;
            assert!((r.tau - tau).abs() < 1e-15);
            assert!((r.lower - iso(q + s) / hybrid).abs() < 1e-12);
            assert!((r.upper - hybrid / iso(q + 2.0 * s)).abs() < 1e-12);
            assert!(r.lower <= 1.0);
            assert!(r.warning.is_none());
        }
    }

    #[test]
    fn zero_vector_and_dimension() {
        let spec = make_haar_basis(0);
        let u = CoeffVector::new(&spec, System::Hyperbolic, 2, 4).unwrap();
        assert!(matches!(check_embedding_chain(&spec, &u, 0.0, 0.25), Err(Error::DivisionByZero(_))));
        let u = CoeffVector::new(&spec, System::Hyperbolic, 3, 4).unwrap();
        assert!(matches!(check_embedding_chain(&spec, &u, 0.0, 0.25), Err(Error::UnsupportedDimension(3))));
    }

    #[test]
    fn window() {
        let spec = make_haar_basis(0);
        assert!(embedding_window_warning(&spec, 0.0, 0.25).is_none());
        assert!(embedding_window_warning(&spec, -1.0, 0.25).is_some());
    }
}
