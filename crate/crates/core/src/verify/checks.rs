use nalgebra::SymmetricEigen;
use rayon::prelude::*;

use super::pnorm::operator_p_norm_estimate;
use crate::band::BandMatrix;
use crate::basis1d::BasisSpec;
use crate::error::{Error, Result};
use crate::transform1d::{build_transform, check_entry_decay};

/// Largest admissible Kronecker factor (rows or columns).
pub const KRON_MAX_FACTOR: usize = 64;

/// Relative change of the running maximum accepted as "stabilized".
pub const STABILITY_TOLERANCE: f64 = 0.1;

/// Random starts per operator norm estimate for `p ∉ {1, 2, ∞}`.
pub const NORM_TRIALS: usize = 8;

/// Extra refinement levels used to approximate the single-scale Gram matrix.
pub const GRAM_EXTRA_LEVELS: u32 = 6;

/// `max |T̃_m^T T_m - I|`.
pub fn check_biorthogonality(spec: &BasisSpec, m: u32) -> Result<f64> {
    let (t, td) = build_transform(spec, m)?;
    Ok(td.transpose().matmul(&t)?.identity_defect())
}

/// Running maxima of `values`.
pub fn running_max(values: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    let mut best = f64::NEG_INFINITY;
    for &v in values {
        best = best.max(v);
        out.push(best);
    }
    out
}

/// True when the running maximum of `values` changes by at most the fraction
/// `tol` of its final value over the last three entries. Needs three values.
pub fn stabilizes(values: &[f64], tol: f64) -> bool {
    let r = running_max(values);
    if r.len() < 3 {
        return false;
    }
    let last = r[r.len() - 1];
    r[r.len() - 3] >= (1.0 - tol) * last
}

/// The four operator norm estimates of one transform level.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformNorms {
    pub m: u32,
    /// `‖T_m^T‖_p`
    pub primal_transposed: f64,
    /// `‖T̃_m^T‖_p`
    pub dual_transposed: f64,
    /// `‖T_m‖_p`
    pub primal: f64,
    /// `‖T̃_m‖_p`
    pub dual: f64,
}

impl TransformNorms {
    /// `2^{-m(1/p - 1/2)}`, the normalization of the untransposed norms.
    pub fn growth(&self, p: f64) -> f64 {
        (-(self.m as f64) * (1.0 / p - 0.5)).exp2()
    }

    pub fn primal_ratio(&self, p: f64) -> f64 {
        self.primal * self.growth(p)
    }

    pub fn dual_ratio(&self, p: f64) -> f64 {
        self.dual * self.growth(p)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransformNormReport {
    pub p: f64,
    pub rows: Vec<TransformNorms>,
    /// The running maxima of both transposed norms stabilize.
    pub transposed_bounded: bool,
    /// The running maxima of both normalized ratios stabilize.
    pub ratios_bounded: bool,
}

/// Operator norms of `T_m`, `T̃_m` and their transposes for `m = j0..=m_max`.
///
/// For `p <= 1` the norms are exact (largest column `p`-norm), for `p = 2`
/// they are largest singular values, otherwise lower estimates.
pub fn check_transform_norms(spec: &BasisSpec, p: f64, m_max: u32, seed: u64) -> Result<TransformNormReport> {
    let lo = 1.0 / spec.alpha();
    if !(p > lo && p <= 2.0) {
        return Err(Error::ExponentOutOfRange { p, lo, hi: 2.0 });
    }
    spec.check_level(m_max)?;
    let rows = (spec.j0()..=m_max)
        .into_par_iter()
        .map(|m| {
            let (t, td) = build_transform(spec, m)?;
            let est = |a: &BandMatrix| operator_p_norm_estimate(a, p, NORM_TRIALS, seed ^ u64::from(m));
            let (primal, primal_transposed) = (est(&t)?, est(&t.transpose())?);
            let (dual, dual_transposed) = if spec.is_haar() {
                (primal, primal_transposed)
            } else {
                (est(&td)?, est(&td.transpose())?)
            };
            Ok(TransformNorms {
                m,
                primal_transposed,
                dual_transposed,
                primal,
                dual,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let column = |f: &dyn Fn(&TransformNorms) -> f64| rows.iter().map(f).collect::<Vec<_>>();
    let transposed_bounded = stabilizes(&column(&|r| r.primal_transposed), STABILITY_TOLERANCE)
        && stabilizes(&column(&|r| r.dual_transposed), STABILITY_TOLERANCE);
    let ratios_bounded = stabilizes(&column(&|r| r.primal_ratio(p)), STABILITY_TOLERANCE)
        && stabilizes(&column(&|r| r.dual_ratio(p)), STABILITY_TOLERANCE);
    Ok(TransformNormReport {
        p,
        rows,
        transposed_bounded,
        ratios_bounded,
    })
}

/// `(‖A ⊗ B‖_p, ‖A‖_p ‖B‖_p)` with the Kronecker product formed explicitly.
pub fn check_kron_identity(a: &BandMatrix, b: &BandMatrix, p: f64) -> Result<(f64, f64)> {
    if !(p == 1.0 || p == 2.0 || p == f64::INFINITY) {
        return Err(Error::InvalidExponent(p));
    }
    for f in [a, b] {
        if f.rows() > KRON_MAX_FACTOR || f.cols() > KRON_MAX_FACTOR {
            return Err(Error::SizeTooLarge {
                rows: f.rows(),
                cols: f.cols(),
            });
        }
    }
    let norm = |x: &BandMatrix| operator_p_norm_estimate(x, p, 0, 0);
    Ok((norm(&a.kron(b))?, norm(a)? * norm(b)?))
}

/// Spectral data of the Gram matrix of `{ψ_λ : |λ| <= m}`.
#[derive(Clone, Debug, PartialEq)]
pub struct RieszEstimate {
    pub m: u32,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub condition: f64,
    /// `max |G_λλ - 1|`.
    pub diagonal_defect: f64,
}

/// Gram matrix `T_m^T G_m T_m` and its condition number.
///
/// The single-scale Gram matrix `G_m` is approximated by `P^T P`, where `P`
/// refines `Φ_m` through `L = min(6, max_level - m)` further levels and the
/// finest scaling functions are treated as orthonormal. This is exact when
/// the primal scaling functions are box functions.
pub fn check_riesz(spec: &BasisSpec, m: u32) -> Result<RieszEstimate> {
    let (t, _) = build_transform(spec, m)?;
    let extra = GRAM_EXTRA_LEVELS.min(spec.max_level().saturating_sub(m));
    let mut refine = BandMatrix::identity(spec.delta_size(m));
    for l in m + 1..=m + extra {
        refine = spec.masks(l)?.primal_coarse.matmul(&refine)?;
    }
    let single = refine.transpose().matmul(&refine)?;
    let gram = t.transpose().matmul(&single.matmul(&t)?)?.to_dense();
    let diagonal_defect = gram.diagonal().iter().map(|d| (d - 1.0).abs()).fold(0.0, f64::max);
    let eig = SymmetricEigen::new(gram).eigenvalues;
    let lambda_min = eig.min();
    let lambda_max = eig.max();
    Ok(RieszEstimate {
        m,
        lambda_min,
        lambda_max,
        condition: lambda_max / lambda_min,
        diagonal_defect,
    })
}

/// Worst decay ratio of `T_m` for every `m = j0+1..=m_max`.
pub fn decay_sweep(spec: &BasisSpec, alpha: f64, m_max: u32) -> Result<Vec<(u32, f64)>> {
    (spec.j0() + 1..=m_max)
        .into_par_iter()
        .map(|m| Ok((m, check_entry_decay(spec, m, alpha)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis1d::make_haar_basis;

    #[test]
    fn haar_biorthogonality() {
        let spec = make_haar_basis(0);
        assert!(check_biorthogonality(&spec, 1).unwrap() < 1e-15);
        assert!(check_biorthogonality(&spec, 8).unwrap() <= 1e-13);
    }

    #[test]
    fn stabilization_rule() {
        assert!(stabilizes(&[1.0, 2.0, 2.0, 2.1], 0.1));
        assert!(!stabilizes(&[1.0, 2.0, 3.0, 4.0], 0.1));
        assert!(!stabilizes(&[1.0, 1.0], 0.1));
        assert_eq!(running_max(&[1.0, 0.5, 3.0]), vec![1.0, 1.0, 3.0]);
    }

    #[test]
    fn haar_transform_norms() {
        let spec = make_haar_basis(0);
        let two = check_transform_norms(&spec, 2.0, 6, 0).unwrap();
        for r in &two.rows {
            for v in [r.primal, r.primal_transposed, r.dual, r.dual_transposed] {
                assert!((v - 1.0).abs() < 1e-10);
            }
        }
        // the coarsest column has 2^m entries 2^{-m/2}
        let one = check_transform_norms(&spec, 1.0, 8, 0).unwrap();
        for r in &one.rows {
            assert!(r.primal >= (r.m as f64 / 2.0).exp2() * (1.0 - 1e-12));
            assert!(r.primal_ratio(1.0) >= 1.0 - 1e-12);
        }
        assert!(one.ratios_bounded && one.transposed_bounded);
        assert!(matches!(
            check_transform_norms(&spec, 3.0, 4, 0),
            Err(Error::ExponentOutOfRange { .. })
        ));
    }

    #[test]
    fn kron_examples() {
        let a = BandMatrix::from_dense(1, 1, &[2.0]).unwrap();
        let b = BandMatrix::from_dense(1, 1, &[3.0]).unwrap();
        for p in [1.0, 2.0, f64::INFINITY] {
            let (l, r) = check_kron_identity(&a, &b, p).unwrap();
            assert!((l - 6.0).abs() < 1e-12 && (r - 6.0).abs() < 1e-12);
        }
        let big = BandMatrix::identity(65);
        assert!(matches!(check_kron_identity(&big, &a, 1.0), Err(Error::SizeTooLarge { .. })));
        assert!(matches!(check_kron_identity(&a, &b, 0.5), Err(Error::InvalidExponent(_))));
    }

    #[test]
    fn haar_gram_is_identity() {
        let spec = make_haar_basis(0);
        for m in [1, 4] {
            let r = check_riesz(&spec, m).unwrap();
            assert!((r.condition - 1.0).abs() < 1e-12);
            assert!(r.diagonal_defect < 1e-12);
        }
    }
}
