//! Operator (quasi-)norms `‖A‖_p = sup ‖Au‖_p / ‖u‖_p` of sparse matrices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::band::BandMatrix;
use crate::error::{Error, Result};
use crate::tensorbasis::check_exponent;

/// Power iteration tolerance on the normalized iterate.
pub const POWER_TOLERANCE: f64 = 1e-10;
pub const POWER_MAX_ITERATIONS: usize = 10_000;
const POWER_SEED: u64 = 0x5eed;

/// Iterations of the nonlinear power method per start vector for `1 < p < ∞`.
const BOYD_ITERATIONS: usize = 200;

/// `(max_j Σ_i |a_ij|^p)^{1/p}`, an upper bound for `‖A‖_p` when `0 < p <= 1`.
pub fn matrix_p_norm_bound(a: &BandMatrix, p: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidExponent(p));
    }
    Ok(a.max_column_power_sum(p).powf(1.0 / p))
}

pub fn vector_p_norm(x: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        x.iter().map(|v| v.abs()).fold(0.0, f64::max)
    } else if p == 1.0 {
        x.iter().map(|v| v.abs()).sum()
    } else if p == 2.0 {
        x.iter().map(|v| v * v).sum::<f64>().sqrt()
    } else {
        x.iter().map(|v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

/// Largest singular value by power iteration on `A^T A` from a fixed random start.
pub fn spectral_norm(a: &BandMatrix) -> f64 {
    if a.nnz() == 0 {
        return 0.0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(POWER_SEED);
    let mut x: Vec<f64> = (0..a.cols()).map(|_| rng.sample(StandardNormal)).collect();
    normalize(&mut x);
    for _ in 0..POWER_MAX_ITERATIONS {
        let ax = a.mul_vec(&x).expect("dimensions");
        let mut y = a.tr_mul_vec(&ax).expect("dimensions");
        if normalize(&mut y) == 0.0 {
            return 0.0;
        }
        let change = x.iter().zip(&y).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        x = y;
        if change < POWER_TOLERANCE {
            break;
        }
    }
    vector_p_norm(&a.mul_vec(&x).expect("dimensions"), 2.0)
}

fn normalize(x: &mut [f64]) -> f64 {
    let n = vector_p_norm(x, 2.0);
    if n > 0.0 {
        x.iter_mut().for_each(|v| *v /= n);
    }
    n
}

/// A lower bound for `‖A‖_p`, exact for `p ∈ {1, 2, ∞}` (up to the power iteration tolerance).
///
/// Other exponents take the largest ratio `‖Au‖_p / ‖u‖_p` over all
/// coordinate vectors and `trials` random vectors; for `1 < p < ∞` every
/// random start is refined by the nonlinear power method for `p`-norms.
pub fn operator_p_norm_estimate(a: &BandMatrix, p: f64, trials: usize, seed: u64) -> Result<f64> {
    check_exponent(p)?;
    if p == 1.0 {
        return Ok(a.max_column_abs_sum());
    }
    if p.is_infinite() {
        return Ok(a.max_row_abs_sum());
    }
    if p == 2.0 {
        return Ok(spectral_norm(a));
    }
    // coordinate vectors: column p-norms
    let mut best = (0..a.cols())
        .map(|c| {
            let col: Vec<f64> = a.column(c).map(|(_, v)| v).collect();
            vector_p_norm(&col, p)
        })
        .fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..trials {
        let mut x: Vec<f64> = if t % 2 == 0 {
            (0..a.cols()).map(|_| rng.sample(StandardNormal)).collect()
        } else {
            // sparse start: a handful of nonzeros
            let mut x = vec![0.0; a.cols()];
            for _ in 0..3.min(a.cols()) {
                let i = rng.gen_range(0..a.cols());
                x[i] = rng.sample(StandardNormal);
            }
            x
        };
        best = best.max(ratio(a, &x, p));
        if p > 1.0 {
            best = best.max(boyd(a, &mut x, p));
        }
    }
    Ok(best)
}

fn ratio(a: &BandMatrix, x: &[f64], p: f64) -> f64 {
    let den = vector_p_norm(x, p);
    if den == 0.0 {
        return 0.0;
    }
    vector_p_norm(&a.mul_vec(x).expect("dimensions"), p) / den
}

/// Nonlinear power method for `1 < p < ∞`; returns the best ratio seen.
fn boyd(a: &BandMatrix, x: &mut Vec<f64>, p: f64) -> f64 {
    let dual = p / (p - 1.0);
    let dual_map = |v: &[f64], e: f64| -> Vec<f64> {
        v.iter().map(|z| z.signum() * z.abs().powf(e - 1.0)).collect()
    };
    let mut best = 0.0f64;
    for _ in 0..BOYD_ITERATIONS {
        let nx = vector_p_norm(x, p);
        if nx == 0.0 {
            break;
        }
        x.iter_mut().for_each(|v| *v /= nx);
        let y = a.mul_vec(x).expect("dimensions");
        let value = vector_p_norm(&y, p);
        if value <= best * (1.0 + 1e-14) && best > 0.0 {
            best = best.max(value);
            break;
        }
        best = best.max(value);
        let w = a.tr_mul_vec(&dual_map(&y, p)).expect("dimensions");
        let next = dual_map(&w, dual);
        if next.iter().all(|&v| v == 0.0) {
            break;
        }
        *x = next;
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense(rows: usize, cols: usize, v: &[f64]) -> BandMatrix {
        BandMatrix::from_dense(rows, cols, v).unwrap()
    }

    #[test]
    fn bound_examples() {
        assert_eq!(matrix_p_norm_bound(&BandMatrix::identity(2), 0.5).unwrap(), 1.0);
        let ones = dense(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        assert_eq!(matrix_p_norm_bound(&ones, 1.0).unwrap(), 2.0);
        assert_eq!(operator_p_norm_estimate(&ones, 1.0, 0, 0).unwrap(), 2.0);
        let diag = dense(2, 2, &[2.0, 0.0, 0.0, 3.0]);
        assert_eq!(matrix_p_norm_bound(&diag, 1.0).unwrap(), 3.0);
        assert!(matches!(matrix_p_norm_bound(&diag, 1.5), Err(Error::InvalidExponent(_))));
    }

    #[test]
    fn spectral_norm_of_diagonal() {
        let diag = dense(2, 2, &[2.0, 0.0, 0.0, 3.0]);
        assert!((operator_p_norm_estimate(&diag, 2.0, 0, 0).unwrap() - 3.0).abs() < 1e-10);
    }

    #[test]
    fn spectral_norm_matches_svd() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let v: Vec<f64> = (0..30).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let a = dense(5, 6, &v);
            let svd = a.to_dense().singular_values().max();
            assert!((spectral_norm(&a) - svd).abs() < 1e-9 * svd);
        }
    }

    #[test]
    fn boyd_on_diagonal_and_bounds() {
        let diag = dense(3, 3, &[1.0, 0.0, 0.0, 0.0, -4.0, 0.0, 0.0, 0.0, 2.0]);
        for p in [0.5, 1.5, 3.0] {
            let e = operator_p_norm_estimate(&diag, p, 8, 1).unwrap();
            assert!((e - 4.0).abs() < 1e-12, "p = {p}: {e}");
        }
        let ones = dense(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        // ‖J‖_p = 2 for every p >= 1 (attained at (1, 1))
        let e = operator_p_norm_estimate(&ones, 1.5, 8, 1).unwrap();
        assert!((e - 2.0).abs() < 1e-9, "{e}");
    }
}
