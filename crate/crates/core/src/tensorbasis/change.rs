//! Change of basis between hyperbolic and isotropic coefficients for `n = 2`.
//!
//! On level `m > j0` the isotropic block of type `(0, 1)` spans the same
//! space as the hyperbolic blocks `∇_j × ∇_m`, `j < m`: collecting the first
//! factor through `[Φ_{j0}, Ψ_{j0+1}, …, Ψ_{m-1}] = Φ_{m-1} T_{m-1}` gives
//! `v|_{(0,1)} = (T_{m-1} ⊗ I) u`. The `(1, 0)` block is the mirror image and
//! the `(1, 1)` block and the coarsest block coincide. The reverse direction
//! uses `T̃_{m-1}^T = T_{m-1}^{-1}`.

use ndarray::{ArrayD, Slice};

use super::hyper::{apply_along, hyper_from_dense, hyper_to_dense};
use super::iso::{iso_from_dense, iso_to_dense};
use super::CoeffVector;
use crate::basis1d::BasisSpec;
use crate::error::{Error, Result};
use crate::transform1d::Cascade;

#[derive(Clone, Copy)]
enum Direction {
    ToIso,
    ToHyper,
}

fn convert(spec: &BasisSpec, arr: &mut ArrayD<f64>, top: u32, dir: Direction) -> Result<()> {
    if top <= spec.j0() {
        return Ok(());
    }
    let cascade = Cascade::new(spec, top - 1)?;
    for m in spec.j0() + 1..=top {
        let lo = spec.delta_size(m - 1);
        let hi = spec.delta_size(m);
        for axis in 0..2 {
            // the transformed axis holds the coarse factor Δ_{m-1}, the other one ∇_m
            let mut block = arr.slice_each_axis_mut(|d| {
                if d.axis.index() == axis {
                    Slice::from(0..lo)
                } else {
                    Slice::from(lo..hi)
                }
            });
            match dir {
                Direction::ToIso => apply_along(block.view_mut(), axis, &|b, s| {
                    cascade.inverse_upto(m - 1, b, s)
                }),
                Direction::ToHyper => apply_along(block.view_mut(), axis, &|b, s| {
                    cascade.forward_upto(m - 1, b, s)
                }),
            }
        }
    }
    Ok(())
}

fn require_plane(c: &CoeffVector) -> Result<()> {
    if c.dim() != 2 {
        return Err(Error::UnsupportedDimension(c.dim()));
    }
    Ok(())
}

/// Isotropic coefficients of the function with hyperbolic coefficients `u`.
///
/// The conversion runs on `L^2` normalized values; the result carries the
/// normalization exponent of the input.
pub fn iso_from_hyper(spec: &BasisSpec, u: &CoeffVector) -> Result<CoeffVector> {
    require_plane(u)?;
    u.hyper()?;
    let p = u.p_norm();
    let u2 = u.rescale(2.0)?;
    let mut arr = hyper_to_dense(spec, &u2)?;
    convert(spec, &mut arr, u.max_level(), Direction::ToIso)?;
    iso_from_dense(spec, u.max_level(), &arr)?.rescale(p)
}

/// Hyperbolic coefficients of the function with isotropic coefficients `v`; inverse of [`iso_from_hyper`].
pub fn hyper_from_iso(spec: &BasisSpec, v: &CoeffVector) -> Result<CoeffVector> {
    require_plane(v)?;
    v.iso()?;
    let p = v.p_norm();
    let v2 = v.rescale(2.0)?;
    let mut arr = iso_to_dense(spec, &v2)?;
    convert(spec, &mut arr, v.max_level(), Direction::ToHyper)?;
    hyper_from_dense(spec, v.max_level(), &arr)?.rescale(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis1d::make_haar_basis;
    use crate::tensorbasis::{hyper_inverse, iso_synthesis, HyperIndex, IsoIndex, System};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hyper(spec: &BasisSpec, m: u32, rng: &mut ChaCha8Rng) -> CoeffVector {
        let mut u = CoeffVector::new(spec, System::Hyperbolic, 2, m).unwrap();
        for j1 in spec.j0()..=m {
            for j2 in spec.j0()..=m {
                for k1 in 0..spec.nabla_size(j1) {
                    for k2 in 0..spec.nabla_size(j2) {
                        let idx = HyperIndex::new(&[j1, j2], &[k1, k2]).unwrap();
                        u.insert_hyper(spec, idx, rng.gen_range(-1.0..1.0)).unwrap();
                    }
                }
            }
        }
        u
    }

    #[test]
    fn diagonal_blocks_are_unchanged() {
        let spec = make_haar_basis(0);
        let mut u = CoeffVector::new(&spec, System::Hyperbolic, 2, 4).unwrap();
        u.insert_hyper(&spec, HyperIndex::new(&[3, 3], &[1, 2]).unwrap(), 0.7).unwrap();
        let v = iso_from_hyper(&spec, &u).unwrap();
        let entries: Vec<_> = v.iso().unwrap().iter().collect();
        assert_eq!(entries.len(), 1);
        assert_eq!(*entries[0].0, IsoIndex::new(3, &[1, 1], &[1, 2]).unwrap());
        assert_eq!(*entries[0].1, 0.7);
        let back = hyper_from_iso(&spec, &v).unwrap();
        assert_eq!(back, u);
    }

    #[test]
    fn coarsest_mixed_block_is_identity() {
        let spec = make_haar_basis(0);
        let mut u = CoeffVector::new(&spec, System::Hyperbolic, 2, 3).unwrap();
        u.insert_hyper(&spec, HyperIndex::new(&[0, 1], &[0, 0]).unwrap(), 1.5).unwrap();
        let v = iso_from_hyper(&spec, &u).unwrap();
        let entries: Vec<_> = v.iso().unwrap().iter().collect();
        assert_eq!(entries.len(), 1);
        assert_eq!(*entries[0].0, IsoIndex::new(1, &[0, 1], &[0, 0]).unwrap());
        assert!((entries[0].1 - 1.5).abs() < 1e-15);
    }

    #[test]
    fn same_function_and_invertible() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for j0 in [0, 2] {
            let spec = make_haar_basis(j0);
            for m in j0..=j0 + 4 {
                let u = random_hyper(&spec, m, &mut rng);
                let v = iso_from_hyper(&spec, &u).unwrap();
                let f_hyp = hyper_inverse(&spec, &u).unwrap();
                let f_iso = iso_synthesis(&spec, &v).unwrap();
                let diff = f_hyp.iter().zip(&f_iso).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                assert!(diff < 1e-12, "m = {m}: {diff}");
                let back = hyper_from_iso(&spec, &v).unwrap();
                for (idx, val) in u.hyper().unwrap() {
                    let got = back.hyper().unwrap().get(idx).copied().unwrap_or(0.0);
                    assert!((got - val).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn normalization_is_preserved() {
        let spec = make_haar_basis(0);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let u = random_hyper(&spec, 3, &mut rng).rescale(1.0).unwrap();
        let v = iso_from_hyper(&spec, &u).unwrap();
        assert_eq!(v.p_norm(), 1.0);
        let direct = iso_from_hyper(&spec, &u.rescale(2.0).unwrap()).unwrap().rescale(1.0).unwrap();
        assert_eq!(v, direct);
    }

    #[test]
    fn other_dimensions_rejected() {
        let spec = make_haar_basis(0);
        let u = CoeffVector::new(&spec, System::Hyperbolic, 3, 2).unwrap();
        assert!(matches!(iso_from_hyper(&spec, &u), Err(Error::UnsupportedDimension(3))));
        let v = CoeffVector::new(&spec, System::Isotropic, 1, 2).unwrap();
        assert!(matches!(hyper_from_iso(&spec, &v), Err(Error::UnsupportedDimension(1))));
    }
}
