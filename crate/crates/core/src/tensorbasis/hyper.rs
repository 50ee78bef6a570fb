use std::collections::BTreeMap;
use std::ops::Range;

use ndarray::{ArrayD, ArrayViewMutD, IxDyn};

use super::{check_dim, CoeffData, CoeffVector, HyperIndex, System, MAX_DIM};
use crate::basis1d::BasisSpec;
use crate::error::{Error, Result};
use crate::transform1d::{level_for_length, Cascade};

/// Applies `f(lane, scratch)` to every lane of `view` along `axis`.
pub(crate) fn apply_along(mut view: ArrayViewMutD<'_, f64>, axis: usize, f: &impl Fn(&mut [f64], &mut [f64])) {
    let shape = view.shape().to_vec();
    if let Some(flat) = view.as_slice_mut() {
        apply_along_flat(flat, &shape, axis, f);
        return;
    }
    let mut owned = view.to_owned();
    apply_along_flat(owned.as_slice_mut().expect("owned arrays are contiguous"), &shape, axis, f);
    view.assign(&owned);
}

/// Number of lanes gathered at once for a strided axis.
const TILE: usize = 16;

fn apply_along_flat(flat: &mut [f64], shape: &[usize], axis: usize, f: &impl Fn(&mut [f64], &mut [f64])) {
    let len = shape[axis];
    let inner: usize = shape[axis + 1..].iter().product();
    if len == 0 || inner == 0 {
        return;
    }
    let mut scratch = vec![0.0; len];
    if inner == 1 {
        for lane in flat.chunks_exact_mut(len) {
            f(lane, &mut scratch);
        }
        return;
    }
    // gather TILE neighbouring lanes so every row read is contiguous
    let mut buf = vec![0.0; TILE * len];
    for block in flat.chunks_exact_mut(len * inner) {
        for i0 in (0..inner).step_by(TILE) {
            let w = TILE.min(inner - i0);
            for t in 0..len {
                let row = &block[t * inner + i0..t * inner + i0 + w];
                for (c, &v) in row.iter().enumerate() {
                    buf[c * len + t] = v;
                }
            }
            for lane in buf[..w * len].chunks_exact_mut(len) {
                f(lane, &mut scratch);
            }
            for t in 0..len {
                let row = &mut block[t * inner + i0..t * inner + i0 + w];
                for (c, v) in row.iter_mut().enumerate() {
                    *v = buf[c * len + t];
                }
            }
        }
    }
}

/// Checks an `n`-dimensional cube of extent `|Δ_m|` and returns `m`.
pub(crate) fn cube_level(spec: &BasisSpec, n: usize, data: &ArrayD<f64>) -> Result<u32> {
    check_dim(n)?;
    if data.ndim() != n {
        return Err(Error::dims("array dimension", n, data.ndim()));
    }
    let extent = data.shape()[0];
    if let Some(&bad) = data.shape().iter().find(|&&e| e != extent) {
        return Err(Error::dims("array extents must agree", extent, bad));
    }
    level_for_length(spec, extent)
}

/// Hyperbolic coefficients of single-scale data: the 1D forward transform along every axis.
pub fn hyper_forward(spec: &BasisSpec, n: usize, data: &ArrayD<f64>) -> Result<CoeffVector> {
    let order: Vec<usize> = (0..n).collect();
    hyper_forward_axis_order(spec, n, data, &order)
}

/// [`hyper_forward`] with the axes processed in the given order.
pub fn hyper_forward_axis_order(
    spec: &BasisSpec,
    n: usize,
    data: &ArrayD<f64>,
    order: &[usize],
) -> Result<CoeffVector> {
    let m = cube_level(spec, n, data)?;
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..n).collect::<Vec<_>>() {
        return Err(Error::InvalidArgument(format!("{order:?} is not an axis permutation")));
    }
    let cascade = Cascade::new(spec, m)?;
    let mut arr = data.clone();
    for &axis in order {
        apply_along(arr.view_mut(), axis, &|b, s| cascade.forward_in_place(b, s));
    }
    hyper_from_dense(spec, m, &arr)
}

/// Single-scale data from hyperbolic coefficients.
pub fn hyper_inverse(spec: &BasisSpec, coeffs: &CoeffVector) -> Result<ArrayD<f64>> {
    let mut arr = hyper_to_dense(spec, coeffs)?;
    let cascade = Cascade::new(spec, coeffs.max_level())?;
    for axis in 0..coeffs.dim() {
        apply_along(arr.view_mut(), axis, &|b, s| cascade.inverse_in_place(b, s));
    }
    Ok(arr)
}

/// Reads a dense hyperbolic layout (per-axis block order `[c_{j0}, d_{j0+1}, …]`) into sparse
/// coefficients, dropping exact zeros.
pub fn hyper_from_dense(spec: &BasisSpec, m: u32, arr: &ArrayD<f64>) -> Result<CoeffVector> {
    let n = arr.ndim();
    if let Some(&bad) = arr.shape().iter().find(|&&e| e != spec.delta_size(m)) {
        return Err(Error::dims("dense hyperbolic layout", spec.delta_size(m), bad));
    }
    let levels: Vec<u32> = (spec.j0()..=m).collect();
    let mut entries = Vec::with_capacity(arr.len());
    for js in lex_tuples(&levels, n) {
        let ranges: Vec<_> = js
            .iter()
            .map(|&j| spec.block_offset(j)..spec.block_offset(j) + spec.nabla_size(j))
            .collect();
        for_each_in_block(arr, &ranges, |k, v| {
            entries.push((HyperIndex::new(&js, k)?, v));
            Ok(())
        })?;
    }
    let data: BTreeMap<_, _> = entries.into_iter().collect();
    let out = CoeffVector::new(spec, System::Hyperbolic, n, m)?;
    Ok(out.with_data(CoeffData::Hyperbolic(data)))
}

/// All `n`-tuples over `items` in lexicographic order.
pub(crate) fn lex_tuples<T: Copy>(items: &[T], n: usize) -> impl Iterator<Item = Vec<T>> + '_ {
    let base = items.len();
    (0..base.pow(n as u32)).map(move |t| {
        (0..n)
            .map(|a| items[t / base.pow((n - 1 - a) as u32) % base])
            .collect()
    })
}

/// Calls `f(offset, value)` for the nonzero entries of the sub-cube `ranges`
/// in row-major order, with offsets relative to the sub-cube.
pub(crate) fn for_each_in_block(
    arr: &ArrayD<f64>,
    ranges: &[Range<usize>],
    mut f: impl FnMut(&[usize], f64) -> Result<()>,
) -> Result<()> {
    let std = arr.as_standard_layout();
    let flat = std.as_slice().expect("standard layout is contiguous");
    let shape = arr.shape();
    let n = shape.len();
    if ranges.iter().any(|r| r.is_empty()) {
        return Ok(());
    }
    // row-major strides, the last axis walked as a contiguous run
    let mut strides = [1usize; MAX_DIM];
    for a in (0..n - 1).rev() {
        strides[a] = strides[a + 1] * shape[a + 1];
    }
    let inner = &ranges[n - 1];
    let mut pos = [0usize; MAX_DIM];
    loop {
        let base: usize = (0..n - 1).map(|a| (ranges[a].start + pos[a]) * strides[a]).sum();
        for (i, &v) in flat[base + inner.start..base + inner.end].iter().enumerate() {
            if v != 0.0 {
                pos[n - 1] = i;
                f(&pos[..n], v)?;
            }
        }
        let mut a = n - 1;
        loop {
            if a == 0 {
                return Ok(());
            }
            a -= 1;
            pos[a] += 1;
            if pos[a] < ranges[a].len() {
                break;
            }
            pos[a] = 0;
        }
    }
}

/// Dense hyperbolic layout of extent `|Δ_m|` per axis, `m` the truncation level.
pub fn hyper_to_dense(spec: &BasisSpec, coeffs: &CoeffVector) -> Result<ArrayD<f64>> {
    coeffs.check_basis(spec)?;
    let map = coeffs.hyper()?;
    let n = coeffs.dim();
    let m = coeffs.max_level();
    let mut arr = ArrayD::zeros(IxDyn(&vec![spec.delta_size(m); n]));
    let mut pos = [0usize; 3];
    for (idx, &v) in map {
        for a in 0..n {
            let (j, k) = (idx.level(a), idx.position(a));
            if j > m || k >= spec.nabla_size(j) {
                return Err(Error::InvalidIndex(format!("{idx:?} outside truncation {m}")));
            }
            pos[a] = spec.block_offset(j) + k;
        }
        arr[&pos[..n]] = v;
    }
    Ok(arr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis1d::make_haar_basis;
    use crate::transform1d::forward;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_cube(rng: &mut ChaCha8Rng, n: usize, extent: usize) -> ArrayD<f64> {
        ArrayD::from_shape_fn(IxDyn(&vec![extent; n]), |_| rng.gen_range(-1.0..1.0))
    }

    fn max_diff(a: &ArrayD<f64>, b: &ArrayD<f64>) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn constant_data_has_one_coefficient() {
        let spec = make_haar_basis(0);
        let data = ArrayD::from_elem(IxDyn(&[16, 16]), 3.0);
        let c = hyper_forward(&spec, 2, &data).unwrap();
        let big: Vec<_> = c.hyper().unwrap().iter().filter(|(_, v)| v.abs() > 1e-12).collect();
        assert_eq!(big.len(), 1);
        assert_eq!(big[0].0.levels(), &[0, 0]);
        assert!((big[0].1 - 3.0 * 16.0).abs() < 1e-12);
    }

    #[test]
    fn one_dimension_matches_transform1d() {
        let spec = make_haar_basis(1);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let data = random_cube(&mut rng, 1, 32);
        let c = hyper_forward(&spec, 1, &data).unwrap();
        let ms = forward(&spec, data.as_slice().unwrap()).unwrap();
        let dense = hyper_to_dense(&spec, &c).unwrap();
        assert_eq!(dense.as_slice().unwrap(), ms.as_slice());
    }

    #[test]
    fn round_trip_and_axis_order() {
        let spec = make_haar_basis(0);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 1..=3 {
            let data = random_cube(&mut rng, n, 8);
            let c = hyper_forward(&spec, n, &data).unwrap();
            let back = hyper_inverse(&spec, &c).unwrap();
            assert!(max_diff(&back, &data) < 1e-13);
            let rev: Vec<usize> = (0..n).rev().collect();
            let d = hyper_forward_axis_order(&spec, n, &data, &rev).unwrap();
            let (a, b) = (hyper_to_dense(&spec, &c).unwrap(), hyper_to_dense(&spec, &d).unwrap());
            assert!(max_diff(&a, &b) < 1e-13);
        }
    }

    #[test]
    fn unit_coarse_coefficient_is_constant() {
        let spec = make_haar_basis(0);
        let mut c = CoeffVector::new(&spec, System::Hyperbolic, 2, 3).unwrap();
        c.insert_hyper(&spec, HyperIndex::new(&[0, 0], &[0, 0]).unwrap(), 1.0).unwrap();
        let arr = hyper_inverse(&spec, &c).unwrap();
        assert!(arr.iter().all(|&v| (v - 0.125).abs() < 1e-15));
        let zero = CoeffVector::new(&spec, System::Hyperbolic, 2, 3).unwrap();
        assert!(hyper_inverse(&spec, &zero).unwrap().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn shape_errors() {
        let spec = make_haar_basis(0);
        let data = ArrayD::zeros(IxDyn(&[8, 4]));
        assert!(matches!(hyper_forward(&spec, 2, &data), Err(Error::DimensionMismatch { .. })));
        let data = ArrayD::zeros(IxDyn(&[8, 8]));
        assert!(hyper_forward(&spec, 3, &data).is_err());
        let iso = CoeffVector::new(&spec, System::Isotropic, 2, 3).unwrap();
        assert!(matches!(hyper_inverse(&spec, &iso), Err(Error::WrongSystem { .. })));
    }
}
