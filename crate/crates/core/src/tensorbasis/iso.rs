use std::collections::BTreeMap;

use ndarray::{ArrayD, IxDyn, Slice};

use super::hyper::{apply_along, cube_level, for_each_in_block, lex_tuples};
use super::{iso_extent, CoeffData, CoeffVector, IsoIndex, System};
use crate::basis1d::BasisSpec;
use crate::error::{Error, Result};
use crate::transform1d::{analysis_step, synthesis_step, Cascade};

/// Isotropic coefficients of single-scale data.
///
/// Level by level, one analysis step is applied along every axis of the
/// current coarse cube; the `2^n - 1` mixed blocks are the wavelet
/// coefficients of that level.
pub fn iso_analysis(spec: &BasisSpec, n: usize, data: &ArrayD<f64>) -> Result<CoeffVector> {
    let m = cube_level(spec, n, data)?;
    let cascade = Cascade::new(spec, m)?;
    let mut arr = data.clone();
    for l in (spec.j0() + 1..=m).rev() {
        let size = spec.delta_size(l);
        let set = cascade.level_masks(l);
        // one contiguous copy per level keeps the lanes cheap to walk
        let mut cube = arr.slice_each_axis(|_| Slice::from(0..size)).to_owned();
        for axis in 0..n {
            apply_along(cube.view_mut(), axis, &|b, s| analysis_step(set, b, s));
        }
        arr.slice_each_axis_mut(|_| Slice::from(0..size)).assign(&cube);
    }
    iso_from_dense(spec, m, &arr)
}

/// Single-scale data from isotropic coefficients; inverse of [`iso_analysis`].
pub fn iso_synthesis(spec: &BasisSpec, coeffs: &CoeffVector) -> Result<ArrayD<f64>> {
    let mut arr = iso_to_dense(spec, coeffs)?;
    let m = coeffs.max_level();
    let cascade = Cascade::new(spec, m)?;
    for l in spec.j0() + 1..=m {
        let size = spec.delta_size(l);
        let set = cascade.level_masks(l);
        // one contiguous copy per level keeps the lanes cheap to walk
        let mut cube = arr.slice_each_axis(|_| Slice::from(0..size)).to_owned();
        for axis in 0..coeffs.dim() {
            apply_along(cube.view_mut(), axis, &|b, s| synthesis_step(set, b, s));
        }
        arr.slice_each_axis_mut(|_| Slice::from(0..size)).assign(&cube);
    }
    Ok(arr)
}

/// Reads the dense isotropic layout, dropping exact zeros.
pub(crate) fn iso_from_dense(spec: &BasisSpec, m: u32, arr: &ArrayD<f64>) -> Result<CoeffVector> {
    let n = arr.ndim();
    if let Some(&bad) = arr.shape().iter().find(|&&e| e != spec.delta_size(m)) {
        return Err(Error::dims("dense isotropic layout", spec.delta_size(m), bad));
    }
    let mut entries = Vec::with_capacity(arr.len());
    for level in spec.j0()..=m {
        for e in lex_tuples(&[0u8, 1], n) {
            // the coarsest level holds only the scaling block
            if (level == spec.j0()) == e.contains(&1) {
                continue;
            }
            let ranges: Vec<_> = e
                .iter()
                .map(|&ea| match ea {
                    0 => 0..iso_extent(spec, level, 0),
                    _ => spec.block_offset(level)..spec.delta_size(level),
                })
                .collect();
            for_each_in_block(arr, &ranges, |k, v| {
                entries.push((IsoIndex::new(level, &e, k)?, v));
                Ok(())
            })?;
        }
    }
    let data: BTreeMap<_, _> = entries.into_iter().collect();
    let out = CoeffVector::new(spec, System::Isotropic, n, m)?;
    Ok(out.with_data(CoeffData::Isotropic(data)))
}

pub(crate) fn iso_to_dense(spec: &BasisSpec, coeffs: &CoeffVector) -> Result<ArrayD<f64>> {
    coeffs.check_basis(spec)?;
    let map = coeffs.iso()?;
    let n = coeffs.dim();
    let m = coeffs.max_level();
    let mut arr = ArrayD::zeros(IxDyn(&vec![spec.delta_size(m); n]));
    let mut pos = [0usize; 3];
    for (idx, &v) in map {
        let level = idx.level();
        if level > m {
            return Err(Error::InvalidIndex(format!("{idx:?} outside truncation {m}")));
        }
        for a in 0..n {
            let k = idx.position(a);
            let e = idx.kind()[a];
            if k >= super::iso_extent(spec, level, e) {
                return Err(Error::InvalidIndex(format!("{idx:?} position out of range")));
            }
            pos[a] = if level > spec.j0() && e == 1 {
                spec.delta_size(level - 1) + k
            } else {
                k
            };
        }
        arr[&pos[..n]] = v;
    }
    Ok(arr)
}
