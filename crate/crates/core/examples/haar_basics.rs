//! Univariate Haar transform: masks, a forward/inverse pair and cell values.

use hyperwave::basis1d::evaluate_on_dyadic_grid;
use hyperwave::transform1d::{forward, inverse};
use hyperwave::{make_haar_basis, LevelIndex};

fn main() -> hyperwave::Result<()> {
    let spec = make_haar_basis(0);
    let m = spec.masks(2)?;
    println!("M_{{2,0}} entries: {:?}", m.primal_coarse.triplets().collect::<Vec<_>>());
    println!("M_{{2,1}} entries: {:?}", m.primal_detail.triplets().collect::<Vec<_>>());

    let x: Vec<f64> = (0..16).map(|i| (i as f64 * 0.4).sin()).collect();
    let d = forward(&spec, &x)?;
    for j in 0..=d.level() {
        println!("level {j}: {:?}", d.block(j).iter().map(|v| format!("{v:+.3}")).collect::<Vec<_>>());
    }
    let back = inverse(&spec, &d)?;
    let err = x.iter().zip(&back).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("round trip error {err:.2e}");

    let psi = evaluate_on_dyadic_grid(&spec, LevelIndex::wavelet(2, 1), 4)?;
    println!("psi_(2,1) on 16 cells: {psi:?}");
    Ok(())
}
