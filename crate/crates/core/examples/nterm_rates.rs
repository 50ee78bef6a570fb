//! Best N-term error curves and fitted rates.

use hyperwave::nterm::{doubling_grid, error_curve, fit_rate, jackson_bernstein_ratios};
use hyperwave::tensorbasis::hyper_forward;
use hyperwave::testfunctions::{random_decay_coefficients, sample_function, values_to_single_scale, Kind, SampleParams};
use hyperwave::make_haar_basis;

fn main() -> hyperwave::Result<()> {
    let spec = make_haar_basis(0);
    let grid = doubling_grid(4096);

    let u = random_decay_coefficients(&spec, 2, 8, 0.0, 1.0, 0)?;
    let curve = error_curve(&u, 0.0, &grid)?;
    for (n, e) in curve.errors.iter().filter(|(n, _)| *n >= 16) {
        println!("N = {n:5}  E_N = {e:.4e}");
    }
    println!("random_decay: fitted rate {:.4}", fit_rate(&curve, 16, 4096)?);
    let (jackson, bernstein) = jackson_bernstein_ratios(&u, 0.0, 1.0)?;
    println!("Jackson ratio {jackson:.4}, Bernstein ratio {bernstein:.4}");

    for kind in [Kind::Smooth, Kind::TensorKink, Kind::PointKink] {
        let values = sample_function(&spec, kind, &SampleParams::default(), 2, 8)?;
        let u = hyper_forward(&spec, 2, &values_to_single_scale(&values))?;
        for q in [0.0, 0.5] {
            let rate = fit_rate(&error_curve(&u, q, &grid)?, 16, 4096)?;
            println!("{:12} q = {q}: rate {rate:.4}", kind.name());
        }
    }
    Ok(())
}
