//! Hyperbolic against isotropic N-term rates for the sample functions.

use hyperwave::nterm::{doubling_grid, error_curve, fit_rate};
use hyperwave::tensorbasis::{hyper_forward, iso_analysis};
use hyperwave::testfunctions::{sample_function, values_to_single_scale, Kind, SampleParams};
use hyperwave::make_haar_basis;

fn main() -> hyperwave::Result<()> {
    let spec = make_haar_basis(0);
    let grid = doubling_grid(4096);
    println!("{:12} {:>10} {:>10}", "kind", "hyperbolic", "isotropic");
    for kind in [Kind::Smooth, Kind::TensorKink, Kind::PointKink] {
        let c = values_to_single_scale(&sample_function(&spec, kind, &SampleParams::default(), 2, 8)?);
        let hyper = fit_rate(&error_curve(&hyper_forward(&spec, 2, &c)?, 0.0, &grid)?, 16, 4096)?;
        let iso = fit_rate(&error_curve(&iso_analysis(&spec, 2, &c)?, 0.0, &grid)?, 16, 4096)?;
        println!("{:12} {hyper:>10.4} {iso:>10.4}", kind.name());
    }
    Ok(())
}
