//! Tensor product coefficients of a sampled function and the inverse transform.

use hyperwave::tensorbasis::{hyper_forward, hyper_inverse, iso_analysis};
use hyperwave::testfunctions::{sample_function, single_scale_to_values, values_to_single_scale, Kind, SampleParams};
use hyperwave::make_haar_basis;

fn main() -> hyperwave::Result<()> {
    let spec = make_haar_basis(0);
    let m = 7;
    let values = sample_function(&spec, Kind::TensorKink, &SampleParams::default(), 2, m)?;
    let c = values_to_single_scale(&values);

    let u = hyper_forward(&spec, 2, &c)?;
    let v = iso_analysis(&spec, 2, &c)?;
    for tol in [1e-2, 1e-4, 1e-6] {
        let big = |it: Box<dyn Iterator<Item = f64> + '_>| it.filter(|x| x.abs() > tol).count();
        println!(
            "|coefficient| > {tol:.0e}: hyperbolic {}, isotropic {} (of {})",
            big(u.values()),
            big(v.values()),
            u.len()
        );
    }

    let back = single_scale_to_values(&hyper_inverse(&spec, &u)?);
    let err = (&back - &values).mapv(f64::abs).fold(0.0, |a: f64, &b| a.max(b));
    println!("max reconstruction error {err:.2e}");
    Ok(())
}
