//! Weighted sequence norms of one coefficient vector.

use hyperwave::seqnorms::{besov_hybrid_norm, besov_iso_norm, gk_norm, ltau, weak_ltau, NormParams};
use hyperwave::tensorbasis::iso_from_hyper;
use hyperwave::testfunctions::random_decay_coefficients;
use hyperwave::make_haar_basis;

fn main() -> hyperwave::Result<()> {
    let spec = make_haar_basis(0);
    let u = random_decay_coefficients(&spec, 2, 7, 0.0, 1.0, 3)?;
    let v = iso_from_hyper(&spec, &u)?;

    // tau = 1/(s + 1/2) for the approximation scale with q = 0
    for s in [0.5, 1.0] {
        let p = NormParams::approximation_scale(0.0, s);
        println!("s = {s}: tau = {:.4}, hybrid Besov norm {:.6}", p.tau, besov_hybrid_norm(&u, p)?);
    }
    println!("tau = 2 hybrid norm {:.6} equals the Hilbert norm {:.6}", besov_hybrid_norm(&u, NormParams::hilbert(0.0, 0.5))?, gk_norm(&u, 0.0, 0.5)?);
    println!("isotropic B^0.5_(2,2) norm {:.6}", besov_iso_norm(&v, 0.5, 2.0, 2.0)?);

    let values: Vec<f64> = u.values().collect();
    for tau in [0.5, 2.0 / 3.0, 1.0] {
        println!("tau = {tau:.4}: l^tau {:.4}, weak l^tau {:.4}", ltau(&values, tau)?, weak_ltau(&values, tau)?);
    }
    Ok(())
}
