//! Moving coefficients between the hyperbolic and the isotropic system.

use hyperwave::seqnorms::{sobolev_norm_hyper, sobolev_norm_iso};
use hyperwave::tensorbasis::{hyper_from_iso, hyper_inverse, iso_from_hyper, iso_synthesis, System};
use hyperwave::testfunctions::random_sparse_coefficients;
use hyperwave::{make_dku13_basis, make_haar_basis};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hyperwave::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for spec in [make_haar_basis(0), make_dku13_basis(8)?] {
        let u = random_sparse_coefficients(&spec, System::Hyperbolic, 2, 6, 12, &mut rng)?;
        let v = iso_from_hyper(&spec, &u)?;
        let a = hyper_inverse(&spec, &u)?;
        let b = iso_synthesis(&spec, &v)?;
        let diff = (&a - &b).mapv(f64::abs).fold(0.0, |x: f64, &y| x.max(y));
        println!("{}: {} hyperbolic -> {} isotropic coefficients, same function up to {diff:.1e}", spec.name(), u.len(), v.len());
        for s in [-0.3, 0.0, 0.3] {
            println!("  H^{s}: hyperbolic {:.6}, isotropic {:.6}", sobolev_norm_hyper(&u, s)?, sobolev_norm_iso(&v, s)?);
        }
        let back = hyper_from_iso(&spec, &v)?;
        let worst = u
            .hyper()?
            .iter()
            .map(|(i, x)| (x - back.hyper().map(|b| b.get(i).copied().unwrap_or(0.0)).unwrap_or(0.0)).abs())
            .fold(0.0, f64::max);
        println!("  back to hyperbolic: max error {worst:.1e}");
    }
    Ok(())
}
