//! The (1, 3) basis over box functions: boundary wavelet values, duals and a mask file.

use hyperwave::basis1d::{evaluate_on_dyadic_grid, parse_mask_file, write_mask_file};
use hyperwave::verify::{check_biorthogonality, check_riesz};
use hyperwave::{make_dku13_basis, LevelIndex};

fn main() -> hyperwave::Result<()> {
    let spec = make_dku13_basis(12)?;

    // cell values at level 3, the first two wavelets
    for k in 0..2 {
        let v = evaluate_on_dyadic_grid(&spec, LevelIndex::wavelet(3, k), 4)?;
        let cells: Vec<String> = v.chunks(2).map(|c| format!("{:+.6}", c[0])).collect();
        println!("psi_(3,{k}): {}", cells.join(" "));
    }

    let m = spec.masks(5)?;
    println!(
        "level 5: primal detail span {}, dual detail span {}",
        m.primal_detail.column_span(),
        m.dual_detail.column_span()
    );
    for m in [4, 8, 12] {
        println!("biorthogonality defect at m = {m}: {:.2e}", check_biorthogonality(&spec, m)?);
    }
    for m in 3..=6 {
        let r = check_riesz(&spec, m)?;
        println!("m = {m}: Gram eigenvalues [{:.4}, {:.4}], condition {:.4}", r.lambda_min, r.lambda_max, r.condition);
    }

    let text = write_mask_file(&spec, 5)?;
    println!("mask file: {} lines, header `{}`", text.lines().count(), text.lines().next().unwrap_or(""));
    let back = parse_mask_file(&text, "dku13")?;
    println!("reloaded `{}` with levels {}..={}", back.name(), back.j0(), back.max_level());
    Ok(())
}
