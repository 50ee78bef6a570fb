//! Runs the verification suites and prints their summaries.

use hyperwave::make_haar_basis;
use hyperwave::verify::{run_suite, Suite, SuiteConfig};

fn main() -> hyperwave::Result<()> {
    let spec = make_haar_basis(0);
    let cfg = SuiteConfig {
        samples: 40,
        ..SuiteConfig::default()
    };
    for suite in Suite::EACH {
        let report = run_suite(&spec, suite, &cfg)?;
        print!("{}", report.summary());
        for f in report.failures() {
            println!("  failed: {f:?}");
        }
    }
    let narrow = SuiteConfig {
        m_max: Some(8),
        p_grid: vec![0.6],
        ..SuiteConfig::default()
    };
    let r = run_suite(&spec, Suite::Lemma4, &narrow)?;
    println!("lemma4 at p = 0.6 stopped at level 8 passes: {}", r.passed());
    Ok(())
}
