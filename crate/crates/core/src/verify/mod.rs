//! Numerical checks of the structural estimates behind the approximation results.
//!
//! Every check is a pure function of its inputs; the [`suite`] module bundles
//! them into named sweeps with a CSV report.

mod checks;
mod embedding;
mod pnorm;
mod report;
pub mod suite;

pub use checks::{
    check_biorthogonality, check_kron_identity, check_riesz, check_transform_norms, decay_sweep, running_max,
    stabilizes, RieszEstimate, TransformNormReport, TransformNorms, KRON_MAX_FACTOR, NORM_TRIALS,
    STABILITY_TOLERANCE,
};
pub use embedding::{check_embedding_chain, embedding_window_warning, observe_sandwich, EmbeddingRatios};
pub use pnorm::{matrix_p_norm_bound, operator_p_norm_estimate, spectral_norm, vector_p_norm};
pub use report::{format_float, Report, ReportRow};
pub use suite::{run_suite, running_max_spread, Suite, SuiteConfig};
