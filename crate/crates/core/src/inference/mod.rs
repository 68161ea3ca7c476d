//! Statistical procedures built on the ReX bounds.
//!
//! For fixed rank d and large p, `‖X‖∞ / √(1 − p^(−2/(d−1)))` is
//! approximately χ_d under uniformly distributed loadings. The procedures
//! here turn per-observation maxima K_i into interval estimates, tests and
//! regime calls for d, and they remain usable with fewer observations than d.

mod classify;
mod interval;
mod noise;
mod posi;
pub mod report;
mod significance;

pub use classify::{classify_from_extremes, RankClassification};
pub use interval::{rex_confidence_interval, RankInterval};
pub use noise::{noise_admissibility, NoiseDiagnostic, NOISE_FLAG_RATIO};
pub use posi::{posi_bound, CountMode, PosiBound};
pub use rank_test::{rank_test, RankTestOutcome};
pub use report::InferenceReport;
pub use significance::{
    overall_significance_test, overall_significance_test_with, universal_threshold_limit,
    SignificanceOptions, SignificanceResult,
};

use crate::error::{Result, RexError};

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(RexError::domain(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )))
    }
}

pub(crate) fn check_extremes(extremes: &[f64]) -> Result<()> {
    if extremes.is_empty() {
        return Err(RexError::EmptyInput);
    }
    if let Some(bad) = extremes.iter().find(|k| !(k.is_finite() && **k >= 0.0)) {
        return Err(RexError::domain(format!(
            "extremes must be finite and nonnegative, found {bad}"
        )));
    }
    Ok(())
}
