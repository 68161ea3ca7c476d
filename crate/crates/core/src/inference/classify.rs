use serde::{Deserialize, Serialize};

use super::check_extremes;
use crate::bounds::RankRegime;
use crate::error::{Result, RexError};
use crate::special::normal_quantile;

/// Regime call from observed extremes, with the evidence behind it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankClassification {
    pub regime: RankRegime,
    /// K̄ = (1/n) Σ K_i.
    pub mean_k: f64,
    /// √(ln p).
    pub threshold: f64,
    /// z_{0.975} · s / √n, zero when n = 1.
    pub band_half_width: f64,
    pub n: usize,
    pub p: u64,
}

/// Compares the mean extreme against √(ln p).
///
/// Within `z_{0.975}·s/√n` of the threshold the call is exact-low; below it
/// super-low, above it moderately-low. With one observation the band is
/// empty.
pub fn classify_from_extremes(extremes: &[f64], p: u64) -> Result<RankClassification> {
    check_extremes(extremes)?;
    if p < 3 {
        return Err(RexError::domain("classification requires p >= 3"));
    }
    let n = extremes.len();
    let mean_k = extremes.iter().sum::<f64>() / n as f64;
    let threshold = (p as f64).ln().sqrt();
    let band_half_width = if n > 1 {
        let var = extremes.iter().map(|k| (k - mean_k).powi(2)).sum::<f64>() / (n - 1) as f64;
        normal_quantile(0.975)? * var.sqrt() / (n as f64).sqrt()
    } else {
        0.0
    };
    let gap = mean_k - threshold;
    let regime = if gap.abs() <= band_half_width || gap == 0.0 {
        RankRegime::ExactLow
    } else if gap < 0.0 {
        RankRegime::SuperLow
    } else {
        RankRegime::ModeratelyLow
    };
    Ok(RankClassification {
        regime,
        mean_k,
        threshold,
        band_half_width,
        n,
        p,
    })
}
