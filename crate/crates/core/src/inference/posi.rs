use serde::{Deserialize, Serialize};

use crate::error::{Result, RexError};
use crate::special::log_gamma;

/// How the number of PoSI t-statistics is counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMode {
    /// Order bound `(6p/m)^m` on the number of (variable, submodel) pairs.
    AsymptoticRate,
    /// `Σ_{k=1}^{m} k·C(p, k)`, the exact pair count for submodels of size ≤ m.
    ExactCount,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PosiBound {
    pub p: u64,
    pub m: u64,
    pub mode: CountMode,
    /// Natural log of the t-statistic count L.
    pub log_count: f64,
    /// `√(p(1 − L^(−2/(p−1))))`.
    pub bound: f64,
}

fn log_binomial(n: u64, k: u64) -> f64 {
    let lg = |x: f64| log_gamma(x).expect("positive argument");
    lg(n as f64 + 1.0) - lg(k as f64 + 1.0) - lg((n - k) as f64 + 1.0)
}

/// ln Σ_{k=1}^{m} k·C(p, k) by log-sum-exp.
fn exact_log_count_sum(p: u64, m: u64) -> f64 {
    let terms: Vec<f64> = (1..=m)
        .map(|k| (k as f64).ln() + log_binomial(p, k))
        .collect();
    let peak = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    peak + terms.iter().map(|t| (t - peak).exp()).sum::<f64>().ln()
}

/// ReX bound on the PoSI constant for submodels of size at most m.
///
/// The t-statistics are standard Gaussians whose correlation matrix has rank
/// at most p, so the bound is the ReX bound with L variables and rank p.
pub fn posi_bound(p: u64, m: u64, mode: CountMode) -> Result<PosiBound> {
    if p < 2 {
        return Err(RexError::domain("posi_bound requires p >= 2"));
    }
    if m < 1 || m > p {
        return Err(RexError::domain(format!("m must lie in [1, {p}], got {m}")));
    }
    let log_count = match mode {
        CountMode::AsymptoticRate => m as f64 * (6.0 * p as f64 / m as f64).ln(),
        // Σ_k k·C(p,k) = p·2^(p−1)
        CountMode::ExactCount if m == p => (p as f64).ln() + (p - 1) as f64 * 2f64.ln(),
        CountMode::ExactCount => exact_log_count_sum(p, m),
    };
    let rank = p as f64;
    let bound = (rank * -(-2.0 * log_count / (rank - 1.0)).exp_m1()).sqrt();
    Ok(PosiBound {
        p,
        m,
        mode,
        log_count,
        bound,
    })
}
