use serde::{Deserialize, Serialize};

use super::{check_alpha, check_extremes};
use crate::bounds::{solve_rank, RangeFlag};
use crate::error::{Result, RexError};
use crate::special::normal_quantile;

/// Confidence interval for the rank at level 1 − α.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankInterval {
    pub d_l: f64,
    pub d_u: f64,
    /// floor(d_l)
    pub d_l_int: u64,
    /// ceil(d_u)
    pub d_u_int: u64,
    pub alpha: f64,
    pub n: usize,
    pub p: u64,
    pub mean_k_sq: f64,
    pub lower_flag: RangeFlag,
    pub upper_flag: RangeFlag,
}

impl RankInterval {
    /// Whether `d` lies in the real-valued interval `[d_l, d_u]`.
    pub fn contains(&self, d: f64) -> bool {
        self.d_l <= d && d <= self.d_u
    }

    /// Whether `d` lies in the widened integer interval.
    pub fn contains_int(&self, d: u64) -> bool {
        self.d_l_int <= d && d <= self.d_u_int
    }
}

/// Square-root-transform interval for the rank from row extremes.
///
/// With `K̄² = (1/n) Σ K_i²`, the endpoints solve
/// `√g(d_l) = √K̄² − z_{1−α/2}/√(2n)` and `√g(d_u) = √K̄² + z_{1−α/2}/√(2n)`,
/// where `g(d) = d(1 − p^(−2/(d−1)))`. A lower target at or below g(1) = 1
/// clamps d_l to 1; an upper target beyond the search range pins d_u at 10p
/// and sets `upper_flag` to `AboveRange`.
pub fn rex_confidence_interval(extremes: &[f64], p: u64, alpha: f64) -> Result<RankInterval> {
    check_extremes(extremes)?;
    check_alpha(alpha)?;
    if p < 2 {
        return Err(RexError::domain("p must be at least 2"));
    }
    let n = extremes.len();
    let mean_k_sq = extremes.iter().map(|k| k * k).sum::<f64>() / n as f64;
    let z = normal_quantile(1.0 - 0.5 * alpha)?;
    let half_width = z / (2.0 * n as f64).sqrt();
    let root = mean_k_sq.sqrt();

    let lower_target = (root - half_width).max(0.0);
    let upper_target = root + half_width;
    let (d_l, lower_flag) = solve_rank(lower_target * lower_target, p)?;
    let (d_u, upper_flag) = solve_rank(upper_target * upper_target, p)?;

    Ok(RankInterval {
        d_l,
        d_u,
        d_l_int: (d_l.floor() as u64).max(1),
        d_u_int: d_u.ceil() as u64,
        alpha,
        n,
        p,
        mean_k_sq,
        lower_flag,
        upper_flag,
    })
}
