//! Deterministic ReX mathematics.
//!
//! For unit loading vectors ℓ₁…ℓ_p in R^d and a uniform direction U on the
//! sphere, `max_j |ℓ_jᵀU|` is asymptotically at most
//! `√(1 − p^(−2/(d−1)))`; multiplying by ‖Z‖₂ ≈ √d gives the bound
//! `√(d(1 − p^(−2/(d−1))))` on the maximum of p standard Gaussians whose
//! correlation matrix has rank d. The squared bound, evaluated at real d,
//!
//! ```text
//! g(d) = d · (1 − p^(−2/(d−1))),   g(1) = 1,
//! ```
//!
//! is strictly increasing and saturates just below `2 ln p`; inverting it
//! turns an observed squared maximum into a rank estimate.
//!
//! All logarithms are natural. Rank 1 is handled by continuity: every
//! `|ℓ_jᵀU|` equals 1, so both bounds are exactly 1.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Result, RexError};
use crate::roots::bisect_increasing;
use crate::special::reg_inc_beta;

/// Default relative half-width of the exact-low band in [`classify_regime`].
pub const DEFAULT_REGIME_MARGIN: f64 = 0.10;

/// Upper end of the rank search bracket, as a multiple of p.
pub const RANK_SEARCH_FACTOR: u64 = 10;

fn check_p(p: u64) -> Result<()> {
    if p < 2 {
        return Err(RexError::domain(format!("p must be at least 2, got {p}")));
    }
    Ok(())
}

fn check_d(d: u64) -> Result<()> {
    if d < 1 {
        return Err(RexError::domain("rank d must be at least 1"));
    }
    Ok(())
}

/// Validated (p, d) pair. d may exceed p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundInputs {
    p: u64,
    d: u64,
}

impl BoundInputs {
    pub fn new(p: u64, d: u64) -> Result<Self> {
        check_p(p)?;
        check_d(d)?;
        Ok(Self { p, d })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn max_corr_bound(&self) -> f64 {
        one_minus_p_pow(self.p, self.d as f64).sqrt()
    }

    pub fn rex_bound(&self) -> f64 {
        rex_bound_sq_real(self.p, self.d as f64).sqrt()
    }

    /// d / ln p.
    pub fn beta(&self) -> f64 {
        self.d as f64 / (self.p as f64).ln()
    }
}

/// `1 − p^(−2/(d−1))` at real d ≥ 1, with the value 1 at d = 1.
fn one_minus_p_pow(p: u64, d: f64) -> f64 {
    if d <= 1.0 {
        return 1.0;
    }
    -(-2.0 * (p as f64).ln() / (d - 1.0)).exp_m1()
}

/// `g(d) = d(1 − p^(−2/(d−1)))` for real `d ≥ 1`; continuous with `g(1) = 1`.
pub fn rex_bound_sq_real(p: u64, d: f64) -> f64 {
    d * one_minus_p_pow(p, d)
}

/// Bound on the maximal correlation between p unit vectors and a uniform direction in R^d.
pub fn max_corr_bound(p: u64, d: u64) -> Result<f64> {
    Ok(BoundInputs::new(p, d)?.max_corr_bound())
}

/// ReX bound on the ℓ∞ norm of a rank-d, p-variate standard Gaussian vector.
pub fn rex_bound(p: u64, d: u64) -> Result<f64> {
    Ok(BoundInputs::new(p, d)?.rex_bound())
}

/// Limit of `‖X‖∞ / √(ln p)` when `d / ln p → β`: `√(β(1 − e^(−2/β)))`.
pub fn trichotomy_limit(beta: f64) -> Result<f64> {
    if !(beta >= 0.0) {
        return Err(RexError::domain("beta must be nonnegative"));
    }
    if beta == 0.0 {
        return Ok(0.0);
    }
    if beta.is_infinite() {
        return Ok(std::f64::consts::SQRT_2);
    }
    Ok((beta * -(-2.0 / beta).exp_m1()).sqrt())
}

/// The separation constant β†, the unique root of `β(1 − e^(−2/β)) = 1`.
pub fn separation_constant() -> f64 {
    static BETA_DAGGER: OnceLock<f64> = OnceLock::new();
    *BETA_DAGGER
        .get_or_init(|| bisect_increasing(|b| b * -(-2.0 / b).exp_m1(), 1.0, 0.1, 10.0, 0.0))
}

/// Whether a rank solve landed inside the search bracket.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RangeFlag {
    Interior,
    /// Target below g(1) = 1; the solution is pinned at d = 1.
    BelowRange,
    /// Target above g(D_max); the solution is pinned at D_max = 10p.
    AboveRange,
}

/// Solves `g(d) = target` for real d in `[1, 10p]`.
pub fn solve_rank(target: f64, p: u64) -> Result<(f64, RangeFlag)> {
    check_p(p)?;
    if !(target >= 0.0) {
        return Err(RexError::domain("squared extreme must be nonnegative"));
    }
    let d_max = (RANK_SEARCH_FACTOR * p) as f64;
    if target < 1.0 {
        return Ok((1.0, RangeFlag::BelowRange));
    }
    if target > rex_bound_sq_real(p, d_max) {
        return Ok((d_max, RangeFlag::AboveRange));
    }
    let d = bisect_increasing(|d| rex_bound_sq_real(p, d), target, 1.0, d_max, 0.0);
    Ok((d, RangeFlag::Interior))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankEstimate {
    pub d_hat: u64,
    pub d_real: f64,
    pub k_inf_sq: f64,
    pub flag: RangeFlag,
}

/// Rank estimate from a squared extreme: the rounded root of `g(d) = k_inf_sq`.
pub fn estimate_rank(k_inf_sq: f64, p: u64) -> Result<RankEstimate> {
    let (d_real, flag) = solve_rank(k_inf_sq, p)?;
    Ok(RankEstimate {
        d_hat: (d_real.round() as u64).max(1),
        d_real,
        k_inf_sq,
        flag,
    })
}

/// The three rank regimes relative to the separation constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankRegime {
    /// d / ln p below β†: extremes fall below √(ln p).
    SuperLow,
    /// d / ln p at β†: extremes concentrate at √(ln p).
    ExactLow,
    /// d / ln p above β†: extremes exceed √(ln p).
    ModeratelyLow,
}

impl fmt::Display for RankRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RankRegime::SuperLow => "super-low",
            RankRegime::ExactLow => "exact-low",
            RankRegime::ModeratelyLow => "moderately-low",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrichotomyRegime {
    pub tag: RankRegime,
    /// d / ln p.
    pub beta: f64,
}

/// Classifies a known rank by `β = d / ln p` against `β†(1 ± margin)`.
pub fn classify_regime(d: u64, p: u64, margin: f64) -> Result<TrichotomyRegime> {
    check_d(d)?;
    if p < 3 {
        return Err(RexError::domain("regime classification requires p >= 3"));
    }
    if !(0.0..1.0).contains(&margin) {
        return Err(RexError::domain("margin must lie in [0, 1)"));
    }
    let beta = d as f64 / (p as f64).ln();
    let dagger = separation_constant();
    let tag = if (beta - dagger).abs() <= dagger * margin {
        RankRegime::ExactLow
    } else if beta < dagger {
        RankRegime::SuperLow
    } else {
        RankRegime::ModeratelyLow
    };
    Ok(TrichotomyRegime { tag, beta })
}

/// `P(|U₁| > a)` for one coordinate of a uniform unit vector in R^d.
///
/// Uses `U₁² ~ Beta(1/2, (d−1)/2)`, evaluated as `I_{1−a²}((d−1)/2, 1/2)` so
/// tiny tails keep their relative precision.
pub fn coord_tail(a: f64, d: u64) -> Result<f64> {
    if d < 2 {
        return Err(RexError::domain("coord_tail requires d >= 2"));
    }
    if !(0.0..=1.0).contains(&a) {
        return Err(RexError::domain("coord_tail requires a in [0, 1]"));
    }
    let one_minus_sq = ((1.0 - a) * (1.0 + a)).clamp(0.0, 1.0);
    Ok(reg_inc_beta(one_minus_sq, 0.5 * (d - 1) as f64, 0.5)?)
}

/// Union bound `min(1, p · P(|U₁| > a))` on `P(max_j |ℓ_jᵀU| > a)`, valid for arbitrary unit ℓ_j.
pub fn bonferroni_max_corr_tail(p: u64, d: u64, a: f64) -> Result<f64> {
    if p < 1 {
        return Err(RexError::domain("p must be at least 1"));
    }
    let tail = coord_tail(a, d)?;
    if tail == 0.0 {
        return Ok(0.0);
    }
    let log_bound = (p as f64).ln() + tail.ln();
    Ok(log_bound.exp().min(1.0))
}

/// `P(max_j |ℓ_jᵀU| ≤ a) = (1 − P(|U₁| > a))^p`, exact for i.i.d. uniform ℓ_j.
pub fn iid_max_corr_cdf(a: f64, p: u64, d: u64) -> Result<f64> {
    if p < 1 {
        return Err(RexError::domain("p must be at least 1"));
    }
    let tail = coord_tail(a, d)?;
    if tail >= 1.0 {
        return Ok(0.0);
    }
    Ok((p as f64 * (-tail).ln_1p()).exp())
}
