use serde::{Deserialize, Serialize};

use crate::bounds::{bonferroni_max_corr_tail, max_corr_bound};
use crate::error::{Result, RexError};
use crate::sampling::SampleMatrix;

use super::check_alpha;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SignificanceOptions {
    /// Subtract column means before scaling to unit length. Off by default.
    pub center: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignificanceResult {
    pub max_abs_corr: f64,
    /// √(1 − p^(−2/(n−1))).
    pub threshold: f64,
    /// `max_abs_corr > threshold`.
    pub reject: bool,
    /// Union bound on the null probability of a maximal correlation this large.
    pub p_value_bound: f64,
    /// 0-based column achieving the maximum.
    pub argmax_index: usize,
    pub alpha: f64,
    /// `p_value_bound <= alpha`.
    pub reject_at_alpha: bool,
    pub n: usize,
    pub p: usize,
}

fn unit_vector(values: &mut [f64], center: bool) -> bool {
    if center {
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        values.iter_mut().for_each(|v| *v -= mean);
    }
    let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !(norm > 0.0) || !norm.is_finite() {
        return false;
    }
    values.iter_mut().for_each(|v| *v /= norm);
    true
}

/// Overall significance test for a regression of `response` on the columns of `design`.
///
/// Columns and response are scaled to unit length; the statistic is the
/// largest absolute inner product. Under a spherically symmetric null the
/// response direction is uniform on S^(n−1), so the statistic is compared to
/// `√(1 − p^(−2/(n−1)))`.
///
/// That threshold sits at the typical size of a null maximum, so `reject`
/// fires under the null about 20% of the time for moderate p and n; use
/// `reject_at_alpha`, based on the union-bound p-value, for a level-α decision.
pub fn overall_significance_test(
    design: &SampleMatrix,
    response: &[f64],
    alpha: f64,
) -> Result<SignificanceResult> {
    overall_significance_test_with(design, response, alpha, SignificanceOptions::default())
}

pub fn overall_significance_test_with(
    design: &SampleMatrix,
    response: &[f64],
    alpha: f64,
    options: SignificanceOptions,
) -> Result<SignificanceResult> {
    check_alpha(alpha)?;
    let (n, p) = (design.n(), design.p());
    if response.len() != n {
        return Err(RexError::DimensionMismatch {
            expected: n,
            found: response.len(),
        });
    }
    if n < 2 {
        return Err(RexError::domain("the significance test needs n >= 2"));
    }
    if p < 2 {
        return Err(RexError::domain("the significance test needs p >= 2"));
    }

    let mut u = response.to_vec();
    if !unit_vector(&mut u, options.center) {
        return Err(RexError::ZeroNormResponse);
    }

    let mut best = (0usize, -1.0f64);
    let mut column = vec![0.0; n];
    for j in 0..p {
        for (i, c) in column.iter_mut().enumerate() {
            *c = design.row(i)[j];
        }
        if !unit_vector(&mut column, options.center) {
            return Err(RexError::ZeroNormColumn { index: j });
        }
        let corr = column
            .iter()
            .zip(&u)
            .map(|(a, b)| a * b)
            .sum::<f64>()
            .abs()
            .min(1.0);
        if corr > best.1 {
            best = (j, corr);
        }
    }
    let (argmax_index, max_abs_corr) = best;

    let threshold = max_corr_bound(p as u64, n as u64)?;
    let p_value_bound = bonferroni_max_corr_tail(p as u64, n as u64, max_abs_corr)?;
    Ok(SignificanceResult {
        max_abs_corr,
        threshold,
        reject: max_abs_corr > threshold,
        p_value_bound,
        argmax_index,
        alpha,
        reject_at_alpha: p_value_bound <= alpha,
        n,
        p,
    })
}

/// `√(2 ln p / n)`, the large-n limit of the significance threshold.
pub fn universal_threshold_limit(p: u64, n: u64) -> Result<f64> {
    if p < 2 || n < 2 {
        return Err(RexError::domain(
            "universal threshold needs p >= 2 and n >= 2",
        ));
    }
    Ok(threshold_limit_from_log((p as f64).ln(), n))
}

fn threshold_limit_from_log(log_p: f64, n: u64) -> f64 {
    (2.0 * log_p / n as f64).sqrt()
}
