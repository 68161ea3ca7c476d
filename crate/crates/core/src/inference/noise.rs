use serde::{Deserialize, Serialize};

use crate::bounds::rex_bound;
use crate::error::{Result, RexError};

/// Ratio at which the noise diagnostic raises its advisory flag.
pub const NOISE_FLAG_RATIO: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseDiagnostic {
    /// σ_max · √(ln p) / rex_bound(p, d).
    pub ratio: f64,
    /// `ratio >= NOISE_FLAG_RATIO`. Advisory only.
    pub flagged: bool,
    pub sigma_max: f64,
    pub p: u64,
    pub d: u64,
}

/// Size of the noise maximum relative to the signal bound.
///
/// Extremes of `Y = X + ε` behave like those of X while `σ_max·√(ln p)` is
/// negligible next to `rex_bound(p, d)`.
pub fn noise_admissibility(p: u64, d: u64, sigma_max: f64) -> Result<NoiseDiagnostic> {
    if p < 3 {
        return Err(RexError::domain("noise diagnostic requires p >= 3"));
    }
    if !(sigma_max >= 0.0) || !sigma_max.is_finite() {
        return Err(RexError::domain("sigma_max must be finite and nonnegative"));
    }
    let ratio = sigma_max * (p as f64).ln().sqrt() / rex_bound(p, d)?;
    Ok(NoiseDiagnostic {
        ratio,
        flagged: ratio >= NOISE_FLAG_RATIO,
        sigma_max,
        p,
        d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_noise() {
        let n = noise_admissibility(3000, 3, 0.0).unwrap();
        assert_eq!(n.ratio, 0.0);
        assert!(!n.flagged);
    }

    #[test]
    fn linear_in_sigma() {
        let a = noise_admissibility(500, 7, 0.02).unwrap().ratio;
        let b = noise_admissibility(500, 7, 0.06).unwrap().ratio;
        assert!((b - 3.0 * a).abs() < 1e-15);
    }

    #[test]
    fn small_noise_example() {
        let n = noise_admissibility(3000, 3, 0.05).unwrap();
        let want = 0.05 * 3000f64.ln().sqrt() / (3.0 * (1.0 - 1.0 / 3000.0f64)).sqrt();
        assert!((n.ratio - want).abs() < 1e-14);
        assert!((n.ratio - 0.0817).abs() < 1e-4);
        assert!(!n.flagged);
        assert!(noise_admissibility(3000, 3, 0.1).unwrap().flagged);
    }

    #[test]
    fn domain() {
        assert!(noise_admissibility(2, 3, 0.1).is_err());
        assert!(noise_admissibility(10, 3, -0.1).is_err());
    }
}
