//! JSON report shared by the inference entry points.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{RankClassification, RankInterval, RankTestOutcome, SignificanceResult};
use crate::bounds::{RangeFlag, RankEstimate};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportInputs {
    pub p: u64,
    pub d0: Option<u64>,
    pub n: usize,
    pub alpha: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalSummary {
    pub d_l: f64,
    pub d_u: f64,
    pub d_l_int: u64,
    pub d_u_int: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InferenceReport {
    pub procedure: String,
    pub inputs: ReportInputs,
    pub statistics: BTreeMap<String, f64>,
    pub interval: Option<IntervalSummary>,
    pub decision: String,
    pub p_value_bound: Option<f64>,
    pub seed: Option<u64>,
    pub flags: Vec<String>,
}

fn flag_name(prefix: &str, flag: RangeFlag) -> Option<String> {
    match flag {
        RangeFlag::Interior => None,
        RangeFlag::BelowRange => Some(format!("{prefix}below_range")),
        RangeFlag::AboveRange => Some(format!("{prefix}above_range")),
    }
}

impl InferenceReport {
    /// Point estimate, interval and regime call from one set of extremes.
    pub fn rank_estimate(
        estimate: &RankEstimate,
        interval: &RankInterval,
        classification: &RankClassification,
    ) -> Self {
        let statistics = BTreeMap::from([
            ("mean_k_sq".to_string(), interval.mean_k_sq),
            ("mean_k".to_string(), classification.mean_k),
            ("d_real".to_string(), estimate.d_real),
            ("d_hat".to_string(), estimate.d_hat as f64),
            ("threshold".to_string(), classification.threshold),
            (
                "band_half_width".to_string(),
                classification.band_half_width,
            ),
        ]);
        let flags = [
            flag_name("estimate_", estimate.flag),
            flag_name("lower_", interval.lower_flag),
            flag_name("upper_", interval.upper_flag),
        ]
        .into_iter()
        .flatten()
        .collect();
        Self {
            procedure: "rex_rank_estimate".into(),
            inputs: ReportInputs {
                p: interval.p,
                d0: None,
                n: interval.n,
                alpha: Some(interval.alpha),
            },
            statistics,
            interval: Some(IntervalSummary {
                d_l: interval.d_l,
                d_u: interval.d_u,
                d_l_int: interval.d_l_int,
                d_u_int: interval.d_u_int,
            }),
            decision: classification.regime.to_string(),
            p_value_bound: None,
            seed: None,
            flags,
        }
    }

    pub fn rank_test(outcome: &RankTestOutcome) -> Self {
        let statistics = BTreeMap::from([
            ("statistic".to_string(), outcome.statistic),
            ("df".to_string(), outcome.df as f64),
            ("lower_critical".to_string(), outcome.lower_critical),
            ("upper_critical".to_string(), outcome.upper_critical),
            ("p_value".to_string(), outcome.p_value),
        ]);
        Self {
            procedure: "rex_rank_test".into(),
            inputs: ReportInputs {
                p: outcome.p,
                d0: Some(outcome.d0),
                n: outcome.n,
                alpha: Some(outcome.alpha),
            },
            statistics,
            interval: None,
            decision: if outcome.reject {
                "reject"
            } else {
                "fail_to_reject"
            }
            .into(),
            p_value_bound: None,
            seed: None,
            flags: Vec::new(),
        }
    }

    pub fn significance(result: &SignificanceResult) -> Self {
        let statistics = BTreeMap::from([
            ("max_abs_corr".to_string(), result.max_abs_corr),
            ("threshold".to_string(), result.threshold),
            ("argmax_index".to_string(), result.argmax_index as f64),
        ]);
        Self {
            procedure: "overall_significance".into(),
            inputs: ReportInputs {
                p: result.p as u64,
                d0: None,
                n: result.n,
                alpha: Some(result.alpha),
            },
            statistics,
            interval: None,
            decision: if result.reject {
                "reject"
            } else {
                "fail_to_reject"
            }
            .into(),
            p_value_bound: Some(result.p_value_bound),
            seed: None,
            flags: if result.reject_at_alpha {
                vec!["p_value_bound_below_alpha".into()]
            } else {
                Vec::new()
            },
        }
    }

    pub fn with_seed(mut self, seed: Option<u64>) -> Self {
        self.seed = seed;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::estimate_rank;
    use crate::inference::{classify_from_extremes, rank_test, rex_confidence_interval};

    #[test]
    fn estimate_report_shape() {
        let k = [2.0, 2.4, 1.9];
        let ci = rex_confidence_interval(&k, 3000, 0.05).unwrap();
        let est = estimate_rank(ci.mean_k_sq, 3000).unwrap();
        let cls = classify_from_extremes(&k, 3000).unwrap();
        let rep = InferenceReport::rank_estimate(&est, &ci, &cls).with_seed(Some(9));
        let v = serde_json::to_value(&rep).unwrap();
        assert_eq!(v["procedure"], "rex_rank_estimate");
        assert_eq!(v["inputs"]["p"], 3000);
        assert_eq!(v["inputs"]["n"], 3);
        assert!(v["inputs"]["d0"].is_null());
        assert_eq!(v["interval"]["d_l"], ci.d_l);
        assert_eq!(v["decision"], "super-low");
        assert_eq!(v["seed"], 9);
        assert!(v["p_value_bound"].is_null());
        let back: InferenceReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, rep);
    }

    #[test]
    fn zero_input_is_flagged() {
        let k = [0.0];
        let ci = rex_confidence_interval(&k, 3000, 0.05).unwrap();
        let est = estimate_rank(ci.mean_k_sq, 3000).unwrap();
        let cls = classify_from_extremes(&k, 3000).unwrap();
        let rep = InferenceReport::rank_estimate(&est, &ci, &cls);
        assert!(rep.flags.contains(&"estimate_below_range".to_string()));
        assert_eq!(rep.statistics["d_hat"], 1.0);
    }

    #[test]
    fn rank_test_report() {
        let t = rank_test(&[1.0, 1.2], 100, 2, 0.05).unwrap();
        let rep = InferenceReport::rank_test(&t);
        assert_eq!(rep.inputs.d0, Some(2));
        assert_eq!(rep.statistics["statistic"], t.statistic);
    }
}
