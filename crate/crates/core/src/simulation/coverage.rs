use serde::{Deserialize, Serialize};

use super::trichotomy::{replicate_extremes, RankSpec};
use crate::error::{Result, RexError};
use crate::inference::rex_confidence_interval;
use crate::parallel::{default_workers, map_replicates};
use crate::sampling::RngStream;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageConfig {
    pub p_values: Vec<u64>,
    pub d_values: Vec<u64>,
    pub alpha: f64,
    pub reps: usize,
    pub seed: u64,
}

/// Rows per replicate for rank d: the nearest integer to 0.8·d, at least one.
pub fn rows_for_rank(d: u64) -> usize {
    ((0.8 * d as f64).round() as usize).max(1)
}

impl CoverageConfig {
    pub fn validate(&self) -> Result<()> {
        if self.p_values.is_empty() || self.d_values.is_empty() {
            return Err(RexError::domain("need at least one p and one d"));
        }
        if self.p_values.iter().any(|&p| p < 2) {
            return Err(RexError::domain("every p must be at least 2"));
        }
        if self.d_values.contains(&0) {
            return Err(RexError::domain("every d must be at least 1"));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(RexError::domain("alpha must lie in (0, 1)"));
        }
        if self.reps < 1 {
            return Err(RexError::domain("reps must be at least 1"));
        }
        Ok(())
    }

    /// Stream family of a (p, d) cell. The level is deliberately not part of
    /// it, so runs at different α see the same data.
    pub fn cell_stream(&self, p: u64, d: u64) -> RngStream {
        RngStream::new(self.seed, 0).derive(p).derive(d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverageRow {
    pub p: u64,
    pub d: u64,
    pub n: usize,
    pub alpha: f64,
    pub reps: usize,
    /// Fraction of replicates with d in the real-valued interval.
    pub coverage: f64,
    /// `√(coverage·(1 − coverage)/reps)`.
    pub mc_stderr: f64,
    /// Fraction with d in the floor/ceil-rounded integer interval.
    pub coverage_int: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageTable {
    pub rows: Vec<CoverageRow>,
}

impl CoverageTable {
    pub fn get(&self, p: u64, d: u64) -> Option<&CoverageRow> {
        self.rows.iter().find(|r| r.p == p && r.d == d)
    }
}

pub fn run_coverage(config: &CoverageConfig) -> Result<CoverageTable> {
    run_coverage_with(config, default_workers())
}

/// Coverage of the rank interval for every (p, d) cell, p-major.
pub fn run_coverage_with(config: &CoverageConfig, workers: usize) -> Result<CoverageTable> {
    config.validate()?;
    let mut rows = Vec::with_capacity(config.p_values.len() * config.d_values.len());
    for &p in &config.p_values {
        for &d in &config.d_values {
            let n = rows_for_rank(d);
            let cell = config.cell_stream(p, d);
            let hits = map_replicates(config.reps, workers, |r| {
                let extremes =
                    replicate_extremes(p, RankSpec::Rank(d), n, cell.with_stream(r as u64));
                rex_confidence_interval(&extremes, p, config.alpha)
                    .map(|ci| (ci.contains(d as f64), ci.contains_int(d)))
            })
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
            let reps = config.reps as f64;
            let coverage = hits.iter().filter(|h| h.0).count() as f64 / reps;
            let coverage_int = hits.iter().filter(|h| h.1).count() as f64 / reps;
            rows.push(CoverageRow {
                p,
                d,
                n,
                alpha: config.alpha,
                reps: config.reps,
                coverage,
                mc_stderr: (coverage * (1.0 - coverage) / reps).sqrt(),
                coverage_int,
            });
        }
    }
    Ok(CoverageTable { rows })
}
