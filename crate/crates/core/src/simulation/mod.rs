//! Seeded Monte Carlo studies of row extremes.
//!
//! * [`run_trichotomy`]: single-observation extremes per rank, with density
//!   estimates and the fraction below √(ln p).
//! * [`run_mean_separation`]: replicate means of K over several rows.
//! * [`run_coverage`]: coverage of the rank confidence interval.
//!
//! Each (p, rank) cell owns a stream family derived from the seed and the
//! cell's labels, and replicate r uses stream r of it. Loadings are redrawn
//! for every replicate and independently across ranks. Results are identical
//! for any worker count.

mod coverage;
mod export;
mod kde;
mod trichotomy;

pub use coverage::{
    rows_for_rank, run_coverage, run_coverage_with, CoverageConfig, CoverageRow, CoverageTable,
};
pub use export::{write_coverage_csv, write_density_csv, write_extremes_csv, write_means_csv};
pub use kde::{bandwidth_nrd0, kde, DensityEstimate, DEFAULT_GRID_SIZE};
pub use trichotomy::{
    log_threshold, replicate_extremes, run_mean_separation, run_mean_separation_with,
    run_trichotomy, run_trichotomy_with, MeanSeparationResult, RankExtremes, RankMeans, RankSpec,
    TrichotomyConfig, TrichotomyResult,
};
