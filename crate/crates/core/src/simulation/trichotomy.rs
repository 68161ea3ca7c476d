use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::kde::{kde, DensityEstimate, DEFAULT_GRID_SIZE};
use crate::error::{Result, RexError};
use crate::parallel::{default_workers, map_replicates};
use crate::sampling::{build_uniform_model, sample_extremes, sample_iid_extremes, RngStream};

/// A rank to simulate: a uniform rank-d model, or p independent variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RankSpec {
    Rank(u64),
    Iid,
}

impl RankSpec {
    /// The effective rank; the i.i.d. case has full rank p.
    pub fn rank(&self, p: u64) -> u64 {
        match *self {
            RankSpec::Rank(d) => d,
            RankSpec::Iid => p,
        }
    }

    // Label for deriving the cell's random streams.
    pub(crate) fn stream_label(&self) -> u64 {
        match *self {
            RankSpec::Rank(d) => d,
            RankSpec::Iid => u64::MAX,
        }
    }
}

impl fmt::Display for RankSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankSpec::Rank(d) => write!(f, "{d}"),
            RankSpec::Iid => f.write_str("iid"),
        }
    }
}

impl FromStr for RankSpec {
    type Err = RexError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("iid") {
            return Ok(RankSpec::Iid);
        }
        match s.parse::<u64>() {
            Ok(d) if d >= 1 => Ok(RankSpec::Rank(d)),
            _ => Err(RexError::domain(format!(
                "rank must be a positive integer or `iid`, got `{s}`"
            ))),
        }
    }
}

impl Serialize for RankSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            RankSpec::Rank(d) => s.serialize_u64(d),
            RankSpec::Iid => s.serialize_str("iid"),
        }
    }
}

impl<'de> Deserialize<'de> for RankSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(0) => Err(serde::de::Error::custom("rank must be positive")),
            Raw::Num(n) => Ok(RankSpec::Rank(n)),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrichotomyConfig {
    pub p: u64,
    pub ranks: Vec<RankSpec>,
    pub reps: usize,
    /// Rows per replicate in the mean-extreme study.
    pub n_for_means: usize,
    pub seed: u64,
}

impl TrichotomyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.p < 2 {
            return Err(RexError::domain("p must be at least 2"));
        }
        if self.ranks.is_empty() {
            return Err(RexError::domain("at least one rank is required"));
        }
        if self.reps < 1 {
            return Err(RexError::domain("reps must be at least 1"));
        }
        if self.ranks.contains(&RankSpec::Rank(0)) {
            return Err(RexError::domain("ranks must be positive"));
        }
        Ok(())
    }

    /// The stream family for one rank; replicate r uses stream r of it.
    pub fn cell_stream(&self, rank: RankSpec) -> RngStream {
        RngStream::new(self.seed, 0)
            .derive(self.p)
            .derive(rank.stream_label())
    }
}

/// The threshold √(ln p) separating the regimes.
pub fn log_threshold(p: u64) -> f64 {
    (p as f64).ln().sqrt()
}

/// Row extremes of one replicate: a fresh model (or i.i.d. variables) and n rows.
pub fn replicate_extremes(p: u64, rank: RankSpec, n: usize, stream: RngStream) -> Vec<f64> {
    let mut rng = stream.rng();
    match rank {
        RankSpec::Iid => sample_iid_extremes(p as usize, n, &mut rng),
        RankSpec::Rank(d) => {
            let model = build_uniform_model(p as usize, d as usize, &mut rng);
            sample_extremes(&model, n, &mut rng)
        }
    }
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn sample_sd(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

/// Single-observation extremes for one rank.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankExtremes {
    pub rank: RankSpec,
    pub extremes: Vec<f64>,
    pub mean: f64,
    pub sd: f64,
    pub fraction_below: f64,
    /// `None` when every draw coincided (only possible with one replicate).
    pub density: Option<DensityEstimate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrichotomyResult {
    pub p: u64,
    pub reps: usize,
    pub seed: u64,
    pub threshold: f64,
    pub ranks: Vec<RankExtremes>,
}

impl TrichotomyResult {
    pub fn get(&self, rank: RankSpec) -> Option<&RankExtremes> {
        self.ranks.iter().find(|r| r.rank == rank)
    }
}

pub fn run_trichotomy(config: &TrichotomyConfig) -> Result<TrichotomyResult> {
    run_trichotomy_with(config, default_workers())
}

/// Draws `reps` single-observation extremes per rank, each from freshly drawn
/// loadings, and summarizes them against √(ln p).
pub fn run_trichotomy_with(config: &TrichotomyConfig, workers: usize) -> Result<TrichotomyResult> {
    config.validate()?;
    let threshold = log_threshold(config.p);
    let mut ranks = Vec::with_capacity(config.ranks.len());
    for &rank in &config.ranks {
        let cell = config.cell_stream(rank);
        let extremes = map_replicates(config.reps, workers, |r| {
            replicate_extremes(config.p, rank, 1, cell.with_stream(r as u64))[0]
        });
        let below = extremes.iter().filter(|&&k| k < threshold).count();
        let density = match kde(&extremes, DEFAULT_GRID_SIZE) {
            Ok(est) => Some(est),
            Err(RexError::DegenerateSample) => None,
            Err(e) => return Err(e),
        };
        ranks.push(RankExtremes {
            rank,
            mean: mean(&extremes),
            sd: sample_sd(&extremes),
            fraction_below: below as f64 / extremes.len() as f64,
            density,
            extremes,
        });
    }
    Ok(TrichotomyResult {
        p: config.p,
        reps: config.reps,
        seed: config.seed,
        threshold,
        ranks,
    })
}

/// Replicate means of K over `n_for_means` rows for one rank.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankMeans {
    pub rank: RankSpec,
    pub means: Vec<f64>,
    pub below: usize,
    pub above: usize,
    pub min: f64,
    pub max: f64,
    pub variance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanSeparationResult {
    pub p: u64,
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
    pub threshold: f64,
    pub ranks: Vec<RankMeans>,
}

impl MeanSeparationResult {
    pub fn get(&self, rank: RankSpec) -> Option<&RankMeans> {
        self.ranks.iter().find(|r| r.rank == rank)
    }
}

pub fn run_mean_separation(config: &TrichotomyConfig) -> Result<MeanSeparationResult> {
    run_mean_separation_with(config, default_workers())
}

/// Per replicate: one fresh model, `n_for_means` rows, and the mean extreme K̄.
///
/// Uses the same streams as [`run_trichotomy_with`], so with one row per
/// replicate the means equal the trichotomy extremes exactly.
pub fn run_mean_separation_with(
    config: &TrichotomyConfig,
    workers: usize,
) -> Result<MeanSeparationResult> {
    config.validate()?;
    if config.n_for_means < 1 {
        return Err(RexError::domain("n_for_means must be at least 1"));
    }
    let threshold = log_threshold(config.p);
    let n = config.n_for_means;
    let ranks = config
        .ranks
        .iter()
        .map(|&rank| {
            let cell = config.cell_stream(rank);
            let means = map_replicates(config.reps, workers, |r| {
                mean(&replicate_extremes(
                    config.p,
                    rank,
                    n,
                    cell.with_stream(r as u64),
                ))
            });
            let below = means.iter().filter(|&&k| k < threshold).count();
            let sd = sample_sd(&means);
            RankMeans {
                rank,
                below,
                above: means.len() - below,
                min: means.iter().copied().fold(f64::INFINITY, f64::min),
                max: means.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                variance: sd * sd,
                means,
            }
        })
        .collect();
    Ok(MeanSeparationResult {
        p: config.p,
        n,
        reps: config.reps,
        seed: config.seed,
        threshold,
        ranks,
    })
}
