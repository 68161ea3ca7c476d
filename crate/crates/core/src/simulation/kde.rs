use serde::{Deserialize, Serialize};

use crate::error::{Result, RexError};

/// Default number of grid points, matching R's `density()`.
pub const DEFAULT_GRID_SIZE: usize = 512;

// Kernel contributions beyond this many bandwidths are below e^(-32) and dropped.
const KERNEL_CUTOFF: f64 = 8.0;

/// Gaussian kernel density estimate on an evenly spaced grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityEstimate {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub bandwidth: f64,
}

impl DensityEstimate {
    /// Trapezoid-rule integral of the estimate over its grid.
    pub fn integral(&self) -> f64 {
        self.grid
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
            .sum()
    }
}

/// Linear-interpolation quantile of sorted data (R's default, type 7).
fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Silverman's rule of thumb as implemented by R's `bw.nrd0`.
///
/// `sorted` must be ascending and non-empty.
pub fn bandwidth_nrd0(sorted: &[f64]) -> f64 {
    let n = sorted.len() as f64;
    let mean = sorted.iter().sum::<f64>() / n;
    let sd = if sorted.len() > 1 {
        (sorted.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    let iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
    let mut lo = sd.min(iqr / 1.34);
    if !(lo > 0.0) {
        lo = if sd > 0.0 {
            sd
        } else if sorted[0] != 0.0 {
            sorted[0].abs()
        } else {
            1.0
        };
    }
    0.9 * lo * n.powf(-0.2)
}

/// Gaussian KDE with the nrd0 bandwidth on `grid_size` points spanning
/// `[min − 3h, max + 3h]`.
pub fn kde(samples: &[f64], grid_size: usize) -> Result<DensityEstimate> {
    if samples.is_empty() {
        return Err(RexError::EmptyInput);
    }
    if grid_size < 2 {
        return Err(RexError::domain("grid_size must be at least 2"));
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(RexError::domain("samples must be finite"));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let (min, max) = (sorted[0], sorted[sorted.len() - 1]);
    if min == max {
        return Err(RexError::DegenerateSample);
    }

    let h = bandwidth_nrd0(&sorted);
    let start = min - 3.0 * h;
    let step = (max - min + 6.0 * h) / (grid_size - 1) as f64;
    let norm = 1.0 / (sorted.len() as f64 * h * (2.0 * std::f64::consts::PI).sqrt());

    let grid: Vec<f64> = (0..grid_size).map(|i| start + step * i as f64).collect();
    let values = grid
        .iter()
        .map(|&g| {
            let from = sorted.partition_point(|&x| x < g - KERNEL_CUTOFF * h);
            let to = sorted.partition_point(|&x| x <= g + KERNEL_CUTOFF * h);
            let sum: f64 = sorted[from..to]
                .iter()
                .map(|&x| {
                    let u = (g - x) / h;
                    (-0.5 * u * u).exp()
                })
                .sum();
            sum * norm
        })
        .collect();

    Ok(DensityEstimate {
        grid,
        values,
        bandwidth: h,
    })
}
