//! CSV writers with fixed column schemas.
//!
//! Numbers are written with Rust's shortest round-trip formatting, so the
//! files re-parse to the exact values.

use std::io::Write;

use super::coverage::CoverageTable;
use super::trichotomy::{MeanSeparationResult, TrichotomyResult};
use crate::error::Result;

/// `rank,grid,density`, one line per grid point of every rank's estimate.
pub fn write_density_csv<W: Write>(result: &TrichotomyResult, mut w: W) -> Result<()> {
    writeln!(w, "rank,grid,density")?;
    for r in &result.ranks {
        if let Some(est) = &r.density {
            for (g, v) in est.grid.iter().zip(&est.values) {
                writeln!(w, "{},{:?},{:?}", r.rank, g, v)?;
            }
        }
    }
    Ok(())
}

/// `p,d,n,alpha,reps,coverage,mc_stderr`.
pub fn write_coverage_csv<W: Write>(table: &CoverageTable, mut w: W) -> Result<()> {
    writeln!(w, "p,d,n,alpha,reps,coverage,mc_stderr")?;
    for r in &table.rows {
        writeln!(
            w,
            "{},{},{},{:?},{},{:?},{:?}",
            r.p, r.d, r.n, r.alpha, r.reps, r.coverage, r.mc_stderr
        )?;
    }
    Ok(())
}

/// `rank,replicate,k_value` for the single-observation extremes.
pub fn write_extremes_csv<W: Write>(result: &TrichotomyResult, mut w: W) -> Result<()> {
    writeln!(w, "rank,replicate,k_value")?;
    for r in &result.ranks {
        for (i, k) in r.extremes.iter().enumerate() {
            writeln!(w, "{},{},{:?}", r.rank, i, k)?;
        }
    }
    Ok(())
}

/// `rank,replicate,k_value` where each value is a replicate's mean extreme.
pub fn write_means_csv<W: Write>(result: &MeanSeparationResult, mut w: W) -> Result<()> {
    writeln!(w, "rank,replicate,k_value")?;
    for r in &result.ranks {
        for (i, k) in r.means.iter().enumerate() {
            writeln!(w, "{},{},{:?}", r.rank, i, k)?;
        }
    }
    Ok(())
}
