use std::fmt::Write as _;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;
use serde_json::json;

use rex_core::bounds::{
    classify_regime, estimate_rank, separation_constant, trichotomy_limit, BoundInputs,
};
use rex_core::inference::{
    classify_from_extremes, overall_significance_test_with, posi_bound, rank_test,
    rex_confidence_interval, CountMode, InferenceReport, SignificanceOptions,
};
use rex_core::sampling::{
    add_noise, build_uniform_model, sample_observations, LowRankModel, NoiseSpec, RngStream,
    SampleMatrix,
};
use rex_core::simulation::{
    run_coverage, run_mean_separation, run_trichotomy, write_coverage_csv, write_density_csv,
    write_extremes_csv, write_means_csv, CoverageConfig, RankSpec, TrichotomyConfig,
};

use crate::args::{
    BoundArgs, Command, CoverageArgs, EstimateArgs, GenerateArgs, PosiArgs, PosiMode, RankTestArgs,
    RegressionArgs, Simulate, TrichotomyArgs,
};
use crate::lists::{parse_ranks, parse_u64_list};

/// What a command produced: text for stdout and named result files.
#[derive(Debug, Default)]
pub struct Output {
    pub stdout: String,
    pub files: Vec<(String, Vec<u8>)>,
    pub inputs: Vec<PathBuf>,
    pub seed: Option<u64>,
}

const LOADINGS_NOTE: &str = "loadings redrawn for every replicate, independently across ranks";

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn read_matrix(path: &Path) -> Result<SampleMatrix> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(SampleMatrix::read_csv(BufReader::new(file))?)
}

/// Renders `(label, value)` pairs as an aligned two-column table.
fn table(rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
    rows.iter()
        .map(|(k, v)| format!("{k:<width$}  {v}\n"))
        .collect()
}

/// How results should be presented.
#[derive(Debug, Clone, Copy)]
pub struct Presentation {
    pub json: bool,
    /// Result files will be written to an output directory.
    pub to_dir: bool,
}

pub fn execute(command: &Command, view: Presentation) -> Result<Output> {
    let json_out = view.json;
    match command {
        Command::Bound(a) => bound(a, json_out),
        Command::Estimate(a) => estimate(a, json_out),
        Command::RankTest(a) => rank_test_cmd(a, json_out),
        Command::TestRegression(a) => regression(a, json_out),
        Command::Posi(a) => posi(a, json_out),
        Command::Simulate(Simulate::Trichotomy(a)) => trichotomy(a, json_out),
        Command::Simulate(Simulate::Means(a)) => means(a, json_out),
        Command::Simulate(Simulate::Coverage(a)) => coverage(a, json_out),
        Command::Generate(a) => generate(a, view),
        Command::Replay(_) => unreachable!("replay is dispatched by the caller"),
    }
}

fn bound(a: &BoundArgs, json_out: bool) -> Result<Output> {
    let inputs = BoundInputs::new(a.p, a.d)?;
    let beta = inputs.beta();
    // The regime needs ln p > 1.
    let regime = if a.p >= 3 {
        Some(classify_regime(a.d, a.p, a.margin)?.tag)
    } else {
        None
    };
    let value = json!({
        "p": a.p,
        "d": a.d,
        "beta": beta,
        "max_corr_bound": inputs.max_corr_bound(),
        "rex_bound": inputs.rex_bound(),
        "sqrt_log_p": (a.p as f64).ln().sqrt(),
        "regime": regime,
        "margin": a.margin,
        "trichotomy_limit": trichotomy_limit(beta)?,
        "separation_constant": separation_constant(),
    });
    let stdout = if json_out {
        to_json(&value)?
    } else {
        table(&[
            ("p", a.p.to_string()),
            ("d", a.d.to_string()),
            ("beta = d / ln p", format!("{beta:.6}")),
            ("max_corr_bound", format!("{:.6}", inputs.max_corr_bound())),
            ("rex_bound", format!("{:.6}", inputs.rex_bound())),
            ("sqrt(ln p)", format!("{:.6}", (a.p as f64).ln().sqrt())),
            (
                "regime",
                regime.map_or("n/a (needs p >= 3)".into(), |r| r.to_string()),
            ),
            (
                "trichotomy_limit",
                format!("{:.6}", trichotomy_limit(beta)?),
            ),
        ])
    };
    Ok(Output {
        stdout,
        ..Default::default()
    })
}

fn report_table(report: &InferenceReport) -> String {
    let mut rows = vec![
        ("procedure", report.procedure.clone()),
        ("p", report.inputs.p.to_string()),
        ("n", report.inputs.n.to_string()),
    ];
    if let Some(d0) = report.inputs.d0 {
        rows.push(("d0", d0.to_string()));
    }
    if let Some(alpha) = report.inputs.alpha {
        rows.push(("alpha", alpha.to_string()));
    }
    for (k, v) in &report.statistics {
        rows.push((k.as_str(), format!("{v:.6}")));
    }
    if let Some(ci) = &report.interval {
        rows.push((
            "interval",
            format!(
                "[{:.4}, {:.4}] -> [{}, {}]",
                ci.d_l, ci.d_u, ci.d_l_int, ci.d_u_int
            ),
        ));
    }
    rows.push(("decision", report.decision.clone()));
    if let Some(pv) = report.p_value_bound {
        rows.push(("p_value_bound", format!("{pv:.6e}")));
    }
    if !report.flags.is_empty() {
        rows.push(("flags", report.flags.join(", ")));
    }
    table(&rows)
}

fn inference_output(
    report: InferenceReport,
    details: serde_json::Value,
    inputs: Vec<PathBuf>,
    seed: Option<u64>,
    json_out: bool,
) -> Result<Output> {
    let mut value = json!({ "report": &report });
    if let (Some(obj), serde_json::Value::Object(extra)) = (value.as_object_mut(), details) {
        obj.extend(extra);
    }
    let json_text = to_json(&value)?;
    let stdout = if json_out {
        json_text.clone()
    } else {
        report_table(&report)
    };
    Ok(Output {
        stdout,
        files: vec![("result.json".into(), json_text.into_bytes())],
        inputs,
        seed,
    })
}

fn estimate(a: &EstimateArgs, json_out: bool) -> Result<Output> {
    let samples = read_matrix(&a.input)?;
    let p = samples.p() as u64;
    let ks = samples.extremes();
    let interval = rex_confidence_interval(ks, p, a.alpha)?;
    let est = estimate_rank(interval.mean_k_sq, p)?;
    let cls = classify_from_extremes(ks, p)?;
    let report = InferenceReport::rank_estimate(&est, &interval, &cls).with_seed(a.seed);
    let details = json!({ "estimate": est, "interval": interval, "classification": cls });
    inference_output(report, details, vec![a.input.clone()], a.seed, json_out)
}

fn rank_test_cmd(a: &RankTestArgs, json_out: bool) -> Result<Output> {
    let samples = read_matrix(&a.input)?;
    let outcome = rank_test(samples.extremes(), samples.p() as u64, a.d, a.alpha)?;
    let report = InferenceReport::rank_test(&outcome).with_seed(a.seed);
    let details = json!({ "outcome": outcome });
    inference_output(report, details, vec![a.input.clone()], a.seed, json_out)
}

fn regression(a: &RegressionArgs, json_out: bool) -> Result<Output> {
    let design = read_matrix(&a.design)?;
    let response = read_matrix(&a.response)?;
    if response.p() != 1 {
        return Err(rex_core::RexError::DimensionMismatch {
            expected: 1,
            found: response.p(),
        })
        .context("the response file must have exactly one column");
    }
    let result = overall_significance_test_with(
        &design,
        &response.column(0),
        a.alpha,
        SignificanceOptions { center: a.center },
    )?;
    let report = InferenceReport::significance(&result);
    let details = json!({ "result": result });
    inference_output(
        report,
        details,
        vec![a.design.clone(), a.response.clone()],
        None,
        json_out,
    )
}

fn posi(a: &PosiArgs, json_out: bool) -> Result<Output> {
    let m = a.m.unwrap_or(a.p);
    let mode = match a.mode {
        PosiMode::AsymptoticRate => CountMode::AsymptoticRate,
        PosiMode::Exact => CountMode::ExactCount,
    };
    let b = posi_bound(a.p, m, mode)?;
    let ratio = b.bound / (a.p as f64).sqrt();
    let stdout = if json_out {
        to_json(&json!({ "posi": b, "bound_over_sqrt_p": ratio }))?
    } else {
        table(&[
            ("p", b.p.to_string()),
            ("m", b.m.to_string()),
            ("log_count", format!("{:.6}", b.log_count)),
            ("bound", format!("{:.6}", b.bound)),
            ("bound / sqrt(p)", format!("{ratio:.6}")),
        ])
    };
    Ok(Output {
        stdout,
        ..Default::default()
    })
}

fn trichotomy_config(a: &TrichotomyArgs) -> Result<TrichotomyConfig> {
    Ok(TrichotomyConfig {
        p: a.p,
        ranks: parse_ranks(&a.ranks)?,
        reps: a.reps,
        n_for_means: a.n,
        seed: a.seed,
    })
}

fn csv_bytes(write: impl FnOnce(&mut Vec<u8>) -> rex_core::Result<()>) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write(&mut buf)?;
    Ok(buf)
}

fn trichotomy(a: &TrichotomyArgs, json_out: bool) -> Result<Output> {
    let config = trichotomy_config(a)?;
    let res = run_trichotomy(&config)?;
    let ranks: Vec<_> = res
        .ranks
        .iter()
        .map(|r| {
            json!({
                "rank": r.rank,
                "mean": r.mean,
                "sd": r.sd,
                "fraction_below": r.fraction_below,
                "bandwidth": r.density.as_ref().map(|d| d.bandwidth),
            })
        })
        .collect();
    let summary = json!({
        "p": res.p,
        "reps": res.reps,
        "seed": res.seed,
        "threshold": res.threshold,
        "loadings": LOADINGS_NOTE,
        "ranks": ranks,
    });
    let summary_text = to_json(&summary)?;
    let stdout = if json_out {
        summary_text.clone()
    } else {
        let mut s = format!(
            "p = {}, reps = {}, threshold sqrt(ln p) = {:.4}\n{:>6}  {:>8}  {:>8}  {:>10}\n",
            res.p, res.reps, res.threshold, "rank", "mean", "sd", "below"
        );
        for r in &res.ranks {
            writeln!(
                s,
                "{:>6}  {:>8.4}  {:>8.4}  {:>10.4}",
                r.rank.to_string(),
                r.mean,
                r.sd,
                r.fraction_below
            )?;
        }
        s
    };
    Ok(Output {
        stdout,
        files: vec![
            ("summary.json".into(), summary_text.into_bytes()),
            (
                "density.csv".into(),
                csv_bytes(|w| write_density_csv(&res, w))?,
            ),
            (
                "extremes.csv".into(),
                csv_bytes(|w| write_extremes_csv(&res, w))?,
            ),
        ],
        inputs: Vec::new(),
        seed: Some(a.seed),
    })
}

fn means(a: &TrichotomyArgs, json_out: bool) -> Result<Output> {
    let config = trichotomy_config(a)?;
    let res = run_mean_separation(&config)?;
    let ranks: Vec<_> = res
        .ranks
        .iter()
        .map(|r| {
            json!({
                "rank": r.rank,
                "below": r.below,
                "above": r.above,
                "min": r.min,
                "max": r.max,
                "variance": r.variance,
            })
        })
        .collect();
    let summary = json!({
        "p": res.p,
        "n": res.n,
        "reps": res.reps,
        "seed": res.seed,
        "threshold": res.threshold,
        "loadings": LOADINGS_NOTE,
        "ranks": ranks,
    });
    let summary_text = to_json(&summary)?;
    let stdout = if json_out {
        summary_text.clone()
    } else {
        let mut s = format!(
            "p = {}, n = {}, reps = {}, threshold = {:.4}\n{:>6}  {:>8}  {:>8}  {:>8}  {:>8}\n",
            res.p, res.n, res.reps, res.threshold, "rank", "min", "max", "below", "above"
        );
        for r in &res.ranks {
            writeln!(
                s,
                "{:>6}  {:>8.4}  {:>8.4}  {:>8}  {:>8}",
                r.rank.to_string(),
                r.min,
                r.max,
                r.below,
                r.above
            )?;
        }
        s
    };
    Ok(Output {
        stdout,
        files: vec![
            ("summary.json".into(), summary_text.into_bytes()),
            ("means.csv".into(), csv_bytes(|w| write_means_csv(&res, w))?),
        ],
        inputs: Vec::new(),
        seed: Some(a.seed),
    })
}

fn coverage(a: &CoverageArgs, json_out: bool) -> Result<Output> {
    let config = CoverageConfig {
        p_values: parse_u64_list(&a.p)?,
        d_values: parse_u64_list(&a.d)?,
        alpha: a.alpha,
        reps: a.reps,
        seed: a.seed,
    };
    let table = run_coverage(&config)?;
    let summary_text = to_json(&table)?;
    let stdout = if json_out {
        summary_text.clone()
    } else {
        let mut s = format!(
            "{:>7}  {:>4}  {:>3}  {:>8}  {:>8}  {:>12}\n",
            "p", "d", "n", "coverage", "stderr", "coverage_int"
        );
        for r in &table.rows {
            writeln!(
                s,
                "{:>7}  {:>4}  {:>3}  {:>8.3}  {:>8.4}  {:>12.3}",
                r.p, r.d, r.n, r.coverage, r.mc_stderr, r.coverage_int
            )?;
        }
        s
    };
    Ok(Output {
        stdout,
        files: vec![
            ("summary.json".into(), summary_text.into_bytes()),
            (
                "coverage.csv".into(),
                csv_bytes(|w| write_coverage_csv(&table, w))?,
            ),
        ],
        inputs: Vec::new(),
        seed: Some(a.seed),
    })
}

fn generate(a: &GenerateArgs, view: Presentation) -> Result<Output> {
    if a.p < 1 || a.n < 1 {
        bail!("p and n must be at least 1");
    }
    let rank: RankSpec = a.d.parse()?;
    let noise = NoiseSpec::Scalar(a.sigma);
    noise.validate(a.p)?;
    let mut rng = RngStream::new(a.seed, 0).rng();
    let model = match rank {
        RankSpec::Iid => LowRankModel::identity(a.p),
        RankSpec::Rank(d) => build_uniform_model(a.p, d as usize, &mut rng),
    };
    let mut samples = sample_observations(&model, a.n, &mut rng);
    if a.sigma > 0.0 {
        samples = add_noise(&samples, &noise, &mut rng)?;
    }
    let csv = csv_bytes(|w| samples.write_csv(w))?;
    let summary = json!({
        "p": a.p,
        "d": rank,
        "n": a.n,
        "seed": a.seed,
        "sigma": a.sigma,
        "file": "samples.csv",
    });
    Ok(Output {
        stdout: if view.json {
            to_json(&summary)?
        } else if view.to_dir {
            format!("wrote samples.csv ({} rows, {} columns)\n", a.n, a.p)
        } else {
            String::from_utf8(csv.clone())?
        },
        files: vec![("samples.csv".into(), csv)],
        inputs: Vec::new(),
        seed: Some(a.seed),
    })
}
