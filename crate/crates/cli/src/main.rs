//! `rex`: rank-extreme bounds, rank inference from row maxima, and the
//! Monte Carlo studies behind them.
//!
//! Every run records a manifest (command line, parameters, seed, version,
//! input and output digests). It is written to `<out>/manifest.json` when
//! `--out` is given and to stderr otherwise. `rex replay <manifest>` re-runs
//! the recorded command and fails unless every output is byte-identical.

mod args;
mod commands;
mod lists;
mod manifest;

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;

use args::{Cli, Command};
use commands::{execute, Output, Presentation};
use manifest::{digest_file, read_manifest, sha256_hex, FileDigest, RunManifest};
use rex_core::parallel::default_workers;
use rex_core::RexError;

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Bound(_) => "bound",
        Command::Estimate(_) => "estimate",
        Command::RankTest(_) => "rank-test",
        Command::TestRegression(_) => "test-regression",
        Command::Posi(_) => "posi",
        Command::Simulate(args::Simulate::Trichotomy(_)) => "simulate trichotomy",
        Command::Simulate(args::Simulate::Means(_)) => "simulate means",
        Command::Simulate(args::Simulate::Coverage(_)) => "simulate coverage",
        Command::Generate(_) => "generate",
        Command::Replay(_) => "replay",
    }
}

fn output_digests(output: &Output) -> Vec<FileDigest> {
    output
        .files
        .iter()
        .map(|(name, bytes)| FileDigest {
            path: name.clone(),
            sha256: sha256_hex(bytes),
        })
        .collect()
}

fn build_manifest(cli: &Cli, argv: &[String], output: &Output) -> Result<RunManifest> {
    let inputs = output
        .inputs
        .iter()
        .map(|p| digest_file(p))
        .collect::<Result<Vec<_>>>()?;
    Ok(RunManifest {
        command: command_name(&cli.command).into(),
        argv: argv.to_vec(),
        params: serde_json::to_value(&cli.command)?,
        seed: output.seed,
        version: env!("CARGO_PKG_VERSION").into(),
        timestamp: chrono::Utc::now().to_rfc3339(),
        workers: default_workers(),
        inputs,
        outputs: output_digests(output),
        stdout_sha256: sha256_hex(output.stdout.as_bytes()),
    })
}

fn write_outputs(dir: &Path, output: &Output) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for (name, bytes) in &output.files {
        let path = dir.join(name);
        std::fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn emit(cli: &Cli, argv: &[String], output: &Output) -> Result<()> {
    let manifest = build_manifest(cli, argv, output)?;
    if let Some(dir) = &cli.out {
        write_outputs(dir, output)?;
        let text = serde_json::to_string_pretty(&manifest)? + "\n";
        std::fs::write(dir.join("manifest.json"), text)
            .with_context(|| format!("writing manifest in {}", dir.display()))?;
    } else {
        eprintln!("{}", serde_json::to_string(&manifest)?);
    }
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(output.stdout.as_bytes())?;
    stdout.flush()?;
    Ok(())
}

fn presentation(cli: &Cli) -> Presentation {
    Presentation {
        json: cli.json,
        to_dir: cli.out.is_some(),
    }
}

fn replay(manifest_path: &Path, out_override: Option<&Path>) -> Result<()> {
    let recorded = read_manifest(manifest_path)?;
    for input in &recorded.inputs {
        let now = digest_file(Path::new(&input.path))?;
        if now.sha256 != input.sha256 {
            bail!("input {} changed since the recorded run", input.path);
        }
    }
    let mut full = vec!["rex".to_string()];
    full.extend(recorded.argv.iter().cloned());
    let mut cli = Cli::try_parse_from(&full).context("the manifest's argv does not parse")?;
    if matches!(cli.command, Command::Replay(_)) {
        bail!("a replay manifest cannot be replayed");
    }
    if let Some(dir) = out_override {
        cli.out = Some(dir.to_path_buf());
    }

    let output = execute(&cli.command, presentation(&cli))?;
    let mut mismatches = Vec::new();
    if sha256_hex(output.stdout.as_bytes()) != recorded.stdout_sha256 {
        mismatches.push("stdout".to_string());
    }
    let produced = output_digests(&output);
    for want in &recorded.outputs {
        match produced.iter().find(|f| f.path == want.path) {
            Some(got) if got.sha256 == want.sha256 => {}
            _ => mismatches.push(want.path.clone()),
        }
    }
    emit(&cli, &recorded.argv, &output)?;
    if !mismatches.is_empty() {
        bail!(
            "replay differs from the recorded run in: {}",
            mismatches.join(", ")
        );
    }
    Ok(())
}

fn run(cli: &Cli, argv: &[String]) -> Result<()> {
    if let Command::Replay(r) = &cli.command {
        return replay(&r.manifest, cli.out.as_deref());
    }
    let output = execute(&cli.command, presentation(cli))?;
    emit(cli, argv, &output)
}

fn error_json(err: &anyhow::Error) -> serde_json::Value {
    let message = format!("{err:#}");
    let (kind, line) = match err.downcast_ref::<RexError>() {
        Some(RexError::Parse { line, .. }) => ("parse", Some(*line)),
        Some(RexError::EmptyInput) => ("empty_input", None),
        Some(RexError::ZeroNormColumn { .. }) => ("zero_norm_column", None),
        Some(RexError::ZeroNormResponse) => ("zero_norm_response", None),
        Some(RexError::DimensionMismatch { .. }) => ("dimension_mismatch", None),
        Some(RexError::DegenerateSample) => ("degenerate_sample", None),
        Some(RexError::Domain(_)) | Some(RexError::Special(_)) => ("domain", None),
        Some(RexError::Io(_)) => ("io", None),
        None if err.downcast_ref::<std::io::Error>().is_some() => ("io", None),
        None => ("error", None),
    };
    let mut body = json!({ "kind": kind, "message": message });
    if let Some(line) = line {
        body["line"] = json!(line);
    }
    json!({ "error": body })
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = e.print();
                    ExitCode::SUCCESS
                }
                _ => {
                    let body = json!({ "error": { "kind": "usage", "message": e.to_string().trim_end() } });
                    eprintln!("{body}");
                    ExitCode::from(2)
                }
            };
        }
    };
    match run(&cli, &argv[1..]) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", error_json(&err));
            ExitCode::FAILURE
        }
    }
}
