//! `specshrink simulate`: Monte Carlo benchmark study from a run-spec
//! JSON file or an embedded preset, written as a plot-ready CSV.

use std::fs;

use serde_json::json;
use specshrink_core::{monte_carlo, RunSpec};

use crate::error::CliError;
use crate::manifest::{fmt_num, RunManifest};
use crate::SimulateArgs;

const PRESET_FIGURE2: &str = include_str!("../presets/figure2.json");
const PRESET_FIGURE3: &str = include_str!("../presets/figure3.json");

/// Environment variable overriding the run-spec master seed.
pub const SEED_ENV: &str = "SPECSHRINK_SEED";

fn load_spec_text(args: &SimulateArgs) -> Result<(String, String), CliError> {
    match (&args.runspec, &args.preset) {
        (Some(path), None) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
            Ok((text, path.display().to_string()))
        }
        (None, Some(name)) => match name.as_str() {
            "figure2" => Ok((PRESET_FIGURE2.to_string(), "preset:figure2".into())),
            "figure3" => Ok((PRESET_FIGURE3.to_string(), "preset:figure3".into())),
            other => Err(CliError::parse(format!(
                "unknown preset {other:?}; expected figure2 or figure3"
            ))),
        },
        (Some(_), Some(_)) => Err(CliError::parse(
            "give either a run-spec file or --preset, not both",
        )),
        (None, None) => Err(CliError::parse(
            "a run-spec file or --preset is required",
        )),
    }
}

pub fn run(args: &SimulateArgs) -> Result<(), CliError> {
    let (text, source) = load_spec_text(args)?;
    let mut spec: RunSpec = serde_json::from_str(&text)
        .map_err(|e| CliError::parse(format!("{source}: {e}")))?;
    if let Some(runs) = args.runs {
        spec.runs = runs;
    }
    let mut seed_overridden = false;
    if let Ok(value) = std::env::var(SEED_ENV) {
        let seed: u64 = value.parse().map_err(|_| {
            CliError::parse(format!("cannot parse {SEED_ENV}={value:?} as an integer seed"))
        })?;
        spec.master_seed = seed;
        seed_overridden = true;
    }
    spec.validate()?;

    let report = monte_carlo(&spec)?;

    fs::create_dir_all(&args.out)?;
    let report_path = args.out.join("mise_report.csv");
    let mut writer = csv::Writer::from_path(&report_path)
        .map_err(|e| CliError::other(format!("{}: {e}", report_path.display())))?;
    writer
        .write_record([
            "estimator",
            "sweep_value",
            "mise_mean",
            "mise_se",
            "M",
            "T",
            "m",
            "seed",
        ])
        .map_err(|e| CliError::other(e.to_string()))?;
    for row in &report.rows {
        writer
            .write_record([
                row.estimator.name().to_string(),
                fmt_num(row.sweep_value),
                fmt_num(row.mise_mean),
                fmt_num(row.mise_se),
                row.runs.to_string(),
                row.len.to_string(),
                row.span.to_string(),
                row.seed.to_string(),
            ])
            .map_err(|e| CliError::other(e.to_string()))?;
    }
    writer.flush().map_err(|e| CliError::other(e.to_string()))?;

    if !report.failures.is_empty() {
        eprintln!(
            "warning: {} replicate(s) failed and were excluded (first: sweep {} run {}: {})",
            report.failures.len(),
            report.failures[0].sweep_value,
            report.failures[0].run_index,
            report.failures[0].reason
        );
    }

    let mut manifest = RunManifest::new(
        "simulate",
        json!({
            "source": source,
            "resolved_spec": serde_json::to_value(&spec)
                .map_err(|e| CliError::other(e.to_string()))?,
            "runs_override": args.runs,
            "seed_overridden_by_env": seed_overridden,
            "failures": report.failures.len(),
        }),
    );
    manifest.master_seed = Some(spec.master_seed);
    manifest.add_input_bytes(&source, text.as_bytes());
    manifest.outputs = vec!["mise_report.csv".into()];
    manifest.write(&args.out)?;

    println!(
        "wrote {} ({} rows, {} runs per sweep point, master seed {})",
        report_path.display(),
        report.rows.len(),
        spec.runs,
        spec.master_seed
    );
    Ok(())
}
