//! `specshrink estimate`: per-frequency spectral estimates with shrinkage
//! diagnostics for a CSV panel.

use std::path::Path;

use serde_json::json;
use specshrink_core::matrix::complexify;
use specshrink_core::{
    condition_number, estimate_series, panel_block, CMatrix, EstimatorConfig,
    FrequencyEstimate, TargetChoice,
};

use crate::error::CliError;
use crate::ingest::{read_panel, resolve_frequencies, MarketArg};
use crate::manifest::{fmt_num, RunManifest};
use crate::EstimateArgs;

fn parse_target(text: &str) -> Result<TargetChoice, CliError> {
    match text {
        "market" => Ok(TargetChoice::MarketFactor),
        "identity" => Ok(TargetChoice::Identity),
        "none" => Ok(TargetChoice::None),
        other => Err(CliError::parse(format!(
            "invalid --target {other:?}; expected market, identity, or none"
        ))),
    }
}

/// Writes one spectral matrix as (frequency_index, i, j, real, imag) rows.
/// Panel dimensions are indexed 1..=p; index 0 is the market series. The
/// market row and column always come from the averaged periodogram (the
/// only estimator that carries them); the panel block is the combined
/// estimate under the chosen target.
fn write_spectral_rows<W: std::io::Write>(
    writer: &mut csv::Writer<W>,
    est: &FrequencyEstimate,
    include_market: bool,
) -> Result<(), CliError> {
    let p = est.combined.nrows();
    let write = |writer: &mut csv::Writer<W>, i: usize, j: usize, v: num_complex::Complex64| {
        writer
            .write_record([
                est.index.to_string(),
                i.to_string(),
                j.to_string(),
                fmt_num(v.re),
                fmt_num(v.im),
            ])
            .map_err(|e| CliError::other(format!("spectral csv: {e}")))
    };
    if include_market {
        for i in 0..=p {
            for j in 0..=p {
                let v = if i == 0 || j == 0 {
                    est.f0_augmented[(i, j)]
                } else {
                    est.combined[(i - 1, j - 1)]
                };
                write(writer, i, j, v)?;
            }
        }
    } else {
        for i in 1..=p {
            for j in 1..=p {
                write(writer, i, j, est.combined[(i - 1, j - 1)])?;
            }
        }
    }
    Ok(())
}

fn opt_num(v: Option<f64>) -> String {
    v.map(fmt_num).unwrap_or_default()
}

pub fn run(args: &EstimateArgs) -> Result<(), CliError> {
    if args.span.is_multiple_of(2) {
        return Err(CliError::even_span(args.span));
    }
    let target = parse_target(&args.target)?;
    let market_arg = MarketArg::parse(&args.market)?;

    let panel = read_panel(&args.input)?;
    let series = panel.series.center();
    let market = market_arg.build(&series)?;
    let grid = specshrink_core::FrequencyGrid::new(series.len());
    let indices = resolve_frequencies(args.frequencies.as_deref(), &grid)?;

    let mut config = EstimatorConfig::new(args.span, target);
    config.clamp_intensity = !args.no_clamp;
    let output = estimate_series(&series, &market, &config, &indices)?;

    std::fs::create_dir_all(&args.out)?;
    let spectral_path = args.out.join("spectral.csv");
    let mut spectral = csv::Writer::from_path(&spectral_path)
        .map_err(|e| CliError::other(format!("{}: {e}", spectral_path.display())))?;
    spectral
        .write_record(["frequency_index", "i", "j", "real", "imag"])
        .map_err(|e| CliError::other(e.to_string()))?;
    for est in &output.estimates {
        write_spectral_rows(&mut spectral, est, args.include_market)?;
    }
    spectral
        .flush()
        .map_err(|e| CliError::other(e.to_string()))?;

    let diagnostics_path = args.out.join("diagnostics.csv");
    write_diagnostics(&diagnostics_path, &output.estimates)?;

    let mut manifest = RunManifest::new(
        "estimate",
        json!({
            "input": args.input.display().to_string(),
            "had_header": panel.had_header,
            "dims": series.dims(),
            "len": series.len(),
            "span": args.span,
            "target": args.target,
            "market": market_arg.describe(),
            "frequencies": args.frequencies.clone().unwrap_or_else(|| "half".into()),
            "include_market": args.include_market,
            "clamp_intensity": config.clamp_intensity,
            "slopes": output.fit.as_ref().map(|f| f.slopes.clone()),
            "idiosyncratic_variances": output
                .fit
                .as_ref()
                .map(|f| f.idiosyncratic_variances.clone()),
        }),
    );
    manifest.add_input_file(&args.input)?;
    if let MarketArg::File(path) = &market_arg {
        manifest.add_input_file(path)?;
    }
    manifest.outputs = vec!["spectral.csv".into(), "diagnostics.csv".into()];
    manifest.write(&args.out)?;

    println!(
        "wrote {} and {} ({} frequencies, target {})",
        spectral_path.display(),
        diagnostics_path.display(),
        output.estimates.len(),
        args.target
    );
    Ok(())
}

/// Diagnostics rows: intensity ingredients and condition numbers of the
/// averaged periodogram (f0), the target (f1), and the combined estimate
/// (fplus). Columns that do not apply to the chosen target stay empty.
fn write_diagnostics(path: &Path, estimates: &[FrequencyEstimate]) -> Result<(), CliError> {
    let mut writer = csv::Writer::from_path(path)
        .map_err(|e| CliError::other(format!("{}: {e}", path.display())))?;
    writer
        .write_record([
            "frequency_index",
            "p_total",
            "re_r_total",
            "g_total",
            "zeta_raw",
            "zeta_clamped",
            "cond_f0",
            "cond_f1",
            "cond_fplus",
        ])
        .map_err(|e| CliError::other(e.to_string()))?;
    for est in estimates {
        let f0_panel: CMatrix = panel_block(&est.f0_augmented);
        let cond_f0 = condition_number(&f0_panel)?;
        let cond_fplus = condition_number(&est.combined)?;
        let (p_total, re_r_total, g_total, zeta_raw, zeta, cond_f1) =
            if let Some(d) = &est.diagnostics {
                let target = est.target.as_ref().expect("target accompanies diagnostics");
                (
                    Some(d.p_total),
                    Some(d.r_total.re),
                    Some(d.g_total),
                    Some(d.zeta_raw),
                    Some(d.zeta),
                    Some(condition_number(&complexify(target))?),
                )
            } else if let Some(id) = &est.identity {
                let p = est.combined.nrows();
                let mut scaled = nalgebra::DMatrix::<f64>::zeros(p, p);
                for i in 0..p {
                    scaled[(i, i)] = id.mean_level;
                }
                (
                    Some(id.p_total),
                    None,
                    Some(id.gap_total),
                    Some(id.zeta_raw),
                    Some(id.zeta),
                    Some(condition_number(&complexify(&scaled))?),
                )
            } else {
                (None, None, None, None, None, None)
            };
        writer
            .write_record([
                est.index.to_string(),
                opt_num(p_total),
                opt_num(re_r_total),
                opt_num(g_total),
                opt_num(zeta_raw),
                opt_num(zeta),
                fmt_num(cond_f0),
                opt_num(cond_f1),
                fmt_num(cond_fplus),
            ])
            .map_err(|e| CliError::other(e.to_string()))?;
    }
    writer.flush().map_err(|e| CliError::other(e.to_string()))?;
    Ok(())
}
