//! `specshrink diagnose`: condition numbers of the averaged periodogram,
//! the one-factor target, and both shrunk estimators across a list of
//! smoothing spans, with per-span summary quantiles.

use std::path::Path;

use serde_json::json;
use specshrink_core::matrix::complexify;
use specshrink_core::shrinkage::shrink_with_averaged;
use specshrink_core::{
    condition_number, ddsse, fit, panel_block, DftPanel, PeriodogramField,
};

use crate::error::CliError;
use crate::ingest::{parse_span_list, read_panel, MarketArg};
use crate::manifest::{fmt_num, RunManifest};
use crate::DiagnoseArgs;

struct CondRow {
    span: usize,
    frequency_index: usize,
    cond_f0: f64,
    cond_target: f64,
    cond_ddmse: f64,
    cond_ddsse: f64,
}

/// Nearest-rank quantile of an unsorted sample.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    let rank = ((q * n as f64).ceil() as usize).clamp(1, n);
    sorted[rank - 1]
}

pub fn run(args: &DiagnoseArgs) -> Result<(), CliError> {
    let spans = parse_span_list(&args.span_list)?;
    let market_arg = MarketArg::parse(&args.market)?;

    let panel = read_panel(&args.input)?;
    let series = panel.series.center();
    let market = market_arg.build(&series)?;
    let factor_fit = fit(&series, &market)?;
    let field = PeriodogramField::compute(&DftPanel::compute(&series, &market)?);
    let grid = field.grid();

    let mut rows: Vec<CondRow> = Vec::new();
    for &span in &spans {
        for k in grid.half_indices() {
            let f0_augmented = field.averaged(k, span)?;
            let f0_panel = panel_block(&f0_augmented);
            let est =
                shrink_with_averaged(&field, &factor_fit, k, span, true, f0_augmented)?;
            let id = ddsse(&f0_panel, est.diagnostics.p_total, span);
            rows.push(CondRow {
                span,
                frequency_index: k,
                cond_f0: condition_number(&f0_panel)?,
                cond_target: condition_number(&complexify(&est.target))?,
                cond_ddmse: condition_number(&est.combined)?,
                cond_ddsse: condition_number(&id.combined)?,
            });
        }
    }

    std::fs::create_dir_all(&args.out)?;
    let table_path = args.out.join("conditioning.csv");
    write_table(&table_path, &rows)?;
    let summary_path = args.out.join("conditioning_summary.csv");
    write_summary(&summary_path, &spans, &rows)?;

    let mut manifest = RunManifest::new(
        "diagnose",
        json!({
            "input": args.input.display().to_string(),
            "had_header": panel.had_header,
            "dims": series.dims(),
            "len": series.len(),
            "spans": spans,
            "market": market_arg.describe(),
        }),
    );
    manifest.add_input_file(&args.input)?;
    if let MarketArg::File(path) = &market_arg {
        manifest.add_input_file(path)?;
    }
    manifest.outputs = vec!["conditioning.csv".into(), "conditioning_summary.csv".into()];
    manifest.write(&args.out)?;

    println!(
        "wrote {} and {} ({} spans x {} frequencies)",
        table_path.display(),
        summary_path.display(),
        spans.len(),
        grid.half_len()
    );
    Ok(())
}

fn write_table(path: &Path, rows: &[CondRow]) -> Result<(), CliError> {
    let mut writer = csv::Writer::from_path(path)
        .map_err(|e| CliError::other(format!("{}: {e}", path.display())))?;
    writer
        .write_record([
            "span",
            "frequency_index",
            "cond_f0",
            "cond_target",
            "cond_ddmse",
            "cond_ddsse",
        ])
        .map_err(|e| CliError::other(e.to_string()))?;
    for row in rows {
        writer
            .write_record([
                row.span.to_string(),
                row.frequency_index.to_string(),
                fmt_num(row.cond_f0),
                fmt_num(row.cond_target),
                fmt_num(row.cond_ddmse),
                fmt_num(row.cond_ddsse),
            ])
            .map_err(|e| CliError::other(e.to_string()))?;
    }
    writer.flush().map_err(|e| CliError::other(e.to_string()))?;
    Ok(())
}

fn write_summary(path: &Path, spans: &[usize], rows: &[CondRow]) -> Result<(), CliError> {
    let mut writer = csv::Writer::from_path(path)
        .map_err(|e| CliError::other(format!("{}: {e}", path.display())))?;
    writer
        .write_record([
            "span",
            "statistic",
            "cond_f0",
            "cond_target",
            "cond_ddmse",
            "cond_ddsse",
        ])
        .map_err(|e| CliError::other(e.to_string()))?;
    for &span in spans {
        let mut columns: [Vec<f64>; 4] = Default::default();
        for row in rows.iter().filter(|r| r.span == span) {
            columns[0].push(row.cond_f0);
            columns[1].push(row.cond_target);
            columns[2].push(row.cond_ddmse);
            columns[3].push(row.cond_ddsse);
        }
        for column in &mut columns {
            column.sort_by(|a, b| a.partial_cmp(b).unwrap());
        }
        for (label, q) in [("q25", 0.25), ("median", 0.5), ("q75", 0.75)] {
            writer
                .write_record([
                    span.to_string(),
                    label.to_string(),
                    fmt_num(quantile(&columns[0], q)),
                    fmt_num(quantile(&columns[1], q)),
                    fmt_num(quantile(&columns[2], q)),
                    fmt_num(quantile(&columns[3], q)),
                ])
                .map_err(|e| CliError::other(e.to_string()))?;
        }
    }
    writer.flush().map_err(|e| CliError::other(e.to_string()))?;
    Ok(())
}
