//! Input parsing: panel CSV, market argument, frequency selection, and
//! span lists. All failures exit with code 2 and name the offending
//! location in file coordinates (1-based row and column).

use std::path::{Path, PathBuf};

use specshrink_core::{
    build_market, FrequencyGrid, MarketMode, MarketSeries, MultivariateSeries,
};

use crate::error::CliError;

/// A parsed panel: `series` rows are dimensions (CSV columns), in column
/// order; `had_header` records whether the first file line was skipped.
pub struct Panel {
    pub series: MultivariateSeries,
    pub had_header: bool,
}

fn parse_cell(field: &str, line: usize, column: usize) -> Result<f64, CliError> {
    let value: f64 = field.trim().parse().map_err(|_| {
        CliError::parse(format!(
            "cannot parse {field:?} as a number at row {line}, column {column}"
        ))
    })?;
    if !value.is_finite() {
        return Err(CliError::parse(format!(
            "non-finite value {field:?} at row {line}, column {column}"
        )));
    }
    Ok(value)
}

/// Reads a T-by-p numeric CSV. The header line is optional: if any field of
/// the first line fails to parse as a number the line is treated as a
/// header. Column order defines the dimension index.
pub fn read_panel(path: &Path) -> Result<Panel, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_path(path)
        .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
    let mut columns: Vec<Vec<f64>> = Vec::new();
    let mut had_header = false;
    let mut data_lines = 0usize;
    for (idx, record) in reader.records().enumerate() {
        let line = idx + 1;
        let record =
            record.map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
        if record.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        if data_lines == 0 && columns.is_empty() {
            let all_numeric = record
                .iter()
                .all(|f| f.trim().parse::<f64>().is_ok());
            if !all_numeric && idx == 0 {
                had_header = true;
                continue;
            }
            columns = vec![Vec::new(); record.len()];
        }
        if record.len() != columns.len() {
            return Err(CliError::parse(format!(
                "row {line} has {} fields, expected {}",
                record.len(),
                columns.len()
            )));
        }
        for (c, field) in record.iter().enumerate() {
            columns[c].push(parse_cell(field, line, c + 1)?);
        }
        data_lines += 1;
    }
    if columns.is_empty() || data_lines == 0 {
        return Err(CliError::parse(format!(
            "{}: no numeric data rows found",
            path.display()
        )));
    }
    let series = MultivariateSeries::new(columns).map_err(CliError::from)?;
    Ok(Panel { series, had_header })
}

/// Reads a single-column market file (one value per line, optional header).
pub fn read_market_file(path: &Path, expected_len: usize) -> Result<MarketSeries, CliError> {
    let panel = read_panel(path)?;
    if panel.series.dims() != 1 {
        return Err(CliError::parse(format!(
            "{}: market file must have exactly one column, found {}",
            path.display(),
            panel.series.dims()
        )));
    }
    MarketSeries::external(panel.series.row(0).to_vec(), expected_len).map_err(CliError::from)
}

/// How the market series is obtained, as given on the command line.
#[derive(Debug, Clone)]
pub enum MarketArg {
    Mean,
    Column(usize),
    File(PathBuf),
}

impl MarketArg {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        if text == "mean" {
            return Ok(Self::Mean);
        }
        if let Some(rest) = text.strip_prefix("col:") {
            let k: usize = rest.parse().map_err(|_| {
                CliError::parse(format!("invalid column index in --market {text:?}"))
            })?;
            return Ok(Self::Column(k));
        }
        if let Some(rest) = text.strip_prefix("file:") {
            return Ok(Self::File(PathBuf::from(rest)));
        }
        Err(CliError::parse(format!(
            "invalid --market {text:?}; expected mean, col:K, or file:PATH"
        )))
    }

    /// Resolves against a centered series.
    pub fn build(&self, series: &MultivariateSeries) -> Result<MarketSeries, CliError> {
        match self {
            Self::Mean => {
                build_market(series, MarketMode::MeanOverDimension).map_err(CliError::from)
            }
            Self::Column(k) => {
                build_market(series, MarketMode::Column(*k)).map_err(CliError::from)
            }
            Self::File(path) => read_market_file(path, series.len()),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Self::Mean => "mean".into(),
            Self::Column(k) => format!("col:{k}"),
            Self::File(path) => format!("file:{}", path.display()),
        }
    }
}

/// Resolves the --frequencies argument into Fourier indices. `None` means
/// the default half circle (0, pi]; "all" means the full circle (0, 2*pi];
/// otherwise a comma-separated list of radian values snapped to the nearest
/// grid point.
pub fn resolve_frequencies(
    arg: Option<&str>,
    grid: &FrequencyGrid,
) -> Result<Vec<usize>, CliError> {
    match arg {
        None => Ok(grid.half_indices().collect()),
        Some("all") => Ok(grid.indices().collect()),
        Some(list) => {
            let mut indices = Vec::new();
            for part in list.split(',') {
                let omega: f64 = part.trim().parse().map_err(|_| {
                    CliError::parse(format!(
                        "cannot parse {part:?} in --frequencies as a number"
                    ))
                })?;
                let (k, _) = grid.nearest(omega).map_err(CliError::from)?;
                indices.push(k);
            }
            if indices.is_empty() {
                return Err(CliError::parse("--frequencies list is empty"));
            }
            Ok(indices)
        }
    }
}

/// Parses the --span-list argument: comma-separated odd spans.
pub fn parse_span_list(text: &str) -> Result<Vec<usize>, CliError> {
    let mut spans = Vec::new();
    for part in text.split(',') {
        let span: usize = part.trim().parse().map_err(|_| {
            CliError::parse(format!("cannot parse {part:?} in --span-list as an integer"))
        })?;
        if span.is_multiple_of(2) {
            return Err(CliError::even_span(span));
        }
        spans.push(span);
    }
    if spans.is_empty() {
        return Err(CliError::parse("--span-list is empty"));
    }
    Ok(spans)
}
