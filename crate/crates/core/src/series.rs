//! Panel and market time series containers.

use crate::error::{CoreError, Result};
use serde::{Deserialize, Serialize};

/// A p-dimensional time series stored row-major: `rows[i]` is dimension i
/// observed at t = 1..=T.
#[derive(Debug, Clone, PartialEq)]
pub struct MultivariateSeries {
    rows: Vec<Vec<f64>>,
}

impl MultivariateSeries {
    /// Validates shape and finiteness. Error positions are 1-based.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let len = rows.first().map(|r| r.len()).ok_or(CoreError::EmptyPanel)?;
        if len == 0 {
            return Err(CoreError::EmptyPanel);
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != len {
                return Err(CoreError::RaggedPanel {
                    row: i + 1,
                    found: row.len(),
                    expected: len,
                });
            }
            for (t, &x) in row.iter().enumerate() {
                if !x.is_finite() {
                    return Err(CoreError::NonFinite {
                        row: i + 1,
                        col: t + 1,
                    });
                }
            }
        }
        Ok(Self { rows })
    }

    /// Number of dimensions p.
    pub fn dims(&self) -> usize {
        self.rows.len()
    }

    /// Series length T.
    pub fn len(&self) -> usize {
        self.rows[0].len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Dimension i as a slice, 0-based.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// Subtracts each row's empirical mean. Idempotent.
    pub fn center(&self) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mean = row.iter().sum::<f64>() / row.len() as f64;
                row.iter().map(|x| x - mean).collect()
            })
            .collect();
        Self { rows }
    }
}

/// How the market series was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MarketMode {
    /// Cross-sectional mean of the panel at each t.
    MeanOverDimension,
    /// Copy of the designated panel row (1-based).
    Column(usize),
    /// Supplied from outside the panel.
    External,
}

/// The centered market series prepended to the panel as index 0.
#[derive(Debug, Clone, PartialEq)]
pub struct MarketSeries {
    values: Vec<f64>,
    mode: MarketMode,
}

impl MarketSeries {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mode(&self) -> MarketMode {
        self.mode
    }

    /// Sum of squares of the centered values.
    pub fn sum_squares(&self) -> f64 {
        self.values.iter().map(|x| x * x).sum()
    }

    /// Wraps an externally supplied series, centering it.
    pub fn external(values: Vec<f64>, expected_len: usize) -> Result<Self> {
        if values.len() != expected_len {
            return Err(CoreError::MarketLength {
                found: values.len(),
                expected: expected_len,
            });
        }
        for (t, &x) in values.iter().enumerate() {
            if !x.is_finite() {
                return Err(CoreError::NonFinite { row: 0, col: t + 1 });
            }
        }
        Ok(Self {
            values: centered(&values),
            mode: MarketMode::External,
        })
    }
}

fn centered(values: &[f64]) -> Vec<f64> {
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    values.iter().map(|x| x - mean).collect()
}

/// Builds the market series from the panel per the requested mode.
/// External mode must go through [`MarketSeries::external`] instead.
pub fn build_market(series: &MultivariateSeries, mode: MarketMode) -> Result<MarketSeries> {
    let values = match mode {
        MarketMode::MeanOverDimension => {
            let p = series.dims() as f64;
            (0..series.len())
                .map(|t| series.rows().iter().map(|r| r[t]).sum::<f64>() / p)
                .collect::<Vec<f64>>()
        }
        MarketMode::Column(k) => {
            if k < 1 || k > series.dims() {
                return Err(CoreError::RowOutOfRange {
                    index: k,
                    dim: series.dims(),
                });
            }
            series.row(k - 1).to_vec()
        }
        MarketMode::External => {
            return Err(CoreError::MarketLength {
                found: 0,
                expected: series.len(),
            })
        }
    };
    Ok(MarketSeries {
        values: centered(&values),
        mode,
    })
}
