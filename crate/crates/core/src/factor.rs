//! One-factor regression fit against the market series and the resulting
//! shrinkage target spectrum.

use crate::error::{CoreError, Result};
use crate::frequency::TWO_PI;
use crate::series::{MarketMode, MarketSeries, MultivariateSeries};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// Fitted one-factor structure: regression slopes on the market and
/// residual variances already expressed in spectral units (divided by
/// 2*pi).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorFit {
    pub slopes: Vec<f64>,
    pub idiosyncratic_variances: Vec<f64>,
    pub market_mode: MarketMode,
}

impl FactorFit {
    pub fn dims(&self) -> usize {
        self.slopes.len()
    }
}

/// No-intercept least-squares slope of each panel row on the market.
pub fn fit_slopes(series: &MultivariateSeries, market: &MarketSeries) -> Result<Vec<f64>> {
    if market.len() != series.len() {
        return Err(CoreError::LengthMismatch {
            panel: series.len(),
            market: market.len(),
        });
    }
    let denom = market.sum_squares();
    if denom <= 0.0 {
        return Err(CoreError::DegenerateMarket);
    }
    Ok(series
        .rows()
        .iter()
        .map(|row| {
            row.iter()
                .zip(market.values())
                .map(|(x, m)| x * m)
                .sum::<f64>()
                / denom
        })
        .collect())
}

/// Residual variances (1/(2*pi*T)) * sum_t (X_it - b_i X_0t)^2, floored
/// at zero.
pub fn fit_idiosyncratic_variances(
    series: &MultivariateSeries,
    market: &MarketSeries,
    slopes: &[f64],
) -> Result<Vec<f64>> {
    if market.len() != series.len() {
        return Err(CoreError::LengthMismatch {
            panel: series.len(),
            market: market.len(),
        });
    }
    let norm = TWO_PI * series.len() as f64;
    Ok(series
        .rows()
        .iter()
        .zip(slopes)
        .map(|(row, &b)| {
            let ss = row
                .iter()
                .zip(market.values())
                .map(|(x, m)| {
                    let r = x - b * m;
                    r * r
                })
                .sum::<f64>();
            (ss / norm).max(0.0)
        })
        .collect())
}

/// Convenience wrapper running both regression steps.
pub fn fit(series: &MultivariateSeries, market: &MarketSeries) -> Result<FactorFit> {
    let slopes = fit_slopes(series, market)?;
    let idiosyncratic_variances = fit_idiosyncratic_variances(series, market, &slopes)?;
    Ok(FactorFit {
        slopes,
        idiosyncratic_variances,
        market_mode: market.mode(),
    })
}

/// Target spectrum b b' f00 + diag(D) at one frequency, given the market
/// spectrum estimate f00 there. Real symmetric by construction.
pub fn build_target(fit: &FactorFit, market_spectrum: f64) -> Result<DMatrix<f64>> {
    if market_spectrum < -1e-12 {
        return Err(CoreError::NegativeMarketSpectrum {
            value: market_spectrum,
        });
    }
    if fit.slopes.len() != fit.idiosyncratic_variances.len() {
        return Err(CoreError::FitShape {
            slopes: fit.slopes.len(),
            variances: fit.idiosyncratic_variances.len(),
        });
    }
    let f00 = market_spectrum.max(0.0);
    let p = fit.dims();
    let mut m = DMatrix::zeros(p, p);
    for i in 0..p {
        for j in 0..p {
            m[(i, j)] = fit.slopes[i] * fit.slopes[j] * f00;
        }
        m[(i, i)] += fit.idiosyncratic_variances[i];
    }
    Ok(m)
}
