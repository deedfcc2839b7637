//! End-to-end estimation on a single dataset: centering, market
//! construction, transform, averaging, and the chosen shrinkage target at
//! each requested frequency.

use crate::error::Result;
use crate::factor::{self, FactorFit};
use crate::matrix::CMatrix;
use crate::periodogram::{panel_block, DftPanel, PeriodogramField};
use crate::series::{MarketSeries, MultivariateSeries};
use crate::shrinkage::{
    ddsse, local_variance, shrink_with_averaged, DdsseEstimate, ShrinkageDiagnostics,
};
use nalgebra::DMatrix;

/// Which target the combined estimate shrinks toward.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetChoice {
    /// No shrinkage: the combined estimate is the averaged periodogram.
    None,
    /// One-factor target built from the market regression.
    MarketFactor,
    /// Scaled identity target.
    Identity,
}

/// Estimation settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorConfig {
    pub span: usize,
    pub target: TargetChoice,
    pub clamp_intensity: bool,
}

impl EstimatorConfig {
    pub fn new(span: usize, target: TargetChoice) -> Self {
        Self {
            span,
            target,
            clamp_intensity: true,
        }
    }
}

/// Everything produced at one frequency.
#[derive(Debug, Clone)]
pub struct FrequencyEstimate {
    pub index: usize,
    pub omega: f64,
    /// Averaged periodogram over the augmented index set.
    pub f0_augmented: CMatrix,
    /// The estimate after applying the chosen target (panel block).
    pub combined: CMatrix,
    /// One-factor target, when the market-factor target is in play.
    pub target: Option<DMatrix<f64>>,
    /// Shrinkage diagnostics, when the market-factor target is in play.
    pub diagnostics: Option<ShrinkageDiagnostics>,
    /// Identity-target estimate, when requested.
    pub identity: Option<DdsseEstimate>,
}

/// Full result of an estimation pass.
#[derive(Debug, Clone)]
pub struct EstimateOutput {
    pub fit: Option<FactorFit>,
    pub estimates: Vec<FrequencyEstimate>,
}

/// Runs the pipeline at the given Fourier indices. The series is centered
/// here; the market must already correspond to this series.
pub fn estimate_series(
    series: &MultivariateSeries,
    market: &MarketSeries,
    config: &EstimatorConfig,
    indices: &[usize],
) -> Result<EstimateOutput> {
    let centered = series.center();
    let dfts = DftPanel::compute(&centered, market)?;
    let field = PeriodogramField::compute(&dfts);
    let grid = field.grid();
    let fit = match config.target {
        TargetChoice::MarketFactor => Some(factor::fit(&centered, market)?),
        _ => None,
    };
    let mut estimates = Vec::with_capacity(indices.len());
    for &k in indices {
        let omega = grid.omega(k);
        let f0_augmented = field.averaged(k, config.span)?;
        let estimate = match config.target {
            TargetChoice::MarketFactor => {
                let fit = fit.as_ref().expect("fit exists for market-factor target");
                let est = shrink_with_averaged(
                    &field,
                    fit,
                    k,
                    config.span,
                    config.clamp_intensity,
                    f0_augmented,
                )?;
                FrequencyEstimate {
                    index: k,
                    omega,
                    f0_augmented: est.f0_augmented.clone(),
                    combined: est.combined.clone(),
                    target: Some(est.target.clone()),
                    diagnostics: Some(est.diagnostics.clone()),
                    identity: None,
                }
            }
            TargetChoice::Identity => {
                let f0_panel = panel_block(&f0_augmented);
                let p_total: f64 = local_variance(&field, k, config.span, &f0_augmented)?
                    .iter()
                    .sum();
                let id = ddsse(&f0_panel, p_total, config.span);
                FrequencyEstimate {
                    index: k,
                    omega,
                    f0_augmented,
                    combined: id.combined.clone(),
                    target: None,
                    diagnostics: None,
                    identity: Some(id),
                }
            }
            TargetChoice::None => {
                let combined = panel_block(&f0_augmented);
                FrequencyEstimate {
                    index: k,
                    omega,
                    f0_augmented,
                    combined,
                    target: None,
                    diagnostics: None,
                    identity: None,
                }
            }
        };
        estimates.push(estimate);
    }
    Ok(EstimateOutput { fit, estimates })
}
