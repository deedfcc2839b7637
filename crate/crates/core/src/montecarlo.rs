//! Monte Carlo study: repeated panel generation, the four spectral
//! estimators on the half frequency grid, and MISE aggregation.

use crate::error::{CoreError, Result};
use crate::factor;
use crate::frequency::{FrequencyGrid, TWO_PI};
use crate::matrix::{complexify, frob_sq_diff, CMatrix};
use crate::model::TwoFactorModelSpec;
use crate::periodogram::{panel_block, DftPanel, PeriodogramField};
use crate::series::{build_market, MarketMode};
use crate::shrinkage::{ddsse, shrink_with_averaged};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;

/// The four estimators of the study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorKind {
    AvgPeriodogram,
    OneFactor,
    Ddsse,
    Ddmse,
}

impl EstimatorKind {
    pub const ALL: [EstimatorKind; 4] = [
        EstimatorKind::AvgPeriodogram,
        EstimatorKind::OneFactor,
        EstimatorKind::Ddsse,
        EstimatorKind::Ddmse,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EstimatorKind::AvgPeriodogram => "avg_periodogram",
            EstimatorKind::OneFactor => "one_factor",
            EstimatorKind::Ddsse => "ddsse",
            EstimatorKind::Ddmse => "ddmse",
        }
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Mean integrated squared error over the half grid (0, pi]:
/// (2*pi/T) * sum_k ||estimate_k - truth_k||_F^2.
pub fn mise(estimates: &[CMatrix], truths: &[CMatrix], len: usize) -> Result<f64> {
    if estimates.len() != truths.len() {
        return Err(CoreError::GridMismatch {
            left: estimates.len(),
            right: truths.len(),
        });
    }
    let sum: f64 = estimates
        .iter()
        .zip(truths)
        .map(|(e, t)| frob_sq_diff(e, t))
        .sum();
    Ok(TWO_PI / len as f64 * sum)
}

/// True panel-block spectra on the half grid, shared across runs.
pub fn half_grid_truth(model: &TwoFactorModelSpec, len: usize) -> Vec<CMatrix> {
    let grid = FrequencyGrid::new(len);
    grid.half_indices()
        .map(|k| panel_block(&model.true_spectrum(grid.omega(k))))
        .collect()
}

/// One replicate: generates a panel and returns the MISE of each requested
/// estimator, in the order given.
pub fn run_once<R: Rng>(
    model: &TwoFactorModelSpec,
    len: usize,
    span: usize,
    estimators: &[EstimatorKind],
    truths: &[CMatrix],
    rng: &mut R,
) -> Result<Vec<f64>> {
    let series = model.generate_panel(len, rng)?;
    let market = build_market(&series, MarketMode::MeanOverDimension)?;
    let fit = factor::fit(&series, &market)?;
    let dfts = DftPanel::compute(&series, &market)?;
    let field = PeriodogramField::compute(&dfts);
    let grid = field.grid();
    if truths.len() != grid.half_len() {
        return Err(CoreError::GridMismatch {
            left: truths.len(),
            right: grid.half_len(),
        });
    }
    let mut sums = vec![0.0; estimators.len()];
    let needs_shrink = estimators
        .iter()
        .any(|e| matches!(e, EstimatorKind::Ddmse | EstimatorKind::Ddsse));
    for (idx, k) in grid.half_indices().enumerate() {
        let truth = &truths[idx];
        let f0_augmented = field.averaged(k, span)?;
        if needs_shrink {
            let est = shrink_with_averaged(&field, &fit, k, span, true, f0_augmented)?;
            let f0_panel = panel_block(&est.f0_augmented);
            for (slot, kind) in estimators.iter().enumerate() {
                sums[slot] += match kind {
                    EstimatorKind::AvgPeriodogram => frob_sq_diff(&f0_panel, truth),
                    EstimatorKind::OneFactor => {
                        frob_sq_diff(&complexify(&est.target), truth)
                    }
                    EstimatorKind::Ddmse => frob_sq_diff(&est.combined, truth),
                    EstimatorKind::Ddsse => {
                        let id = ddsse(&f0_panel, est.diagnostics.p_total, span);
                        frob_sq_diff(&id.combined, truth)
                    }
                };
            }
        } else {
            let f0_panel = panel_block(&f0_augmented);
            for (slot, kind) in estimators.iter().enumerate() {
                sums[slot] += match kind {
                    EstimatorKind::AvgPeriodogram => frob_sq_diff(&f0_panel, truth),
                    EstimatorKind::OneFactor => {
                        let target = factor::build_target(&fit, f0_augmented[(0, 0)].re)?;
                        frob_sq_diff(&complexify(&target), truth)
                    }
                    _ => unreachable!("shrink estimators handled above"),
                };
            }
        }
    }
    Ok(sums
        .into_iter()
        .map(|s| TWO_PI / len as f64 * s)
        .collect())
}

fn default_estimators() -> Vec<EstimatorKind> {
    EstimatorKind::ALL.to_vec()
}

fn default_runs() -> usize {
    200
}

/// Declarative description of a Monte Carlo study. Exactly one smoothing
/// span axis (`m` or `m_sweep`) is required; the second factor scale comes
/// from `sigma2`, `sigma2_sweep`, or the model default.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    #[serde(default)]
    pub model: TwoFactorModelSpec,
    #[serde(rename = "T")]
    pub len: usize,
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(default)]
    pub m_sweep: Option<Vec<usize>>,
    #[serde(default)]
    pub sigma2: Option<f64>,
    #[serde(default)]
    pub sigma2_sweep: Option<Vec<f64>>,
    #[serde(rename = "M", default = "default_runs")]
    pub runs: usize,
    pub master_seed: u64,
    #[serde(default = "default_estimators")]
    pub estimators: Vec<EstimatorKind>,
}

/// One point of the sweep axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub sweep_value: f64,
    pub span: usize,
    pub sigma: f64,
}

impl RunSpec {
    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        let field_err = |field: &str, reason: &str| CoreError::RunSpecField {
            field: field.into(),
            reason: reason.into(),
        };
        if self.runs < 2 {
            return Err(field_err("M", "need at least 2 runs"));
        }
        if self.estimators.is_empty() {
            return Err(field_err("estimators", "must not be empty"));
        }
        match (&self.m, &self.m_sweep) {
            (Some(_), Some(_)) => {
                return Err(field_err("m_sweep", "exclusive with m"));
            }
            (None, None) => {
                return Err(field_err("m", "either m or m_sweep is required"));
            }
            _ => {}
        }
        if self.m_sweep.is_some() && self.sigma2_sweep.is_some() {
            return Err(field_err("sigma2_sweep", "exclusive with m_sweep"));
        }
        if self.sigma2.is_some() && self.sigma2_sweep.is_some() {
            return Err(field_err("sigma2_sweep", "exclusive with sigma2"));
        }
        for &span in self.spans().iter() {
            if span % 2 == 0 || span == 0 {
                return Err(field_err("m", "smoothing spans must be odd"));
            }
            if span > self.len {
                return Err(field_err("m", "smoothing span exceeds T"));
            }
        }
        if let Some(sweep) = &self.sigma2_sweep {
            if sweep.is_empty() {
                return Err(field_err("sigma2_sweep", "must not be empty"));
            }
        }
        if self
            .sigmas()
            .iter()
            .any(|s| !s.is_finite() || *s < 0.0)
        {
            return Err(field_err("sigma2", "must be finite and nonnegative"));
        }
        Ok(())
    }

    fn spans(&self) -> Vec<usize> {
        match (&self.m, &self.m_sweep) {
            (Some(m), _) => vec![*m],
            (_, Some(sweep)) => sweep.clone(),
            _ => vec![],
        }
    }

    fn sigmas(&self) -> Vec<f64> {
        match (&self.sigma2, &self.sigma2_sweep) {
            (Some(s), _) => vec![*s],
            (_, Some(sweep)) => sweep.clone(),
            _ => vec![self.model.second_factor_sigma],
        }
    }

    /// The sweep points in report order. A span sweep reports m as the
    /// sweep value; otherwise the second factor scale is the sweep value.
    pub fn sweep_points(&self) -> Vec<SweepPoint> {
        if let Some(ms) = &self.m_sweep {
            let sigma = self.sigmas()[0];
            ms.iter()
                .map(|&span| SweepPoint {
                    sweep_value: span as f64,
                    span,
                    sigma,
                })
                .collect()
        } else {
            let span = self.spans()[0];
            self.sigmas()
                .iter()
                .map(|&sigma| SweepPoint {
                    sweep_value: sigma,
                    span,
                    sigma,
                })
                .collect()
        }
    }
}

/// One aggregated report row.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MiseRow {
    pub estimator: EstimatorKind,
    pub sweep_value: f64,
    pub mise_mean: f64,
    pub mise_se: f64,
    #[serde(rename = "M")]
    pub runs: usize,
    #[serde(rename = "T")]
    pub len: usize,
    #[serde(rename = "m")]
    pub span: usize,
    pub seed: u64,
}

/// A failed replicate, excluded from the aggregates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunFailure {
    pub sweep_value: f64,
    pub run_index: usize,
    pub reason: String,
}

/// Aggregated study output.
#[derive(Debug, Clone)]
pub struct MiseReport {
    pub rows: Vec<MiseRow>,
    pub failures: Vec<RunFailure>,
}

impl MiseReport {
    pub fn mean_of(&self, kind: EstimatorKind, sweep_value: f64) -> Option<&MiseRow> {
        self.rows
            .iter()
            .find(|r| r.estimator == kind && r.sweep_value == sweep_value)
    }
}

/// Runs the study. Replicates execute in parallel; each replicate derives
/// its generator stream from (master seed, sweep index, run index), and
/// aggregation walks runs in index order, so the report is independent of
/// scheduling.
pub fn monte_carlo(spec: &RunSpec) -> Result<MiseReport> {
    spec.validate()?;
    let points = spec.sweep_points();
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    let mut total_runs = 0usize;
    let mut total_failures = 0usize;
    for (sweep_index, point) in points.iter().enumerate() {
        let model = spec.model.with_second_factor_sigma(point.sigma);
        let truths = half_grid_truth(&model, spec.len);
        let outcomes: Vec<std::result::Result<Vec<f64>, String>> = (0..spec.runs)
            .into_par_iter()
            .map(|run_index| {
                let mut rng = ChaCha8Rng::seed_from_u64(spec.master_seed);
                rng.set_stream(((sweep_index as u64) << 32) | run_index as u64);
                run_once(
                    &model,
                    spec.len,
                    point.span,
                    &spec.estimators,
                    &truths,
                    &mut rng,
                )
                .map_err(|e| e.to_string())
            })
            .collect();
        let mut per_estimator: Vec<Vec<f64>> = vec![Vec::new(); spec.estimators.len()];
        for (run_index, outcome) in outcomes.iter().enumerate() {
            total_runs += 1;
            match outcome {
                Ok(values) => {
                    for (slot, v) in values.iter().enumerate() {
                        per_estimator[slot].push(*v);
                    }
                }
                Err(reason) => {
                    total_failures += 1;
                    failures.push(RunFailure {
                        sweep_value: point.sweep_value,
                        run_index,
                        reason: reason.clone(),
                    });
                }
            }
        }
        for (slot, kind) in spec.estimators.iter().enumerate() {
            let values = &per_estimator[slot];
            if values.len() < 2 {
                continue;
            }
            let n = values.len() as f64;
            let mean = values.iter().sum::<f64>() / n;
            let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
            rows.push(MiseRow {
                estimator: *kind,
                sweep_value: point.sweep_value,
                mise_mean: mean,
                mise_se: (var / n).sqrt(),
                runs: values.len(),
                len: spec.len,
                span: point.span,
                seed: spec.master_seed,
            });
        }
    }
    if total_runs > 0 && total_failures == total_runs {
        return Err(CoreError::AllRunsFailed { total: total_runs });
    }
    Ok(MiseReport { rows, failures })
}
