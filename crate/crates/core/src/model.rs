//! Two-factor benchmark data generator and its analytic spectrum.
//!
//! Factor 1 is an MA(2) process, factor 2 is scaled white noise; the panel
//! is loadings times factors plus diagonal Gaussian noise, and the market
//! series is the cross-sectional mean.

use crate::error::{CoreError, Result};
use crate::frequency::TWO_PI;
use crate::matrix::CMatrix;
use crate::series::MultivariateSeries;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// Benchmark factor loadings (p = 5, two factors).
pub const DEFAULT_LOADINGS: [[f64; 2]; 5] = [
    [0.5871, 0.4510],
    [0.5676, 0.9691],
    [0.4645, 0.7268],
    [0.8691, 0.5511],
    [0.5379, 0.4754],
];

/// Benchmark idiosyncratic noise variances.
pub const DEFAULT_NOISE_VARIANCES: [f64; 5] = [0.3213, 0.3726, 0.2646, 0.4169, 0.3257];

/// Observations consumed before t = 1 so the MA(2) recursion is stationary
/// from the first emitted sample.
pub const BURN_IN: usize = 2;

fn default_loadings() -> Vec<[f64; 2]> {
    DEFAULT_LOADINGS.to_vec()
}

fn default_noise_variances() -> Vec<f64> {
    DEFAULT_NOISE_VARIANCES.to_vec()
}

fn default_ma2_coefficients() -> [f64; 2] {
    [0.0, -0.9]
}

fn default_ma2_innovation_variance() -> f64 {
    1.0
}

fn default_second_factor_sigma() -> f64 {
    3.0
}

/// Parameters of the two-factor generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoFactorModelSpec {
    #[serde(default = "default_loadings")]
    pub loadings: Vec<[f64; 2]>,
    #[serde(default = "default_noise_variances")]
    pub noise_variances: Vec<f64>,
    #[serde(default = "default_ma2_coefficients")]
    pub ma2_coefficients: [f64; 2],
    #[serde(default = "default_ma2_innovation_variance")]
    pub ma2_innovation_variance: f64,
    #[serde(default = "default_second_factor_sigma")]
    pub second_factor_sigma: f64,
}

impl Default for TwoFactorModelSpec {
    fn default() -> Self {
        Self {
            loadings: default_loadings(),
            noise_variances: default_noise_variances(),
            ma2_coefficients: default_ma2_coefficients(),
            ma2_innovation_variance: default_ma2_innovation_variance(),
            second_factor_sigma: default_second_factor_sigma(),
        }
    }
}

impl TwoFactorModelSpec {
    pub fn validate(&self) -> Result<()> {
        if self.loadings.is_empty() {
            return Err(CoreError::ModelShape("loadings are empty".into()));
        }
        if self.noise_variances.len() != self.loadings.len() {
            return Err(CoreError::ModelShape(format!(
                "{} noise variances for {} loading rows",
                self.noise_variances.len(),
                self.loadings.len()
            )));
        }
        if self.noise_variances.iter().any(|&v| v < 0.0) {
            return Err(CoreError::ModelShape("negative noise variance".into()));
        }
        if self.ma2_innovation_variance < 0.0 {
            return Err(CoreError::ModelShape("negative innovation variance".into()));
        }
        if self.second_factor_sigma < 0.0 {
            return Err(CoreError::ModelShape("negative second factor sigma".into()));
        }
        let finite = self
            .loadings
            .iter()
            .flatten()
            .chain(self.noise_variances.iter())
            .chain(self.ma2_coefficients.iter())
            .all(|x| x.is_finite())
            && self.ma2_innovation_variance.is_finite()
            && self.second_factor_sigma.is_finite();
        if !finite {
            return Err(CoreError::ModelShape("non-finite parameter".into()));
        }
        Ok(())
    }

    /// Panel dimension p.
    pub fn dims(&self) -> usize {
        self.loadings.len()
    }

    /// With the second factor silenced and its sigma replaced.
    pub fn with_second_factor_sigma(&self, sigma: f64) -> Self {
        Self {
            second_factor_sigma: sigma,
            ..self.clone()
        }
    }

    /// Spectral density of the MA(2) factor at omega.
    pub fn ma2_spectrum(&self, omega: f64) -> f64 {
        let [t1, t2] = self.ma2_coefficients;
        let e1 = Complex64::from_polar(1.0, -omega);
        let e2 = Complex64::from_polar(1.0, -2.0 * omega);
        let transfer = Complex64::new(1.0, 0.0) + e1 * t1 + e2 * t2;
        self.ma2_innovation_variance / TWO_PI * transfer.norm_sqr()
    }

    /// True augmented spectral density matrix at omega: panel block on
    /// indices 1..=p, market row/column 0 from the cross-sectional mean.
    /// All entries are real for this model.
    pub fn true_spectrum(&self, omega: f64) -> CMatrix {
        let p = self.dims();
        let f1 = self.ma2_spectrum(omega);
        let f2 = self.second_factor_sigma * self.second_factor_sigma / TWO_PI;
        let mut panel = DMatrix::<f64>::zeros(p, p);
        for i in 0..p {
            for j in 0..p {
                panel[(i, j)] = self.loadings[i][0] * self.loadings[j][0] * f1
                    + self.loadings[i][1] * self.loadings[j][1] * f2;
            }
            panel[(i, i)] += self.noise_variances[i] / TWO_PI;
        }
        let mut aug = CMatrix::zeros(p + 1, p + 1);
        let pf = p as f64;
        let mut total = 0.0;
        for i in 0..p {
            let mut row_sum = 0.0;
            for j in 0..p {
                aug[(i + 1, j + 1)] = Complex64::new(panel[(i, j)], 0.0);
                row_sum += panel[(i, j)];
            }
            total += row_sum;
            aug[(0, i + 1)] = Complex64::new(row_sum / pf, 0.0);
            aug[(i + 1, 0)] = Complex64::new(row_sum / pf, 0.0);
        }
        aug[(0, 0)] = Complex64::new(total / (pf * pf), 0.0);
        aug
    }

    /// Lag-zero autocovariance matrix of the panel.
    fn lag_zero_covariance(&self) -> DMatrix<f64> {
        let p = self.dims();
        let [t1, t2] = self.ma2_coefficients;
        let v1 = self.ma2_innovation_variance * (1.0 + t1 * t1 + t2 * t2);
        let v2 = self.second_factor_sigma * self.second_factor_sigma;
        let mut gamma = DMatrix::<f64>::zeros(p, p);
        for i in 0..p {
            for j in 0..p {
                gamma[(i, j)] = self.loadings[i][0] * self.loadings[j][0] * v1
                    + self.loadings[i][1] * self.loadings[j][1] * v2;
            }
            gamma[(i, i)] += self.noise_variances[i];
        }
        gamma
    }

    /// Population regression of each dimension on the cross-sectional
    /// mean: slopes beta and residual variances delta in spectral units.
    pub fn population_fit(&self) -> (Vec<f64>, Vec<f64>) {
        let p = self.dims();
        let gamma = self.lag_zero_covariance();
        let pf = p as f64;
        let market_cov: Vec<f64> = (0..p)
            .map(|i| (0..p).map(|j| gamma[(i, j)]).sum::<f64>() / pf)
            .collect();
        let market_var = market_cov.iter().sum::<f64>() / pf;
        let beta: Vec<f64> = market_cov.iter().map(|c| c / market_var).collect();
        let delta: Vec<f64> = (0..p)
            .map(|i| (gamma[(i, i)] - beta[i] * beta[i] * market_var) / TWO_PI)
            .collect();
        (beta, delta)
    }

    /// Population one-factor target at omega, built from the population
    /// fit and the true market spectrum.
    pub fn population_target(&self, omega: f64) -> DMatrix<f64> {
        let p = self.dims();
        let (beta, delta) = self.population_fit();
        let f00 = self.true_spectrum(omega)[(0, 0)].re;
        let mut m = DMatrix::zeros(p, p);
        for i in 0..p {
            for j in 0..p {
                m[(i, j)] = beta[i] * beta[j] * f00;
            }
            m[(i, i)] += delta[i];
        }
        m
    }

    /// Draws one panel of length `len`, centered rowwise. Draw order is
    /// fixed: MA(2) innovations (len + 2), second factor (len), then noise
    /// row by row.
    pub fn generate_panel<R: Rng>(&self, len: usize, rng: &mut R) -> Result<MultivariateSeries> {
        self.validate()?;
        if len <= BURN_IN {
            return Err(CoreError::SeriesTooShort {
                len,
                burn_in: BURN_IN,
            });
        }
        let p = self.dims();
        let [t1, t2] = self.ma2_coefficients;
        let sd1 = self.ma2_innovation_variance.sqrt();
        let u: Vec<f64> = (0..len + BURN_IN)
            .map(|_| rng.sample::<f64, _>(StandardNormal) * sd1)
            .collect();
        let factor1: Vec<f64> = (0..len)
            .map(|t| u[t + 2] + t1 * u[t + 1] + t2 * u[t])
            .collect();
        let factor2: Vec<f64> = (0..len)
            .map(|_| rng.sample::<f64, _>(StandardNormal) * self.second_factor_sigma)
            .collect();
        let mut rows = Vec::with_capacity(p);
        for i in 0..p {
            let sd = self.noise_variances[i].sqrt();
            let row: Vec<f64> = (0..len)
                .map(|t| {
                    self.loadings[i][0] * factor1[t]
                        + self.loadings[i][1] * factor2[t]
                        + rng.sample::<f64, _>(StandardNormal) * sd
                })
                .collect();
            rows.push(row);
        }
        Ok(MultivariateSeries::new(rows)?.center())
    }
}
