//! Discrete Fourier transform, raw periodogram, and boxcar-averaged
//! periodogram over the panel augmented with the market series.
//!
//! The DFT convention is d(omega) = (2*pi*T)^(-1/2) * sum_{t=1..T} X_t
//! exp(-i*omega*t). Relative to a textbook FFT over t = 0..T-1 this adds a
//! per-bin phase factor exp(-i*omega).

use crate::error::{CoreError, Result};
use crate::frequency::{FrequencyGrid, TWO_PI};
use crate::matrix::CMatrix;
use crate::series::{MarketSeries, MultivariateSeries};
use nalgebra::DVector;
use num_complex::Complex64;
use rustfft::FftPlanner;

/// DFT coefficients of the augmented panel: row 0 is the market series,
/// rows 1..=p are the panel dimensions. Bins are stored in natural FFT
/// order and addressed by Fourier index k in 1..=T (k = T is the zero bin).
#[derive(Debug, Clone)]
pub struct DftPanel {
    rows: Vec<Vec<Complex64>>,
    len: usize,
}

impl DftPanel {
    /// Transforms the centered panel and market series.
    pub fn compute(series: &MultivariateSeries, market: &MarketSeries) -> Result<Self> {
        if market.len() != series.len() {
            return Err(CoreError::LengthMismatch {
                panel: series.len(),
                market: market.len(),
            });
        }
        let len = series.len();
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(len);
        let scale = 1.0 / (TWO_PI * len as f64).sqrt();
        let phase: Vec<Complex64> = (0..len)
            .map(|j| Complex64::from_polar(scale, -TWO_PI * j as f64 / len as f64))
            .collect();
        let transform = |data: &[f64]| -> Vec<Complex64> {
            let mut buf: Vec<Complex64> =
                data.iter().map(|&x| Complex64::new(x, 0.0)).collect();
            fft.process(&mut buf);
            buf.iter().zip(&phase).map(|(v, ph)| v * ph).collect()
        };
        let mut rows = Vec::with_capacity(series.dims() + 1);
        rows.push(transform(market.values()));
        for row in series.rows() {
            rows.push(transform(row));
        }
        Ok(Self { rows, len })
    }

    /// Series length T.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Panel dimension p (excluding the market row).
    pub fn dims(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn grid(&self) -> FrequencyGrid {
        FrequencyGrid::new(self.len)
    }

    /// Coefficient d_row(omega_k); row 0 is the market, k in 1..=T.
    pub fn coefficient(&self, row: usize, k: usize) -> Complex64 {
        assert!(k >= 1 && k <= self.len);
        self.rows[row][k % self.len]
    }

    /// The augmented coefficient vector (market first) at Fourier index k.
    pub fn vector(&self, k: usize) -> DVector<Complex64> {
        DVector::from_iterator(
            self.rows.len(),
            self.rows.iter().map(|r| r[k % self.len]),
        )
    }
}

/// Direct O(T^2) evaluation of the same DFT, for cross-checking.
pub fn dft_direct(data: &[f64], k: usize) -> Complex64 {
    let len = data.len();
    let omega = TWO_PI * k as f64 / len as f64;
    let scale = 1.0 / (TWO_PI * len as f64).sqrt();
    data.iter()
        .enumerate()
        .map(|(t0, &x)| Complex64::from_polar(scale * x, -omega * (t0 + 1) as f64))
        .sum()
}

/// Raw periodogram matrices I(omega_k) = d(omega_k) d(omega_k)^* over the
/// augmented index set {0, 1, .., p}, cached for every Fourier frequency.
#[derive(Debug, Clone)]
pub struct PeriodogramField {
    mats: Vec<CMatrix>,
    len: usize,
    dims: usize,
}

impl PeriodogramField {
    pub fn compute(dfts: &DftPanel) -> Self {
        let len = dfts.len();
        let mats = (0..len)
            .map(|j| {
                let k = if j == 0 { len } else { j };
                let d = dfts.vector(k);
                &d * d.adjoint()
            })
            .collect();
        Self {
            mats,
            len,
            dims: dfts.dims(),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Panel dimension p (matrices are (p+1) x (p+1)).
    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn grid(&self) -> FrequencyGrid {
        FrequencyGrid::new(self.len)
    }

    /// The augmented periodogram matrix at Fourier index k in 1..=T.
    pub fn matrix(&self, k: usize) -> &CMatrix {
        assert!(k >= 1 && k <= self.len);
        &self.mats[k % self.len]
    }

    /// Boxcar mean of the `span` matrices centered at index `center`,
    /// window indices wrapped modulo T. Returns the augmented matrix.
    pub fn averaged(&self, center: usize, span: usize) -> Result<CMatrix> {
        let window = self.grid().window(center, span)?;
        let mut acc = CMatrix::zeros(self.dims + 1, self.dims + 1);
        for k in &window {
            acc += self.matrix(*k);
        }
        Ok(acc / Complex64::new(span as f64, 0.0))
    }
}

/// Panel block (indices 1..=p) of an augmented matrix.
pub fn panel_block(aug: &CMatrix) -> CMatrix {
    let p = aug.nrows() - 1;
    aug.view((1, 1), (p, p)).into_owned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{build_market, MarketMode};

    fn panel(rows: Vec<Vec<f64>>) -> (MultivariateSeries, MarketSeries) {
        let s = MultivariateSeries::new(rows).unwrap().center();
        let m = build_market(&s, MarketMode::MeanOverDimension).unwrap();
        (s, m)
    }

    #[test]
    fn zero_series_zero_coefficients() {
        let (s, m) = panel(vec![vec![0.0; 8], vec![0.0; 8]]);
        let d = DftPanel::compute(&s, &m).unwrap();
        for row in 0..=2 {
            for k in 1..=8 {
                assert_eq!(d.coefficient(row, k), Complex64::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn cosine_concentrates_at_its_frequency() {
        let t = 64;
        let k0 = 5;
        let xs: Vec<f64> = (1..=t)
            .map(|tt| (TWO_PI * tt as f64 * k0 as f64 / t as f64).cos())
            .collect();
        let (s, m) = panel(vec![xs; 2]);
        let d = DftPanel::compute(&s, &m).unwrap();
        for k in 1..=t {
            let mag = d.coefficient(1, k).norm();
            if k == k0 || k == t - k0 {
                assert!(mag > 1e-3, "expected peak at {k}");
            } else {
                assert!(mag < 1e-10, "leakage at {k}: {mag}");
            }
        }
    }

    #[test]
    fn conjugate_symmetry() {
        let (s, m) = panel(vec![
            vec![0.3, -1.2, 0.7, 2.0, -0.4, 0.9, -1.5, 0.2],
            vec![1.1, 0.4, -0.6, -1.3, 0.8, -0.2, 0.5, 1.9],
        ]);
        let d = DftPanel::compute(&s, &m).unwrap();
        for row in 0..=2 {
            for k in 1..8 {
                let a = d.coefficient(row, 8 - k);
                let b = d.coefficient(row, k).conj();
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn fast_matches_direct() {
        let (s, m) = panel(vec![
            vec![0.3, -1.2, 0.7, 2.0, -0.4, 0.9, -1.5, 0.2],
            vec![1.1, 0.4, -0.6, -1.3, 0.8, -0.2, 0.5, 1.9],
        ]);
        let d = DftPanel::compute(&s, &m).unwrap();
        for k in 1..=8 {
            let direct = dft_direct(s.row(0), k);
            assert!((d.coefficient(1, k) - direct).norm() < 1e-13);
        }
    }

    #[test]
    fn averaged_degenerate_window_is_raw() {
        let (s, m) = panel(vec![
            vec![0.3, -1.2, 0.7, 2.0, -0.4, 0.9, -1.5, 0.2],
            vec![1.1, 0.4, -0.6, -1.3, 0.8, -0.2, 0.5, 1.9],
        ]);
        let f = PeriodogramField::compute(&DftPanel::compute(&s, &m).unwrap());
        assert_eq!(f.averaged(3, 1).unwrap(), *f.matrix(3));
    }

    #[test]
    fn full_window_is_grand_mean() {
        let (s, m) = panel(vec![
            vec![0.3, -1.2, 0.7, 2.0, -0.4, 0.9, -1.5],
            vec![1.1, 0.4, -0.6, -1.3, 0.8, -0.2, 0.5],
        ]);
        let f = PeriodogramField::compute(&DftPanel::compute(&s, &m).unwrap());
        let mut grand = CMatrix::zeros(3, 3);
        for k in 1..=7 {
            grand += f.matrix(k);
        }
        grand /= Complex64::new(7.0, 0.0);
        for c in 1..=7 {
            let a = f.averaged(c, 7).unwrap();
            assert!(crate::matrix::frob_sq_diff(&a, &grand) < 1e-24);
        }
    }
}
