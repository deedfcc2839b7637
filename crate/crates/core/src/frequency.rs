//! Fourier frequency grid bookkeeping.
//!
//! Frequencies are indexed by the integer k in 1..=T mapping to
//! omega_k = 2*pi*k/T, so the grid covers (0, 2*pi]. Index T is the
//! zero-frequency bin by periodicity.

use crate::error::{CoreError, Result};

pub const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Fourier grid for a series of a fixed length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrequencyGrid {
    len: usize,
}

impl FrequencyGrid {
    pub fn new(len: usize) -> Self {
        assert!(len > 0, "grid needs a positive length");
        Self { len }
    }

    /// Series length T (also the number of grid frequencies).
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of frequencies in the half circle (0, pi].
    pub fn half_len(&self) -> usize {
        self.len / 2
    }

    /// omega_k = 2*pi*k/T for k in 1..=T. The ratio is formed first so
    /// omega(T) is exactly 2*pi and the grid stays inside (0, 2*pi].
    pub fn omega(&self, k: usize) -> f64 {
        assert!(k >= 1 && k <= self.len, "index {k} outside 1..={}", self.len);
        TWO_PI * (k as f64 / self.len as f64)
    }

    /// Grid frequency nearest to omega; ties break toward the smaller index.
    pub fn nearest(&self, omega: f64) -> Result<(usize, f64)> {
        if !omega.is_finite() || omega <= 0.0 || omega > TWO_PI {
            return Err(CoreError::FrequencyOutOfRange { omega });
        }
        let raw = omega * self.len as f64 / TWO_PI;
        let lo = (raw.floor().max(1.0) as usize).min(self.len);
        let hi = (raw.ceil().max(1.0) as usize).min(self.len);
        let k = if (self.omega(lo) - omega).abs() <= (self.omega(hi) - omega).abs() {
            lo
        } else {
            hi
        };
        Ok((k, self.omega(k)))
    }

    /// Indices of the symmetric window of odd width `span` centered at
    /// `center`, wrapped modulo T back into 1..=T.
    pub fn window(&self, center: usize, span: usize) -> Result<Vec<usize>> {
        if span.is_multiple_of(2) || span == 0 {
            return Err(CoreError::EvenSpan { span });
        }
        if span > self.len {
            return Err(CoreError::SpanTooLarge {
                span,
                len: self.len,
            });
        }
        assert!(center >= 1 && center <= self.len);
        let half = (span - 1) / 2;
        let base = center - 1 + self.len - half;
        Ok((0..span)
            .map(|j| (base + j) % self.len + 1)
            .collect())
    }

    /// All indices of the half circle (0, pi], i.e. 1..=T/2.
    pub fn half_indices(&self) -> impl Iterator<Item = usize> {
        1..=self.len / 2
    }

    /// All grid indices 1..=T.
    pub fn indices(&self) -> impl Iterator<Item = usize> {
        1..=self.len
    }
}
