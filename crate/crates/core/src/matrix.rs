//! Complex Hermitian matrix helpers: eigenvalues, condition numbers,
//! Frobenius distances.

use crate::error::{CoreError, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

/// A spectral density matrix tagged with its grid position.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMatrix {
    pub frequency_index: usize,
    pub omega: f64,
    pub entries: CMatrix,
}

/// Relative tolerance for Hermitian validation.
const HERMITIAN_RTOL: f64 = 1e-10;
/// Eigenvalue ratio below which a matrix counts as numerically singular.
const SINGULAR_RTOL: f64 = 1e-14;

/// Largest absolute entry, used as the scale for relative comparisons.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Entrywise Hermitian check within a relative tolerance.
pub fn is_hermitian(m: &CMatrix, rtol: f64) -> bool {
    if m.nrows() != m.ncols() {
        return false;
    }
    let scale = max_abs(m).max(f64::MIN_POSITIVE);
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            if (m[(i, j)] - m[(j, i)].conj()).norm() > rtol * scale {
                return false;
            }
        }
    }
    true
}

/// Eigenvalues of a Hermitian matrix, ascending. Rejects inputs that are
/// not Hermitian within tolerance; symmetrizes before decomposing so the
/// result is exactly real.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Result<Vec<f64>> {
    if !is_hermitian(m, HERMITIAN_RTOL) {
        return Err(CoreError::NonHermitian);
    }
    let h = (m + m.adjoint()).map(|z| z * Complex64::new(0.5, 0.0));
    let mut ev: Vec<f64> = h.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    Ok(ev)
}

/// Ratio of the largest to smallest Hermitian eigenvalue. Returns the
/// +infinity sentinel when the smallest eigenvalue is nonpositive or below
/// 1e-14 times the largest.
pub fn condition_number(m: &CMatrix) -> Result<f64> {
    let ev = hermitian_eigenvalues(m)?;
    let min = ev[0];
    let max = ev[ev.len() - 1];
    if max <= 0.0 || min <= SINGULAR_RTOL * max {
        Ok(f64::INFINITY)
    } else {
        Ok(max / min)
    }
}

/// Squared Frobenius norm.
pub fn frob_sq(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}

/// Squared Frobenius distance between two equally sized matrices.
pub fn frob_sq_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum()
}

/// Real trace of a Hermitian matrix.
pub fn real_trace(m: &CMatrix) -> f64 {
    (0..m.nrows().min(m.ncols())).map(|i| m[(i, i)].re).sum()
}

/// Lifts a real matrix into the complex type.
pub fn complexify(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cm(rows: usize, cols: usize, data: &[Complex64]) -> CMatrix {
        CMatrix::from_row_slice(rows, cols, data)
    }

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn identity_condition_is_one() {
        for p in 1..=4 {
            let id = CMatrix::identity(p, p);
            assert_eq!(condition_number(&id).unwrap(), 1.0);
        }
    }

    #[test]
    fn diagonal_condition() {
        let m = cm(2, 2, &[re(4.0), re(0.0), re(0.0), re(1.0)]);
        assert!((condition_number(&m).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn rank_one_hits_sentinel() {
        let v = nalgebra::DVector::from_vec(vec![re(1.0), re(2.0), Complex64::new(0.5, 1.0)]);
        let m = &v * v.adjoint();
        assert_eq!(condition_number(&m).unwrap(), f64::INFINITY);
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = cm(2, 2, &[re(1.0), re(2.0), re(3.0), re(1.0)]);
        assert!(matches!(condition_number(&m), Err(CoreError::NonHermitian)));
    }

    #[test]
    fn complex_hermitian_eigenvalues() {
        let m = cm(
            2,
            2,
            &[
                re(2.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, -1.0),
                re(2.0),
            ],
        );
        let ev = hermitian_eigenvalues(&m).unwrap();
        assert!((ev[0] - 1.0).abs() < 1e-12 && (ev[1] - 3.0).abs() < 1e-12);
    }
}
