//! Data-driven shrinkage of the averaged periodogram toward the one-factor
//! target: local moment estimates, shrinkage intensity, the combined
//! estimator, the identity-target variant, oracle quantities, and the
//! empirical risk curve.

use crate::error::{CoreError, Result};
use crate::factor::{build_target, FactorFit};
use crate::matrix::{complexify, frob_sq_diff, real_trace, CMatrix};
use crate::periodogram::{panel_block, PeriodogramField};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Per-frequency shrinkage diagnostics: moment totals, intensity before
/// and after clamping, and the per-entry moment fields.
#[derive(Debug, Clone)]
pub struct ShrinkageDiagnostics {
    pub p_total: f64,
    pub r_total: Complex64,
    pub g_total: f64,
    pub zeta_raw: f64,
    pub zeta: f64,
    pub clamped: bool,
    /// Set when clamping is disabled and the raw intensity left [0, 1].
    pub range_warning: bool,
    /// Set when the gap fell at or below the floor and the intensity was
    /// forced to zero.
    pub gap_floored: bool,
    pub p_entries: DMatrix<f64>,
    pub r_entries: DMatrix<Complex64>,
    pub g_entries: DMatrix<f64>,
}

/// Result of shrinking the averaged periodogram at one frequency.
#[derive(Debug, Clone)]
pub struct ShrinkageEstimate {
    /// Averaged periodogram over the augmented index set (market row 0).
    pub f0_augmented: CMatrix,
    /// One-factor target on the panel block.
    pub target: DMatrix<f64>,
    /// Convex combination zeta * target + (1 - zeta) * averaged, panel block.
    pub combined: CMatrix,
    pub diagnostics: ShrinkageDiagnostics,
}

/// Identity-target variant at one frequency.
#[derive(Debug, Clone)]
pub struct DdsseEstimate {
    /// Mean eigenvalue level mu = trace / p.
    pub mean_level: f64,
    /// Summed local variance handed in by the caller.
    pub p_total: f64,
    /// Squared gap between the scaled identity and the averaged periodogram.
    pub gap_total: f64,
    pub zeta_raw: f64,
    pub zeta: f64,
    pub gap_floored: bool,
    pub combined: CMatrix,
}

/// Window deviations I(omega_k) - f0 for the panel block plus the market
/// ordinate deviation, shared by the two moment estimators.
fn window_deviations(
    field: &PeriodogramField,
    center: usize,
    span: usize,
    f0_augmented: &CMatrix,
) -> Result<Vec<(f64, CMatrix)>> {
    let window = field.grid().window(center, span)?;
    let p = field.dims();
    Ok(window
        .into_iter()
        .map(|k| {
            let raw = field.matrix(k);
            let dev00 = raw[(0, 0)].re - f0_augmented[(0, 0)].re;
            let mut dev = CMatrix::zeros(p, p);
            for i in 0..p {
                for j in 0..p {
                    dev[(i, j)] = raw[(i + 1, j + 1)] - f0_augmented[(i + 1, j + 1)];
                }
            }
            (dev00, dev)
        })
        .collect())
}

/// Entrywise sample variance of the raw periodogram over the smoothing
/// window, around the averaged periodogram. Zero when the window is
/// degenerate (span 1).
pub fn local_variance(
    field: &PeriodogramField,
    center: usize,
    span: usize,
    f0_augmented: &CMatrix,
) -> Result<DMatrix<f64>> {
    let p = field.dims();
    if span == 1 {
        return Ok(DMatrix::zeros(p, p));
    }
    let devs = window_deviations(field, center, span, f0_augmented)?;
    let norm = (span - 1) as f64;
    let mut out = DMatrix::zeros(p, p);
    for (_, dev) in &devs {
        for i in 0..p {
            for j in 0..p {
                out[(i, j)] += dev[(i, j)].norm_sqr();
            }
        }
    }
    Ok(out / norm)
}

/// Entrywise estimate of the covariance between the target and the
/// averaged periodogram: slopes_i * slopes_j times the windowed sample
/// covariance of the market ordinate with entry (i, j).
pub fn covariance_estimate(
    field: &PeriodogramField,
    center: usize,
    span: usize,
    f0_augmented: &CMatrix,
    slopes: &[f64],
) -> Result<DMatrix<Complex64>> {
    let p = field.dims();
    assert_eq!(slopes.len(), p, "slope vector must match the panel");
    if span == 1 {
        return Ok(DMatrix::zeros(p, p));
    }
    let devs = window_deviations(field, center, span, f0_augmented)?;
    let norm = (span - 1) as f64;
    let mut out: DMatrix<Complex64> = DMatrix::zeros(p, p);
    for (dev00, dev) in &devs {
        for i in 0..p {
            for j in 0..p {
                out[(i, j)] += dev[(i, j)] * *dev00;
            }
        }
    }
    for i in 0..p {
        for j in 0..p {
            out[(i, j)] *= slopes[i] * slopes[j] / norm;
        }
    }
    Ok(out)
}

/// Entrywise squared gap |target_ij - f0_ij|^2 on the panel block.
pub fn gap(f0_panel: &CMatrix, target: &DMatrix<f64>) -> DMatrix<f64> {
    let p = target.nrows();
    DMatrix::from_fn(p, p, |i, j| {
        (Complex64::new(target[(i, j)], 0.0) - f0_panel[(i, j)]).norm_sqr()
    })
}

/// Floor below which the gap counts as degenerate: 1e-12 * p^2 * trace^2.
pub fn gap_floor(dims: usize, trace: f64) -> f64 {
    1e-12 * (dims * dims) as f64 * trace * trace
}

/// Intensity before combination. Errors when the gap is at or below the
/// floor; callers fall back to intensity zero.
pub fn intensity(
    p_total: f64,
    r_total_re: f64,
    g_total: f64,
    span: usize,
    floor: f64,
    clamp: bool,
) -> Result<(f64, f64, bool, bool)> {
    if g_total <= floor {
        return Err(CoreError::DegenerateGap {
            gap: g_total,
            floor,
        });
    }
    let zeta_raw = (p_total - r_total_re) / (span as f64 * g_total);
    if clamp {
        let zeta = zeta_raw.clamp(0.0, 1.0);
        Ok((zeta, zeta_raw, zeta != zeta_raw, false))
    } else {
        Ok((zeta_raw, zeta_raw, false, !(0.0..=1.0).contains(&zeta_raw)))
    }
}

/// Full shrinkage step at one frequency: averaged periodogram, one-factor
/// target, local moments, intensity, and the convex combination.
pub fn ddmse(
    field: &PeriodogramField,
    fit: &FactorFit,
    center: usize,
    span: usize,
    clamp: bool,
) -> Result<ShrinkageEstimate> {
    let f0_augmented = field.averaged(center, span)?;
    shrink_with_averaged(field, fit, center, span, clamp, f0_augmented)
}

/// Same as [`ddmse`] but reuses an already computed averaged periodogram.
pub fn shrink_with_averaged(
    field: &PeriodogramField,
    fit: &FactorFit,
    center: usize,
    span: usize,
    clamp: bool,
    f0_augmented: CMatrix,
) -> Result<ShrinkageEstimate> {
    let p = field.dims();
    let target = build_target(fit, f0_augmented[(0, 0)].re)?;
    let f0_panel = panel_block(&f0_augmented);
    let p_entries = local_variance(field, center, span, &f0_augmented)?;
    let r_entries = covariance_estimate(field, center, span, &f0_augmented, &fit.slopes)?;
    let g_entries = gap(&f0_panel, &target);
    let p_total = p_entries.iter().sum();
    let r_total: Complex64 = r_entries.iter().sum();
    let g_total: f64 = g_entries.iter().sum();
    let floor = gap_floor(p, real_trace(&f0_panel));
    let (zeta, zeta_raw, clamped, range_warning, gap_floored) =
        match intensity(p_total, r_total.re, g_total, span, floor, clamp) {
            Ok((z, zr, c, w)) => (z, zr, c, w, false),
            Err(CoreError::DegenerateGap { .. }) => (0.0, 0.0, false, false, true),
            Err(e) => return Err(e),
        };
    let combined = combine(&target, &f0_panel, zeta);
    Ok(ShrinkageEstimate {
        f0_augmented,
        target,
        combined,
        diagnostics: ShrinkageDiagnostics {
            p_total,
            r_total,
            g_total,
            zeta_raw,
            zeta,
            clamped,
            range_warning,
            gap_floored,
            p_entries,
            r_entries,
            g_entries,
        },
    })
}

/// zeta * target + (1 - zeta) * base on the panel block.
pub fn combine(target: &DMatrix<f64>, base: &CMatrix, zeta: f64) -> CMatrix {
    let t = complexify(target);
    t * Complex64::new(zeta, 0.0) + base * Complex64::new(1.0 - zeta, 0.0)
}

/// Identity-target shrinkage: pulls the averaged periodogram toward
/// mu * I where mu is the mean diagonal level, with intensity
/// clamp(p_total / (span * gap), 0, 1).
pub fn ddsse(f0_panel: &CMatrix, p_total: f64, span: usize) -> DdsseEstimate {
    let p = f0_panel.nrows();
    let trace = real_trace(f0_panel);
    let mean_level = trace / p as f64;
    let mut identity_target = DMatrix::zeros(p, p);
    for i in 0..p {
        identity_target[(i, i)] = mean_level;
    }
    let g_id: f64 = gap(f0_panel, &identity_target).iter().sum();
    let floor = gap_floor(p, trace);
    let (zeta, zeta_raw, gap_floored) = if g_id <= floor {
        (0.0, 0.0, true)
    } else {
        let raw = p_total / (span as f64 * g_id);
        (raw.clamp(0.0, 1.0), raw, false)
    };
    DdsseEstimate {
        mean_level,
        p_total,
        gap_total: g_id,
        zeta_raw,
        zeta,
        gap_floored,
        combined: combine(&identity_target, f0_panel, zeta),
    }
}

/// Population-level shrinkage quantities evaluated from the true spectrum
/// on a smoothing window.
#[derive(Debug, Clone)]
pub struct OracleParameters {
    /// Summed periodogram variance proxy at the center frequency.
    pub variance_total: f64,
    /// Summed target/periodogram covariance proxy at the center frequency.
    pub covariance_total: Complex64,
    /// Squared gap between the population target and the true spectrum at
    /// the center frequency.
    pub gap_total: f64,
    /// Exact finite-window risk minimizer, clamped to [0, 1].
    pub zeta_star: f64,
    /// Large-sample form (variance - Re covariance) / (span * gap),
    /// reported unclamped.
    pub zeta_star_asymptotic: f64,
}

/// Which reference matrix the finite-window risk is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RiskReference {
    /// The true spectrum at the center frequency (default).
    AnalyticSpectrum,
    /// The window mean of the true spectrum, i.e. the expected averaged
    /// periodogram up to leakage.
    WindowMean,
}

/// Computes oracle quantities from the true augmented spectra on the
/// smoothing window (odd length, center in the middle), the population
/// slopes, and the population idiosyncratic variances.
pub fn oracle_parameters(
    true_window: &[CMatrix],
    beta: &[f64],
    delta: &[f64],
    reference: RiskReference,
) -> Result<OracleParameters> {
    let span = true_window.len();
    if span == 0 || span.is_multiple_of(2) {
        return Err(CoreError::EvenSpan { span });
    }
    let p = beta.len();
    assert_eq!(delta.len(), p, "slope and variance vectors must match");
    let center = &true_window[(span - 1) / 2];
    assert_eq!(center.nrows(), p + 1, "augmented matrices expected");

    let f00_c = center[(0, 0)].re;
    let mut variance_total = 0.0;
    let mut covariance_total = Complex64::new(0.0, 0.0);
    let mut gap_total = 0.0;
    for i in 0..p {
        for j in 0..p {
            let fij = center[(i + 1, j + 1)];
            variance_total += center[(i + 1, i + 1)].re * center[(j + 1, j + 1)].re;
            covariance_total +=
                center[(0, i + 1)] * center[(j + 1, 0)] * (beta[i] * beta[j]);
            let mut target = Complex64::new(beta[i] * beta[j] * f00_c, 0.0);
            if i == j {
                target += Complex64::new(delta[i], 0.0);
            }
            gap_total += (target - fij).norm_sqr();
        }
    }
    if gap_total <= 0.0 {
        return Err(CoreError::UnmisspecifiedTarget);
    }
    let m = span as f64;
    let zeta_star_asymptotic = (variance_total - covariance_total.re) / (m * gap_total);

    // Exact finite-window vertex: first and second moments of the averaged
    // periodogram and of the target built from it, accumulated over the
    // window under the per-ordinate moment identities.
    let inv_m2 = 1.0 / (m * m);
    let mut mean_base: DMatrix<Complex64> = DMatrix::zeros(p, p);
    let mut mean_f00 = 0.0;
    let mut var_base = DMatrix::<f64>::zeros(p, p);
    let mut var_f00 = 0.0;
    let mut cov_mixed: DMatrix<Complex64> = DMatrix::zeros(p, p);
    for w in true_window {
        mean_f00 += w[(0, 0)].re / m;
        var_f00 += w[(0, 0)].re * w[(0, 0)].re * inv_m2;
        for i in 0..p {
            for j in 0..p {
                mean_base[(i, j)] += w[(i + 1, j + 1)] / m;
                var_base[(i, j)] +=
                    w[(i + 1, i + 1)].re * w[(j + 1, j + 1)].re * inv_m2;
                cov_mixed[(i, j)] += w[(0, i + 1)] * w[(j + 1, 0)] * inv_m2;
            }
        }
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..p {
        for j in 0..p {
            let bb = beta[i] * beta[j];
            let mut mean_target = Complex64::new(bb * mean_f00, 0.0);
            if i == j {
                mean_target += Complex64::new(delta[i], 0.0);
            }
            let reference_entry = match reference {
                RiskReference::AnalyticSpectrum => center[(i + 1, j + 1)],
                RiskReference::WindowMean => mean_base[(i, j)],
            };
            let var_a = bb * bb * var_f00;
            let var_b = var_base[(i, j)];
            let cov_ab = cov_mixed[(i, j)] * bb;
            let bias_b = mean_base[(i, j)] - reference_entry;
            let spread = mean_target - mean_base[(i, j)];
            num += var_b - cov_ab.re - (spread * bias_b.conj()).re;
            den += var_a + var_b - 2.0 * cov_ab.re + spread.norm_sqr();
        }
    }
    let zeta_star = if den > 0.0 {
        (num / den).clamp(0.0, 1.0)
    } else {
        0.0
    };
    Ok(OracleParameters {
        variance_total,
        covariance_total,
        gap_total,
        zeta_star,
        zeta_star_asymptotic,
    })
}

/// Empirical risk of the convex combination z * target + (1 - z) * base
/// against a fixed reference, over replicates, on a z-grid, together with
/// its moment decomposition and the (constant) second derivative.
#[derive(Debug, Clone)]
pub struct RiskCurve {
    pub grid: Vec<f64>,
    /// Mean squared Frobenius distance per grid point.
    pub risk: Vec<f64>,
    /// Same curve rebuilt from variance, covariance, and bias terms.
    pub decomposed: Vec<f64>,
    /// Second derivative of the quadratic, constant in z.
    pub curvature: f64,
}

pub fn empirical_risk(
    targets: &[DMatrix<f64>],
    bases: &[CMatrix],
    reference: &CMatrix,
    grid: &[f64],
) -> Result<RiskCurve> {
    let n = targets.len();
    if n < 2 {
        return Err(CoreError::InsufficientReplicates { got: n });
    }
    if bases.len() != n {
        return Err(CoreError::GridMismatch {
            left: n,
            right: bases.len(),
        });
    }
    let p = reference.nrows();
    let nf = n as f64;
    let mut mean_a = DMatrix::<f64>::zeros(p, p);
    let mut mean_b: CMatrix = CMatrix::zeros(p, p);
    for (a, b) in targets.iter().zip(bases) {
        mean_a += a / nf;
        mean_b += b / Complex64::new(nf, 0.0);
    }
    let mut var_a = 0.0;
    let mut var_b = 0.0;
    let mut cov_ab = 0.0;
    for (a, b) in targets.iter().zip(bases) {
        for i in 0..p {
            for j in 0..p {
                let da = Complex64::new(a[(i, j)] - mean_a[(i, j)], 0.0);
                let db = b[(i, j)] - mean_b[(i, j)];
                var_a += da.norm_sqr() / nf;
                var_b += db.norm_sqr() / nf;
                cov_ab += (da * db.conj()).re / nf;
            }
        }
    }
    let mut risk = Vec::with_capacity(grid.len());
    let mut decomposed = Vec::with_capacity(grid.len());
    for &z in grid {
        let direct: f64 = targets
            .iter()
            .zip(bases)
            .map(|(a, b)| {
                let mix = combine(a, b, z);
                frob_sq_diff(&mix, reference)
            })
            .sum::<f64>()
            / nf;
        risk.push(direct);
        let mean_mix = combine(&mean_a, &mean_b, z);
        let bias = frob_sq_diff(&mean_mix, reference);
        decomposed
            .push(z * z * var_a + (1.0 - z) * (1.0 - z) * var_b + 2.0 * z * (1.0 - z) * cov_ab + bias);
    }
    let mean_a_c = complexify(&mean_a);
    let curvature = 2.0 * (var_a + var_b - 2.0 * cov_ab) + 2.0 * frob_sq_diff(&mean_a_c, &mean_b);
    Ok(RiskCurve {
        grid: grid.to_vec(),
        risk,
        decomposed,
        curvature,
    })
}
