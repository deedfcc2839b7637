//! Structural invariants checked over randomized inputs: Hermitian
//! symmetry, positive semidefiniteness, rank-1 periodograms, window
//! linearity, conjugate symmetry, condition-number behavior, intensity
//! monotonicity, eigenvalue containment, and risk convexity.

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use specshrink_core::frequency::TWO_PI;
use specshrink_core::matrix::{self, CMatrix};
use specshrink_core::periodogram::panel_block;
use specshrink_core::shrinkage::{self, ddsse, empirical_risk, gap, intensity};
use specshrink_core::{
    build_market, fit, DftPanel, FrequencyGrid, MarketMode, MarketSeries, MultivariateSeries,
    PeriodogramField,
};

fn panel_strategy(
    dims: std::ops::Range<usize>,
    len: std::ops::Range<usize>,
) -> impl Strategy<Value = MultivariateSeries> {
    (dims, len).prop_flat_map(|(p, t)| {
        proptest::collection::vec(
            proptest::collection::vec(-5.0f64..5.0, t..t + 1),
            p..p + 1,
        )
        .prop_map(|rows| MultivariateSeries::new(rows).unwrap().center())
    })
}

fn field_of(series: &MultivariateSeries) -> PeriodogramField {
    let market = build_market(series, MarketMode::MeanOverDimension).unwrap();
    PeriodogramField::compute(&DftPanel::compute(series, &market).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn centered_rows_have_zero_mean(series in panel_strategy(1..4, 4..40)) {
        for i in 0..series.dims() {
            let mean: f64 = series.row(i).iter().sum::<f64>() / series.len() as f64;
            prop_assert!(mean.abs() < 1e-12);
        }
    }

    #[test]
    fn raw_periodogram_is_rank_one_hermitian_psd(series in panel_strategy(2..4, 6..24)) {
        let field = field_of(&series);
        for k in 1..=series.len() {
            let m = field.matrix(k);
            prop_assert!(matrix::is_hermitian(m, 1e-12));
            let ev = matrix::hermitian_eigenvalues(m).unwrap();
            let max = ev[ev.len() - 1];
            prop_assert!(ev[0] >= -1e-10 * max.max(1e-300));
            if max > 1e-12 {
                prop_assert!(ev[ev.len() - 2] < 1e-10 * max + 1e-14);
            }
        }
    }

    #[test]
    fn averaged_is_exact_window_mean(series in panel_strategy(1..4, 8..24), center in 1usize..8, span_half in 0usize..3) {
        let span = 2 * span_half + 1;
        let field = field_of(&series);
        let t = series.len();
        let center = (center - 1) % t + 1;
        let avg = field.averaged(center, span).unwrap();
        let window = FrequencyGrid::new(t).window(center, span).unwrap();
        let mut manual = CMatrix::zeros(series.dims() + 1, series.dims() + 1);
        for k in window {
            manual += field.matrix(k);
        }
        manual /= Complex64::new(span as f64, 0.0);
        prop_assert!(matrix::frob_sq_diff(&avg, &manual) == 0.0);
    }

    #[test]
    fn averaged_is_psd(series in panel_strategy(2..4, 8..24), span_half in 0usize..4) {
        let span = 2 * span_half + 1;
        let field = field_of(&series);
        for k in 1..=series.len() {
            let ev = matrix::hermitian_eigenvalues(&field.averaged(k, span).unwrap()).unwrap();
            let max = ev[ev.len() - 1].max(1e-300);
            prop_assert!(ev[0] >= -1e-10 * max);
        }
    }

    #[test]
    fn averaged_conjugate_symmetry(series in panel_strategy(1..4, 8..24), span_half in 0usize..3) {
        let span = 2 * span_half + 1;
        let field = field_of(&series);
        let t = series.len();
        for k in 1..t {
            let a = field.averaged(k, span).unwrap();
            let b = field.averaged(t - k, span).unwrap();
            let scale = matrix::max_abs(&a).max(1e-300);
            for i in 0..a.nrows() {
                for j in 0..a.ncols() {
                    prop_assert!((a[(i, j)].conj() - b[(i, j)]).norm() <= 1e-10 * scale);
                }
            }
        }
    }

    #[test]
    fn condition_number_scale_invariant(scale in 1e-6f64..1e6) {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = random_psd(3, &mut rng, 0.05);
        let c1 = matrix::condition_number(&m).unwrap();
        let c2 = matrix::condition_number(&(&m * Complex64::new(scale, 0.0))).unwrap();
        prop_assert!((c1 - c2).abs() <= 1e-10 * c1.abs());
    }

    #[test]
    fn intensity_monotone_in_moments(
        p1 in 0.01f64..10.0,
        dp in 0.01f64..5.0,
        g1 in 0.01f64..10.0,
        dg in 0.01f64..5.0,
        r in -2.0f64..2.0,
        span_half in 1usize..16,
    ) {
        let span = 2 * span_half + 1;
        let (_, raw_lo, _, _) = intensity(p1, r, g1, span, 0.0, false).unwrap();
        let (_, raw_hi, _, _) = intensity(p1 + dp, r, g1, span, 0.0, false).unwrap();
        prop_assert!(raw_hi > raw_lo);
        if p1 - r > 0.0 {
            let (_, raw_gl, _, _) = intensity(p1, r, g1 + dg, span, 0.0, false).unwrap();
            prop_assert!(raw_gl < raw_lo);
        }
    }

    #[test]
    fn risk_curve_is_convex_and_anchored(seed in 0u64..500) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = 2;
        let n = 6;
        let reference = random_psd(p, &mut rng, 0.1);
        let targets: Vec<DMatrix<f64>> = (0..n)
            .map(|_| DMatrix::from_fn(p, p, |i, j| {
                if i == j { rng.gen_range(0.5..2.0) } else { 0.3 }
            }))
            .collect();
        let bases: Vec<CMatrix> = (0..n).map(|_| random_psd(p, &mut rng, 0.1)).collect();
        let grid: Vec<f64> = (0..=8).map(|i| i as f64 * 0.25).collect();
        let curve = empirical_risk(&targets, &bases, &reference, &grid).unwrap();
        for (direct, rebuilt) in curve.risk.iter().zip(&curve.decomposed) {
            prop_assert!((direct - rebuilt).abs() <= 1e-10 * direct.abs().max(1e-12));
        }
        for w in curve.risk.windows(3) {
            prop_assert!(w[0] - 2.0 * w[1] + w[2] > -1e-10);
        }
        let z0: f64 = bases
            .iter()
            .map(|b| matrix::frob_sq_diff(b, &reference))
            .sum::<f64>() / n as f64;
        prop_assert!((curve.risk[0] - z0).abs() <= 1e-12 * z0.max(1e-12));
        prop_assert!(curve.curvature > 0.0);
    }
}

fn random_psd<R: Rng>(p: usize, rng: &mut R, ridge: f64) -> CMatrix {
    let a = CMatrix::from_fn(p, p, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    &a * a.adjoint() + CMatrix::identity(p, p) * Complex64::new(ridge, 0.0)
}

#[test]
fn nearest_fourier_exhaustive_small_grids() {
    for t in 1..=64 {
        let grid = FrequencyGrid::new(t);
        for k in 1..=t {
            let (found, omega) = grid.nearest(grid.omega(k)).unwrap();
            assert_eq!(found, k, "T={t} k={k}");
            assert_eq!(omega, grid.omega(k));
        }
    }
}

#[test]
fn nearest_fourier_within_half_spacing() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..5000 {
        let t = rng.gen_range(2usize..128);
        let grid = FrequencyGrid::new(t);
        let lo = std::f64::consts::PI / t as f64;
        let omega = rng.gen_range(lo..TWO_PI);
        let (_, snapped) = grid.nearest(omega).unwrap();
        assert!(
            (snapped - omega).abs() <= std::f64::consts::PI / t as f64 + 1e-12,
            "T={t} omega={omega} snapped={snapped}"
        );
    }
}

#[test]
fn gap_hand_case() {
    let mut f0 = CMatrix::zeros(2, 2);
    f0[(0, 1)] = Complex64::new(1.0, 1.0);
    f0[(1, 0)] = Complex64::new(1.0, -1.0);
    let mut f1 = DMatrix::zeros(2, 2);
    f1[(0, 1)] = 0.5;
    f1[(1, 0)] = 0.5;
    let g = gap(&f0, &f1);
    assert!((g[(0, 1)] - 1.25).abs() < 1e-15);
}

#[test]
fn combine_hand_case() {
    let f0 = matrix::complexify(&DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        2.0, 2.0,
    ])));
    let f1 = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![4.0, 0.0]));
    let mixed = shrinkage::combine(&f1, &f0, 0.5);
    assert_eq!(mixed[(0, 0)].re, 3.0);
    assert_eq!(mixed[(1, 1)].re, 1.0);
    let id0 = shrinkage::combine(&f1, &f0, 0.0);
    assert_eq!(id0, f0);
    let id1 = shrinkage::combine(&f1, &f0, 1.0);
    assert_eq!(id1, matrix::complexify(&f1));
}

#[test]
fn intensity_edge_identities() {
    // Numerator zero gives zeta zero; numerator equal to span * gap gives one.
    let (z, raw, _, _) = intensity(1.5, 1.5, 2.0, 5, 0.0, true).unwrap();
    assert_eq!(raw, 0.0);
    assert_eq!(z, 0.0);
    let g = 2.0;
    let span = 5;
    let r = 0.3;
    let p = r + span as f64 * g;
    let (z, raw, clamped, _) = intensity(p, r, g, span, 0.0, true).unwrap();
    assert!((raw - 1.0).abs() < 1e-15);
    assert_eq!(z, 1.0);
    assert!(!clamped);
}

#[test]
fn intensity_gap_floor_errors_and_warning_flag() {
    let err = intensity(1.0, 0.0, 1e-20, 5, 1e-12, true).unwrap_err();
    assert!(matches!(
        err,
        specshrink_core::CoreError::DegenerateGap { .. }
    ));
    let (z, raw, clamped, warn) = intensity(100.0, 0.0, 0.1, 5, 0.0, false).unwrap();
    assert!(raw > 1.0);
    assert_eq!(z, raw);
    assert!(!clamped);
    assert!(warn);
}

#[test]
fn covariance_imaginary_parts_cancel_pairwise() {
    let series = MultivariateSeries::new(vec![
        vec![0.3, -1.2, 0.7, 2.0, -0.4, 0.9, -1.5, 0.2, 1.0, -0.7, 0.3, -1.6],
        vec![1.1, 0.4, -0.6, -1.3, 0.8, -0.2, 0.5, 1.9, -1.1, 0.6, -0.9, 0.2],
        vec![-0.5, 0.8, 1.4, -0.7, 0.1, -1.8, 0.9, 0.3, 0.7, -1.2, 1.5, -0.4],
    ])
    .unwrap()
    .center();
    let market = build_market(&series, MarketMode::MeanOverDimension).unwrap();
    let f = fit(&series, &market).unwrap();
    let field = PeriodogramField::compute(&DftPanel::compute(&series, &market).unwrap());
    for k in 1..=12 {
        let f0 = field.averaged(k, 5).unwrap();
        let r = shrinkage::covariance_estimate(&field, k, 5, &f0, &f.slopes).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((r[(i, j)] - r[(j, i)].conj()).norm() < 1e-12);
            }
        }
        let total: Complex64 = r.iter().sum();
        assert!(total.im.abs() < 1e-12);
    }
}

#[test]
fn zero_slopes_zero_covariance() {
    let series = MultivariateSeries::new(vec![
        vec![0.3, -1.2, 0.7, 2.0, -0.4, 0.9, -1.5, 0.2],
        vec![1.1, 0.4, -0.6, -1.3, 0.8, -0.2, 0.5, 1.9],
    ])
    .unwrap()
    .center();
    let market = build_market(&series, MarketMode::MeanOverDimension).unwrap();
    let field = PeriodogramField::compute(&DftPanel::compute(&series, &market).unwrap());
    let f0 = field.averaged(2, 3).unwrap();
    let r = shrinkage::covariance_estimate(&field, 2, 3, &f0, &[0.0, 0.0]).unwrap();
    assert!(r.iter().all(|z| z.norm() == 0.0));
}

#[test]
fn degenerate_window_gives_zero_moments() {
    let series = MultivariateSeries::new(vec![
        vec![0.3, -1.2, 0.7, 2.0, -0.4, 0.9, -1.5, 0.2],
        vec![1.1, 0.4, -0.6, -1.3, 0.8, -0.2, 0.5, 1.9],
    ])
    .unwrap()
    .center();
    let market = build_market(&series, MarketMode::MeanOverDimension).unwrap();
    let field = PeriodogramField::compute(&DftPanel::compute(&series, &market).unwrap());
    let f0 = field.averaged(2, 1).unwrap();
    let p = shrinkage::local_variance(&field, 2, 1, &f0).unwrap();
    assert!(p.iter().all(|&x| x == 0.0));
}

#[test]
fn shrinkage_combined_eigenvalues_contained() {
    // Weyl: eigenvalues of the convex combination sit between the convex
    // combinations of the extreme eigenvalues of the two inputs.
    let series = MultivariateSeries::new(vec![
        vec![0.3, -1.2, 0.7, 2.0, -0.4, 0.9, -1.5, 0.2, 1.0, -0.7, 0.3, -1.6],
        vec![1.1, 0.4, -0.6, -1.3, 0.8, -0.2, 0.5, 1.9, -1.1, 0.6, -0.9, 0.2],
        vec![-0.5, 0.8, 1.4, -0.7, 0.1, -1.8, 0.9, 0.3, 0.7, -1.2, 1.5, -0.4],
    ])
    .unwrap()
    .center();
    let market = build_market(&series, MarketMode::MeanOverDimension).unwrap();
    let f = fit(&series, &market).unwrap();
    let field = PeriodogramField::compute(&DftPanel::compute(&series, &market).unwrap());
    for k in 1..=12 {
        let est = specshrink_core::ddmse(&field, &f, k, 5, true).unwrap();
        let z = est.diagnostics.zeta;
        let ev_t =
            matrix::hermitian_eigenvalues(&matrix::complexify(&est.target)).unwrap();
        let ev_0 = matrix::hermitian_eigenvalues(&panel_block(&est.f0_augmented)).unwrap();
        let ev_c = matrix::hermitian_eigenvalues(&est.combined).unwrap();
        let lo = z * ev_t[0] + (1.0 - z) * ev_0[0];
        let hi = z * ev_t[ev_t.len() - 1] + (1.0 - z) * ev_0[ev_0.len() - 1];
        let scale = hi.abs().max(1.0);
        assert!(ev_c[0] >= lo - 1e-10 * scale);
        assert!(ev_c[ev_c.len() - 1] <= hi + 1e-10 * scale);
    }
}

#[test]
fn ddsse_never_worsens_conditioning() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..100 {
        let p = rng.gen_range(2..6);
        let m = random_psd(p, &mut rng, 1e-3);
        let cond_before = matrix::condition_number(&m).unwrap();
        let p_total = rng.gen_range(1e-3..10.0);
        let span = 2 * rng.gen_range(1..12) + 1;
        let id = ddsse(&m, p_total, span);
        let cond_after = matrix::condition_number(&id.combined).unwrap();
        assert!(
            cond_after <= cond_before * (1.0 + 1e-10),
            "cond went {cond_before} -> {cond_after} at zeta {}",
            id.zeta
        );
    }
}

#[test]
fn ddsse_identity_input_returned_unchanged() {
    let m = matrix::complexify(&DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        2.0, 2.0, 2.0,
    ])));
    let id = ddsse(&m, 5.0, 7);
    assert!(id.gap_floored);
    assert_eq!(id.zeta, 0.0);
    assert_eq!(id.combined, m);
}

#[test]
fn fit_scale_equivariance() {
    let series = MultivariateSeries::new(vec![
        vec![0.3, -1.2, 0.7, 2.0, -0.4, 0.9, -1.5, 0.2],
        vec![1.1, 0.4, -0.6, -1.3, 0.8, -0.2, 0.5, 1.9],
    ])
    .unwrap()
    .center();
    let base = vec![0.4, -0.9, 1.3, 0.2, -0.8, 0.5, -1.0, 0.3];
    for c in [0.5, 2.0, 17.0] {
        let m1 = MarketSeries::external(base.clone(), 8).unwrap();
        let m2 =
            MarketSeries::external(base.iter().map(|x| c * x).collect(), 8).unwrap();
        let f1 = fit(&series, &m1).unwrap();
        let f2 = fit(&series, &m2).unwrap();
        for i in 0..2 {
            assert!((f2.slopes[i] - f1.slopes[i] / c).abs() < 1e-10);
            assert!(
                (f2.idiosyncratic_variances[i] - f1.idiosyncratic_variances[i]).abs() < 1e-12
            );
        }
        // The market spectrum scales by c^2, the slopes by 1/c, so the
        // target is invariant entrywise.
        let t1 = specshrink_core::build_target(&f1, 0.7).unwrap();
        let t2 = specshrink_core::build_target(&f2, 0.7 * c * c).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((t1[(i, j)] - t2[(i, j)]).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn target_factorization_recovers_slopes_up_to_sign() {
    let f = specshrink_core::FactorFit {
        slopes: vec![0.7, -1.3, 2.1],
        idiosyncratic_variances: vec![0.2, 0.4, 0.1],
        market_mode: MarketMode::MeanOverDimension,
    };
    let f00 = 0.9;
    let t = specshrink_core::build_target(&f, f00).unwrap();
    // Reconstruct |b_i| from off-diagonal products:
    // |b_0| = sqrt(t01 * t02 / (t12 * f00)).
    let b0 = (t[(0, 1)] * t[(0, 2)] / (t[(1, 2)] * f00)).sqrt();
    assert!((b0 - 0.7).abs() < 1e-12);
    let min_ev = matrix::hermitian_eigenvalues(&matrix::complexify(&t)).unwrap()[0];
    let min_d = f.idiosyncratic_variances.iter().cloned().fold(f64::MAX, f64::min);
    assert!(min_ev >= min_d - 1e-12);
}
