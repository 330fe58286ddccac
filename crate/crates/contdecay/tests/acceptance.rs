//! End-to-end acceptance checks: each test pins one headline quantitative
//! behavior of the library — decay laws, reference probabilities,
//! interference structure, closed-form/quadrature agreement, discrete
//! eigensystems, semigroup defects, and special-function identities —
//! at fixed tolerances and within a wall-clock budget.

use std::time::Instant;

use contdecay::analysis::{
    detect_regrowth, fit_exponential, fit_power_law, paley_wiener_checks, short_time_classify,
    FitKind, FOUR_CATALAN,
};
use contdecay::continuum::{
    amplitude_doubly_truncated, amplitude_doubly_truncated_closed, semigroup_defect,
    survival_series,
};
use contdecay::discrete::{solve_eigensystem, survival_amplitude_discrete, DiscreteSpectrum};
use contdecay::model::{ContinuumSpec, ModelParams};
use contdecay::specfun::{cosint, cot_sum_partial, sinint};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ABS_TOL: f64 = 1e-10;

fn params_alpha02() -> ModelParams {
    ModelParams::from_alpha(0.2).unwrap()
}

fn params_with_shift() -> ModelParams {
    ModelParams::from_alpha_with_vbar(0.2, 0.0564)
        .unwrap()
        .with_vbar_sq_in_denominator(true)
        .unwrap()
}

fn finish(name: &str, start: Instant, budget_s: f64, detail: &str) {
    let elapsed = start.elapsed().as_secs_f64();
    assert!(
        elapsed < budget_s,
        "{name} exceeded its {budget_s}s budget ({elapsed:.2}s)"
    );
    println!("PASS {name} [{elapsed:.2}s]: {detail}");
}

#[test]
fn full_continuum_decays_exponentially_at_the_golden_rule_rate() {
    let start = Instant::now();
    let series =
        survival_series(ContinuumSpec::Full, 0.0, 1.0, 61, &params_alpha02(), true, ABS_TOL)
            .unwrap();
    let fit = fit_exponential(&series, (0.0, 60.0)).unwrap();
    assert!(
        (fit.parameter - 0.2).abs() <= 1e-6,
        "fitted rate {} is not 0.2 ± 1e-6",
        fit.parameter
    );
    let max_err = series
        .times()
        .iter()
        .zip(series.probabilities())
        .map(|(&t, &p)| (p - (-0.2 * t).exp()).abs())
        .fold(0.0f64, f64::max);
    assert!(max_err < 1e-10, "max pointwise error {max_err} is not < 1e-10");
    finish(
        "full_continuum_decays_exponentially_at_the_golden_rule_rate",
        start,
        1.0,
        &format!("rate = {:.8}, max pointwise error = {max_err:.3e}", fit.parameter),
    );
}

#[test]
fn short_time_decay_is_linear_on_the_full_line_and_quadratic_on_a_band() {
    let start = Instant::now();
    let full =
        survival_series(ContinuumSpec::Full, 0.0, 0.001, 21, &params_alpha02(), true, ABS_TOL)
            .unwrap();
    let linear = short_time_classify(&full).unwrap();
    assert_eq!(linear.fit.kind, FitKind::Linear, "full line must start linearly");
    assert!(
        (linear.fit.parameter - 0.2).abs() <= 1e-3,
        "initial rate {} is not 0.200 ± 1e-3",
        linear.fit.parameter
    );
    assert!(
        (linear.slope_at_zero + 0.2).abs() <= 1e-3,
        "slope at zero {} is not -0.200 ± 1e-3",
        linear.slope_at_zero
    );

    let band = ContinuumSpec::DoublyTruncated { omega_min: -3.0, omega_max: 3.0 };
    let banded =
        survival_series(band, 0.0, 0.001, 21, &params_alpha02(), true, ABS_TOL).unwrap();
    let quadratic = short_time_classify(&banded).unwrap();
    assert_eq!(quadratic.fit.kind, FitKind::Quadratic, "finite band must start quadratically");
    assert!(
        quadratic.slope_at_zero.abs() <= 1e-3,
        "slope at zero {} is not 0 ± 1e-3",
        quadratic.slope_at_zero
    );
    finish(
        "short_time_decay_is_linear_on_the_full_line_and_quadratic_on_a_band",
        start,
        5.0,
        &format!(
            "full slope = {:.6}, band slope = {:.2e}",
            linear.slope_at_zero, quadratic.slope_at_zero
        ),
    );
}

#[test]
fn truncated_tail_follows_an_inverse_square_power_law() {
    let start = Instant::now();
    let spec = ContinuumSpec::LowerTruncated { omega_min: -1.0 };
    let series =
        survival_series(spec, 140.0, 0.4, 101, &params_with_shift(), true, ABS_TOL).unwrap();
    let fit = fit_power_law(&series, (140.0, 180.0)).unwrap();
    assert!(
        (fit.parameter - 2.03).abs() <= 0.15,
        "power-law exponent {} is not 2.03 ± 0.15",
        fit.parameter
    );
    finish(
        "truncated_tail_follows_an_inverse_square_power_law",
        start,
        60.0,
        &format!("exponent = {:.4}", fit.parameter),
    );
}

#[test]
fn truncated_probabilities_match_reference_magnitudes() {
    let start = Instant::now();
    let spec = ContinuumSpec::LowerTruncated { omega_min: -1.0 };
    // A two-point grid hits exactly t = 60 and t = 100 (normalized).
    let series =
        survival_series(spec, 60.0, 40.0, 2, &params_with_shift(), true, ABS_TOL).unwrap();
    let p60 = series.probabilities()[0];
    let p100 = series.probabilities()[1];
    let factor60 = (p60 / 1e-6).max(1e-6 / p60);
    let factor100 = (p100 / 1.2e-7).max(1.2e-7 / p100);
    assert!(factor60 <= 3.0, "p(60) = {p60:.4e} is off 1e-6 by factor {factor60:.2}");
    assert!(factor100 <= 2.0, "p(100) = {p100:.4e} is off 1.2e-7 by factor {factor100:.2}");
    finish(
        "truncated_probabilities_match_reference_magnitudes",
        start,
        60.0,
        &format!("p(60) = {p60:.4e} (x{factor60:.2}), p(100) = {p100:.4e} (x{factor100:.2})"),
    );
}

#[test]
fn regrowth_minima_and_interference_peak_count() {
    let start = Instant::now();
    // Shallow cutoff: the probability turns back up shortly after t = 20
    // and again shortly after t = 50, so each regrowth minimum sits a few
    // time units past those onsets — inside (20, 32] and (50, 62].
    let shallow = ContinuumSpec::LowerTruncated { omega_min: -0.2 };
    let series =
        survival_series(shallow, 0.0, 1.0, 80, &params_with_shift(), true, ABS_TOL).unwrap();
    let events = detect_regrowth(&series);
    assert_eq!(events.len(), 2, "expected exactly two regrowth events, got {}", events.len());
    assert!(
        events[0].t_min > 20.0 && events[0].t_min <= 32.0,
        "first minimum at t = {} is not in (20, 32]",
        events[0].t_min
    );
    assert!(
        events[1].t_min > 50.0 && events[1].t_min <= 62.0,
        "second minimum at t = {} is not in (50, 62]",
        events[1].t_min
    );

    // Deep cutoff, fine grid on [40, 60]: exactly three interference peaks.
    let deep = ContinuumSpec::LowerTruncated { omega_min: -1.0 };
    let fine =
        survival_series(deep, 40.0, 0.2, 101, &params_with_shift(), true, ABS_TOL).unwrap();
    let p = fine.probabilities();
    let peaks: Vec<f64> = (1..p.len() - 1)
        .filter(|&i| p[i] > p[i - 1] && p[i] > p[i + 1])
        .map(|i| fine.times()[i])
        .collect();
    assert_eq!(peaks.len(), 3, "expected exactly three peaks in [40, 60], got {peaks:?}");
    finish(
        "regrowth_minima_and_interference_peak_count",
        start,
        30.0,
        &format!(
            "minima at t = {:.1}, {:.1}; peaks at {:?}",
            events[0].t_min, events[1].t_min, peaks
        ),
    );
}

#[test]
fn band_limited_decay_rate_matches_the_full_line_even_deep_into_the_decay() {
    let start = Instant::now();
    let band = ContinuumSpec::DoublyTruncated { omega_min: -3.0, omega_max: 3.0 };
    let early = survival_series(band, 0.0, 1.0, 31, &params_alpha02(), true, ABS_TOL).unwrap();
    let early_fit = fit_exponential(&early, (5.0, 30.0)).unwrap();
    assert!(
        (early_fit.parameter - 0.2).abs() <= 0.005,
        "early-window rate {} is not 0.200 ± 0.005",
        early_fit.parameter
    );

    let deep = survival_series(band, 55.0, 0.2, 201, &params_alpha02(), true, ABS_TOL).unwrap();
    let deep_fit = fit_exponential(&deep, (55.0, 95.0)).unwrap();
    assert!(
        (deep_fit.parameter - 0.19).abs() <= 0.02,
        "deep-window rate {} is not 0.19 ± 0.02",
        deep_fit.parameter
    );
    finish(
        "band_limited_decay_rate_matches_the_full_line_even_deep_into_the_decay",
        start,
        60.0,
        &format!("early rate = {:.5}, deep rate = {:.5}", early_fit.parameter, deep_fit.parameter),
    );
}

#[test]
fn closed_form_matches_quadrature_for_symmetric_bands() {
    let start = Instant::now();
    let params = params_alpha02();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut max_diff = 0.0f64;
    for i in 0..50 {
        let t = rng.random_range(0.0..100.0);
        let w = if i % 2 == 0 { 1.0 } else { 3.0 };
        let closed = amplitude_doubly_truncated_closed(t, w, &params).unwrap();
        let quad = amplitude_doubly_truncated(t, -w, w, &params, ABS_TOL).unwrap();
        let diff = (closed - quad).norm();
        assert!(diff <= 1e-6, "closed vs quadrature differ by {diff:.3e} at t = {t}, W = {w}");
        max_diff = max_diff.max(diff);
    }
    finish(
        "closed_form_matches_quadrature_for_symmetric_bands",
        start,
        30.0,
        &format!("max |closed - quadrature| = {max_diff:.3e} over 50 points"),
    );
}

/// Eigenvalues and initial-state weights of the arrowhead Hamiltonian via
/// a dense symmetric eigensolver, sorted ascending — the independent route
/// for the ladder solution.
fn dense_ladder_pairs(m: u32, epsilon: f64, vbar: f64) -> Vec<(f64, f64)> {
    let levels = 2 * m as usize + 1;
    let dim = levels + 1;
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for k in 0..levels {
        h[(k + 1, k + 1)] = (k as i64 - m as i64) as f64 * epsilon;
        h[(0, k + 1)] = vbar;
        h[(k + 1, 0)] = vbar;
    }
    let se = h.symmetric_eigen();
    let mut pairs: Vec<(f64, f64)> = (0..dim)
        .map(|j| (se.eigenvalues[j], se.eigenvectors.column(j)[0].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs
}

#[test]
fn discrete_ladder_matches_a_dense_eigensolver_and_conserves_weight() {
    let start = Instant::now();
    let (epsilon, vbar) = (0.1, 0.0564);
    for m in [5u32, 12, 50] {
        let ladder = DiscreteSpectrum::new(m, epsilon, vbar).unwrap();
        let eig = solve_eigensystem(&ladder).unwrap();
        let dense = dense_ladder_pairs(m, epsilon, vbar);
        assert_eq!(eig.omega_primes().len(), dense.len());
        for (j, &(omega, weight)) in dense.iter().enumerate() {
            assert!(
                (eig.omega_primes()[j] - omega).abs() <= 1e-10,
                "m = {m}: eigenvalue {j} differs from dense solver"
            );
            assert!(
                (eig.weights()[j] - weight).abs() <= 1e-10,
                "m = {m}: weight {j} differs from dense solver"
            );
        }
        let total: f64 = eig.weights().iter().sum();
        assert!((total - 1.0).abs() <= 1e-10, "m = {m}: weights sum to {total}");
    }

    // The single-level ladder is an exact two-state oscillation.
    let two_level = solve_eigensystem(&DiscreteSpectrum::new(0, epsilon, vbar).unwrap()).unwrap();
    for &t in &[0.0, 1.0, 5.0, 20.0] {
        let a = survival_amplitude_discrete(t, &two_level);
        let expected = Complex64::new((vbar * t).cos(), 0.0);
        assert!(
            (a - expected).norm() <= 1e-10,
            "two-state amplitude at t = {t} differs from cos"
        );
    }
    finish(
        "discrete_ladder_matches_a_dense_eigensolver_and_conserves_weight",
        start,
        10.0,
        "m = 5, 12, 50 vs dense solver; weight sums = 1; two-state cosine",
    );
}

#[test]
fn semigroup_property_holds_on_the_full_line_and_fails_under_truncation() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xdefec7);
    let mut max_full = 0.0f64;
    for _ in 0..10 {
        let t = rng.random_range(0.1..20.0);
        let t_prime = rng.random_range(0.1..20.0);
        let d = semigroup_defect(t, t_prime, ContinuumSpec::Full, &params_with_shift(), ABS_TOL)
            .unwrap();
        assert!(d < 1e-12, "full-line defect {d:.3e} at ({t:.2}, {t_prime:.2})");
        max_full = max_full.max(d);
    }
    let spec = ContinuumSpec::LowerTruncated { omega_min: -0.2 };
    let truncated = semigroup_defect(5.0, 5.0, spec, &params_alpha02(), ABS_TOL).unwrap();
    assert!(truncated > 1e-6, "truncated defect {truncated:.3e} should exceed 1e-6");
    finish(
        "semigroup_property_holds_on_the_full_line_and_fails_under_truncation",
        start,
        10.0,
        &format!("max full-line defect = {max_full:.2e}, truncated defect = {truncated:.3}"),
    );
}

#[test]
fn special_function_identities_and_probability_bounds_hold() {
    let start = Instant::now();

    // The slowly converging level sum loses one decade of error per decade
    // of terms.
    let exact = std::f64::consts::PI; // π·cot(π/4)
    let err = |k: u32| (cot_sum_partial(0.25, k).unwrap() - exact).abs();
    let errs = [err(100), err(1_000), err(10_000)];
    for pair in errs.windows(2) {
        let ratio = pair[0] / pair[1];
        assert!(
            (8.0..=12.0).contains(&ratio),
            "convergence ratio {ratio:.2} outside [8, 12]"
        );
    }

    // Derivative identities of the sine/cosine integrals.
    let h = 1e-5;
    let mut max_deriv_err = 0.0f64;
    for z in [
        Complex64::new(2.0, 0.3),
        Complex64::new(7.0, 1.0),
        Complex64::new(20.0, 2.0),
    ] {
        let step = Complex64::new(h, 0.0);
        let dsi = (sinint(z + step) - sinint(z - step)) / (2.0 * h);
        let dci = (cosint(z + step).unwrap() - cosint(z - step).unwrap()) / (2.0 * h);
        max_deriv_err = max_deriv_err.max((dsi - z.sin() / z).norm());
        max_deriv_err = max_deriv_err.max((dci - z.cos() / z).norm());
    }
    assert!(max_deriv_err <= 1e-6, "derivative identity error {max_deriv_err:.3e}");

    // The log-weight integral equals four times Catalan's constant.
    let report = paley_wiener_checks();
    assert!(
        (report.catalan_measured - FOUR_CATALAN).abs() <= 1e-4,
        "catalan integral {} vs {}",
        report.catalan_measured,
        FOUR_CATALAN
    );

    // A symmetric band gives a purely real amplitude.
    let params = params_alpha02();
    let mut max_imag = 0.0f64;
    for &t in &[1.0, 5.0, 17.3] {
        let a = amplitude_doubly_truncated(t, -3.0, 3.0, &params, ABS_TOL).unwrap();
        max_imag = max_imag.max(a.im.abs());
    }
    assert!(max_imag <= ABS_TOL, "symmetric-band imaginary part {max_imag:.3e}");

    // Probabilities stay inside [0, 1] across supports.
    let mut extremes = (f64::MAX, f64::MIN);
    for (spec, params) in [
        (ContinuumSpec::Full, params_alpha02()),
        (ContinuumSpec::LowerTruncated { omega_min: -1.0 }, params_with_shift()),
        (ContinuumSpec::DoublyTruncated { omega_min: -3.0, omega_max: 3.0 }, params_alpha02()),
    ] {
        let s = survival_series(spec, 0.0, 2.0, 31, &params, true, ABS_TOL).unwrap();
        for &p in s.probabilities() {
            extremes.0 = extremes.0.min(p);
            extremes.1 = extremes.1.max(p);
        }
    }
    assert!(extremes.0 >= 0.0, "negative probability {}", extremes.0);
    assert!(extremes.1 <= 1.0 + 1e-12, "probability above one: {}", extremes.1);

    finish(
        "special_function_identities_and_probability_bounds_hold",
        start,
        30.0,
        &format!(
            "deriv err = {max_deriv_err:.2e}, catalan err = {:.2e}, max imag = {max_imag:.2e}, \
             p range = [{:.2e}, {}]",
            (report.catalan_measured - FOUR_CATALAN).abs(),
            extremes.0,
            extremes.1
        ),
    );
}

#[test]
fn narrow_band_keeps_beating_against_its_edges_far_into_the_decay() {
    // A ±1 band between t = 55 and 95: the probability is a slowly fading
    // comb of interference peaks — many maxima, with peak heights varying
    // gently (no exponential collapse of the envelope).
    let start = Instant::now();
    let band = ContinuumSpec::DoublyTruncated { omega_min: -1.0, omega_max: 1.0 };
    let series = survival_series(band, 55.0, 0.2, 201, &params_alpha02(), true, ABS_TOL).unwrap();
    let p = series.probabilities();
    let peaks: Vec<(f64, f64)> = (1..p.len() - 1)
        .filter(|&i| p[i] > p[i - 1] && p[i] > p[i + 1])
        .map(|i| (series.times()[i], p[i]))
        .collect();
    assert!(peaks.len() >= 5, "expected at least five peaks, found {}", peaks.len());
    let last_peak_t = peaks.last().unwrap().0;
    assert!(last_peak_t > 88.0, "beating dies out early: last peak at t = {last_peak_t}");
    // Tallest beats at the start vs the end of the window stay within two
    // decades (secondary ripples near cancellation nulls are far smaller
    // and are not the envelope).
    let tallest = |lo: f64, hi: f64| {
        peaks
            .iter()
            .filter(|(t, _)| (lo..=hi).contains(t))
            .map(|&(_, height)| height)
            .fold(0.0f64, f64::max)
    };
    let early = tallest(55.0, 68.0);
    let late = tallest(82.0, 95.0);
    assert!(early > 0.0 && late > 0.0, "peaks missing from the window ends");
    assert!(
        early / late < 100.0,
        "envelope fell by {:.0}x between window ends; it should fade slowly",
        early / late
    );
    finish(
        "narrow_band_keeps_beating_against_its_edges_far_into_the_decay",
        start,
        60.0,
        &format!(
            "{} peaks through t = {last_peak_t:.1}, envelope ratio {:.1}",
            peaks.len(),
            early / late
        ),
    );
}
