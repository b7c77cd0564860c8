use mcmpb_core::competitors::{fit_cmpb, fit_nb};
use mcmpb_core::data::FrequencyData;
use mcmpb_core::fixtures::Fixture;
use mcmpb_core::gof::{aic, chisq_test};
use mcmpb_core::inference::{
    fit_fixed_n, fit_model, fit_profile_n, log_likelihood, model_log_likelihood, FitReport,
    NChoice, Z95,
};
use mcmpb_core::mcmpb::{build_table, sample, McmpbParams};
use mcmpb_core::models::{ModelKind, ModelParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn assert_self_consistent(fit: &FitReport) {
    let k = fit.model.parameter_count();
    assert!((fit.aic - aic(fit.loglik, k).unwrap()).abs() < 1e-9);
    let total: f64 = fit.expected().iter().sum();
    assert!((total - fit.n_obs as f64).abs() < 0.01, "{total}");
    let observed: Vec<f64> = fit.cells.iter().map(|c| c.observed as f64).collect();
    let again = chisq_test(&observed, &fit.expected(), k).unwrap();
    assert_eq!(&again, &fit.gof.chi_square);
    if let (Some(se), Some(ci)) = (&fit.se, &fit.ci95) {
        for i in 0..k {
            assert!((ci[i][0] - (fit.estimates[i] - Z95 * se[i])).abs() < 1e-12);
            assert!((ci[i][1] - (fit.estimates[i] + Z95 * se[i])).abs() < 1e-12);
        }
    }
    let ll = model_log_likelihood(
        &FrequencyData::new(
            fit.cells
                .iter()
                .filter(|c| c.observed > 0)
                .map(|c| (c.value, c.observed))
                .collect(),
            fit.truncated_at_zero,
        )
        .unwrap(),
        &fit.params,
    )
    .unwrap();
    assert!((ll - fit.loglik).abs() < 1e-9 * ll.abs());
}

#[test]
fn likelihood_equations_hold_at_the_optimum() {
    for (fixture, n) in [
        (Fixture::Bacterial, None),
        (Fixture::Saxony, Some(12)),
        (Fixture::Trip, None),
    ] {
        let data = fixture.data();
        let fit = match n {
            Some(n) => fit_fixed_n(&data, n, None).unwrap(),
            None => fit_profile_n(&data, None).unwrap(),
        };
        let score = fit
            .score_residual
            .expect("untruncated fit reports the score");
        assert!(
            score.iter().all(|s| s.abs() < 1e-4),
            "{}: {score:?}",
            fixture.name()
        );
        assert!(fit.converged && !fit.boundary);
        assert_self_consistent(&fit);
    }
}

#[test]
fn fitted_point_is_a_local_maximum() {
    let data = Fixture::Saxony.data();
    let fit = fit_fixed_n(&data, 12, None).unwrap();
    let p = fit.mcmpb().unwrap();
    let best = log_likelihood(&data, &p).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let d: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let norm = d.iter().map(|v| v * v).sum::<f64>().sqrt();
        let q = McmpbParams {
            alpha: p.alpha + 0.05 * d[0] / norm,
            beta: p.beta + 0.05 * d[1] / norm,
            psi: p.psi + 0.05 * d[2] / norm,
            ..p
        };
        assert!(log_likelihood(&data, &q).unwrap() <= best);
    }
}

#[test]
fn reflected_data_give_reflected_estimates() {
    let data = Fixture::Saxony.data();
    let fit = fit_fixed_n(&data, 12, None).unwrap().mcmpb().unwrap();
    let back = fit_fixed_n(&data.reflected(12).unwrap(), 12, None)
        .unwrap()
        .mcmpb()
        .unwrap();
    assert!((back.alpha - fit.beta).abs() < 2e-2);
    assert!((back.beta - fit.alpha).abs() < 2e-2);
    assert!((back.psi + fit.psi).abs() < 2e-2);
}

#[test]
fn saxony_interval_widths() {
    let fit = fit_fixed_n(&Fixture::Saxony.data(), 12, None).unwrap();
    let paper = [1.12 - 0.74, 0.94 - 0.59, 1.04 + 0.28];
    for (ci, want) in fit.ci95.unwrap().iter().zip(paper) {
        let width = ci[1] - ci[0];
        assert!((width - want).abs() <= 0.1 * want, "{width} vs {want}");
    }
}

#[test]
fn cmpb_is_the_constrained_mcmpb_fit() {
    let data = Fixture::Saxony.data();
    let cmpb = fit_cmpb(&data, NChoice::Fixed(12)).unwrap();
    let ModelParams::Cmpb { n, alpha, psi } = cmpb.params else {
        panic!("expected CMPB parameters");
    };
    let as_mcmpb = log_likelihood(&data, &McmpbParams::new(n, alpha, alpha, psi).unwrap()).unwrap();
    assert!((as_mcmpb - cmpb.loglik).abs() < 1e-6);
    let full = fit_fixed_n(&data, 12, None).unwrap();
    assert!(full.loglik >= cmpb.loglik);
    // Neighbouring points on the α = β line are no better.
    for (da, ds) in [(1e-3, 0.0), (-1e-3, 0.0), (0.0, 1e-3), (0.0, -1e-3)] {
        let q = McmpbParams::new(n, alpha + da, alpha + da, psi + ds).unwrap();
        assert!(log_likelihood(&data, &q).unwrap() <= cmpb.loglik + 1e-9);
    }
    assert_self_consistent(&cmpb);
}

#[test]
fn negative_binomial_poisson_limit() {
    let lambda = 3.0f64;
    let freqs: Vec<u64> = (0..25)
        .map(|x| {
            let lp = x as f64 * lambda.ln() - lambda - mcmpb_core::special::ln_factorial(x);
            (lp.exp() * 1e6).round() as u64
        })
        .collect();
    let data = FrequencyData::from_frequencies(0, &freqs, false).unwrap();
    let fit = fit_nb(&data).unwrap();
    let (r, p) = (fit.estimates[0], fit.estimates[1]);
    assert!(r > 100.0, "r = {r}");
    assert!((r * p / (1.0 - p) - lambda).abs() < 1e-2);
}

#[test]
fn competitors_are_self_consistent() {
    for fixture in [Fixture::Trip, Fixture::Linnet] {
        for kind in ModelKind::ALL {
            let fit = fit_model(kind, &fixture.data(), NChoice::Auto).unwrap();
            assert_eq!(fit.model, kind);
            assert!(fit.converged);
            assert_self_consistent(&fit);
        }
    }
}

#[test]
fn zero_truncated_cells_start_at_one() {
    let fit = fit_profile_n(&Fixture::Linnet.data(), None).unwrap();
    assert!(fit.truncated_at_zero);
    assert_eq!(fit.cells.first().unwrap().value, 1);
    assert_eq!(fit.cells.len(), 7);
    assert!(fit.score_residual.is_none());
}

#[test]
fn profile_recovers_n() {
    let truth = McmpbParams::new(15, 0.5, 0.2, 0.5).unwrap();
    let table = build_table(&truth).unwrap();
    let hits = (0..20u64)
        .filter(|&seed| {
            let data =
                FrequencyData::from_observations(&sample(&table, 100_000, seed), false).unwrap();
            fit_profile_n(&data, None).unwrap().n() == Some(15)
        })
        .count();
    assert!(hits >= 18, "{hits} of 20");
}

#[test]
fn profile_reports_every_candidate() {
    let data = Fixture::Bacterial.data();
    let fit = fit_profile_n(&data, Some(19..=24)).unwrap();
    let profile = fit.profile.as_ref().unwrap();
    assert_eq!(
        profile.iter().map(|p| p.n).collect::<Vec<_>>(),
        (19..=24).collect::<Vec<_>>()
    );
    let best = profile
        .iter()
        .map(|p| p.loglik)
        .fold(f64::NEG_INFINITY, f64::max);
    assert_eq!(fit.loglik, best);
}
