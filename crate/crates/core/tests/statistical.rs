//! Monte-Carlo and closed-form checks with fixed seeds.

use crude_core::data::{split, synth_generate, ErrorFamily, SplitSpec, StreamRng, SyntheticConfig};
use crude_core::metrics::{calibration_curve, calibration_score, evaluate, pit_values};
use crude_core::normal;
use crude_core::{
    validate_predictions, CrudeModel, FittedRecalibrator, GaussianMleModel, KuleshovModel, Method,
    Prediction, PredictionSet, Recalibrator,
};
use statrs::distribution::{ContinuousCDF, Normal, StudentsT};

// Families with a finite fourth moment, so the sample variance of 10^6 draws
// concentrates to about +-0.003.
const FAMILIES: [ErrorFamily; 5] = [
    ErrorFamily::Gaussian,
    ErrorFamily::LognormalShifted { s: 0.5 },
    ErrorFamily::LognormalShifted { s: 0.8 },
    ErrorFamily::StudentT { dof: 5.0 },
    ErrorFamily::StudentT { dof: 10.0 },
];

fn unit_rows(z: &[f64]) -> PredictionSet {
    validate_predictions(z.iter().map(|&z| (0.0, 1.0, Some(z)))).unwrap()
}

fn mean_var(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    (mean, v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n)
}

#[test]
fn normal_quantile_agrees_with_statrs() {
    let reference = Normal::standard();
    let tails = (1..=12).map(|k| 10f64.powi(-k));
    let grid = (1..1000).map(|i| i as f64 / 1000.0);
    for p in tails.clone().chain(grid).chain(tails.map(|t| 1.0 - t)) {
        let ours = normal::quantile(p);
        let theirs = reference.inverse_cdf(p);
        // compare in probability space, where the accuracy target is stated
        let gap = (reference.cdf(ours) - reference.cdf(theirs)).abs();
        assert!(gap <= 1e-9, "p={p}: {ours} vs {theirs}");
        assert!(
            (ours - theirs).abs() <= 1e-6 * theirs.abs().max(1.0),
            "p={p}"
        );
    }
}

#[test]
fn sampling_matches_crude_moments() {
    let mut rng = StreamRng::new(17);
    let z: Vec<f64> = (0..250).map(|_| 4.0 * rng.uniform() - 1.0).collect();
    let model = CrudeModel::fit(&unit_rows(&z)).unwrap();
    let pred = Prediction::new(3.0, 2.5);
    let (mean, var) = model.moments(pred);

    let draws: Vec<f64> = (0..1_000_000)
        .map(|_| pred.scale_shift(model.distribution().z_sorted()[rng.below(z.len())]))
        .collect();
    let (m, v) = mean_var(&draws);
    assert!(((m - mean) / mean).abs() < 0.01, "{m} vs {mean}");
    assert!(((v - var) / var).abs() < 0.01, "{v} vs {var}");
}

#[test]
fn families_are_standardized() {
    for family in FAMILIES {
        let mut rng = StreamRng::new(31);
        let z: Vec<f64> = (0..1_000_000).map(|_| family.sample(&mut rng)).collect();
        let (m, v) = mean_var(&z);
        assert!(m.abs() <= 0.005, "{family:?}: mean {m}");
        assert!((v - 1.0).abs() <= 0.01, "{family:?}: variance {v}");
    }
}

#[test]
fn heavy_tailed_t_matches_reference_law() {
    // For dof <= 4 the sample variance converges too slowly for a tight
    // moment check, so compare the whole law instead.
    for dof in [2.5, 3.0, 4.0] {
        let family = ErrorFamily::StudentT { dof };
        let law = StudentsT::new(0.0, 1.0, dof).unwrap();
        let scale = ((dof - 2.0) / dof).sqrt();
        let mut rng = StreamRng::new(21);
        let mut z: Vec<f64> = (0..200_000).map(|_| family.sample(&mut rng)).collect();
        z.sort_by(f64::total_cmp);
        let n = z.len() as f64;
        let ks = z
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let c = law.cdf(x / scale);
                ((i + 1) as f64 / n - c).max(c - i as f64 / n)
            })
            .fold(0.0, f64::max);
        assert!(ks < 1.63 / n.sqrt(), "dof={dof}: {ks}");
    }
}

#[test]
fn lognormal_keeps_positive_skew() {
    for s in [0.5, 0.8, 1.2] {
        let family = ErrorFamily::LognormalShifted { s };
        let mut rng = StreamRng::new(8);
        let z: Vec<f64> = (0..200_000).map(|_| family.sample(&mut rng)).collect();
        let (m, v) = mean_var(&z);
        let skew = z.iter().map(|x| ((x - m) / v.sqrt()).powi(3)).sum::<f64>() / z.len() as f64;
        assert!(skew > 0.5, "s={s}: skew {skew}");
    }
}

#[test]
fn gaussian_mle_on_normal_scores_grid() {
    for l in [50usize, 500, 5000] {
        let z: Vec<f64> = (1..=l)
            .map(|i| normal::quantile(i as f64 / (l + 1) as f64))
            .collect();
        let model = GaussianMleModel::fit(&unit_rows(&z)).unwrap();
        let tol = 3.0 / (l as f64).sqrt();
        assert!(model.shift().abs() <= tol, "L={l}");
        assert!(
            (model.scale() - 1.0).abs() <= tol,
            "L={l}: s={}",
            model.scale()
        );
    }
}

#[test]
fn gaussian_mle_on_iid_normal_scores() {
    let mut rng = StreamRng::new(5);
    let z: Vec<f64> = (0..100_000)
        .map(|_| ErrorFamily::Gaussian.sample(&mut rng))
        .collect();
    let model = GaussianMleModel::fit(&unit_rows(&z)).unwrap();
    assert!(model.shift().abs() <= 0.02);
    assert!((model.scale() - 1.0).abs() <= 0.02);
}

#[test]
fn kuleshov_error_shrinks_like_one_over_l() {
    let mut previous = f64::INFINITY;
    for l in [100usize, 1_000, 10_000] {
        let z: Vec<f64> = (1..=l)
            .map(|i| normal::quantile(i as f64 / (l + 1) as f64))
            .collect();
        let model = KuleshovModel::fit(&unit_rows(&z)).unwrap();
        let pred = Prediction::new(0.0, 1.0);
        let worst = (0..=80)
            .map(|k| 0.1 + k as f64 * 0.01)
            .map(|p| (model.quantile(pred, p).unwrap() - normal::quantile(p)).abs())
            .fold(0.0, f64::max);
        // |p' - p| <= 2/L and the density is >= 0.17 on [0.1, 0.9]
        assert!(worst <= 2.0 / 0.17 / l as f64, "L={l}: {worst}");
        assert!(worst < previous);
        previous = worst;
    }
}

#[test]
fn calibrated_predictor_curve_and_pit() {
    let data = synth_generate(&SyntheticConfig::new(100_000, ErrorFamily::Gaussian, 12)).unwrap();
    let test = data.to_prediction_set().unwrap();
    let identity = FittedRecalibrator::Identity;
    let curve = calibration_curve(&test, |pr, p| identity.extended_quantile(pr, p), 100).unwrap();
    let worst = curve
        .points()
        .map(|(p, p_hat)| (p - p_hat).abs())
        .fold(0.0, f64::max);
    assert!(worst < 0.01, "{worst}");

    let small = test.select(&(0..10_000).collect::<Vec<_>>());
    let pit = pit_values(&small, |pr, y| identity.cdf(pr, y)).unwrap();
    assert!(pit.ks_statistic() < 1.63 / 100.0, "{}", pit.ks_statistic());
}

#[test]
fn self_calibration_within_one_over_l() {
    let mut rng = StreamRng::new(77);
    let rows: Vec<_> = (0..400)
        .map(|_| {
            let mu = rng.uniform() * 10.0;
            let sigma = 0.5 + rng.uniform();
            (
                mu,
                sigma,
                Some(mu + sigma * ErrorFamily::StudentT { dof: 4.0 }.sample(&mut rng)),
            )
        })
        .collect();
    let cal = validate_predictions(rows).unwrap();
    let model = FittedRecalibrator::fit(Method::Crude, &cal).unwrap();
    let curve = calibration_curve(&cal, |pr, p| model.extended_quantile(pr, p), 100).unwrap();
    let bound = 1.0 / cal.len() as f64 + 1e-12;
    for (p, p_hat) in curve.points() {
        assert!((p - p_hat).abs() <= bound, "p={p}: {p_hat}");
    }
}

#[test]
fn identity_on_true_gaussian_scores_low() {
    let cfg = SyntheticConfig::new(10_000, ErrorFamily::Gaussian, 3).hetero(true);
    let test = synth_generate(&cfg).unwrap().to_prediction_set().unwrap();
    let report = evaluate(&FittedRecalibrator::Identity, &test, 100, 3).unwrap();
    assert!(
        report.calibration_rmse < 0.02,
        "{}",
        report.calibration_rmse
    );
}

#[test]
fn overconfident_gaussian_is_repaired_by_crude() {
    let cfg = SyntheticConfig::new(10_000, ErrorFamily::Gaussian, 9)
        .hetero(true)
        .miscal_scale(0.5);
    let set = synth_generate(&cfg).unwrap().to_prediction_set().unwrap();
    let (_, cal, test) = split(&set, &SplitSpec::standard(9), 0).unwrap();
    let none = evaluate(&FittedRecalibrator::Identity, &test, 100, 9).unwrap();
    let crude = evaluate(
        &FittedRecalibrator::fit(Method::Crude, &cal).unwrap(),
        &test,
        100,
        9,
    )
    .unwrap();
    assert!(none.calibration_rmse > 0.1, "{}", none.calibration_rmse);
    assert!(crude.calibration_rmse < 0.03, "{}", crude.calibration_rmse);
}

#[test]
fn evaluation_is_deterministic() {
    let cfg = SyntheticConfig::new(2_000, ErrorFamily::StudentT { dof: 3.0 }, 1).hetero(true);
    let set = synth_generate(&cfg).unwrap().to_prediction_set().unwrap();
    let (_, cal, test) = split(&set, &SplitSpec::standard(1), 2).unwrap();
    for method in Method::ALL {
        let model = FittedRecalibrator::fit(method, &cal).unwrap();
        let a = evaluate(&model, &test, 100, 1).unwrap();
        let b = evaluate(&model, &test, 100, 1).unwrap();
        assert_eq!(a.calibration_rmse.to_bits(), b.calibration_rmse.to_bits());
        assert_eq!(a.sharpness.to_bits(), b.sharpness.to_bits());
    }
}

#[test]
fn kuleshov_variance_matches_sampled_variance() {
    // the recalibrated law is the base Gaussian pushed through R^{-1}; sample
    // it by inverse transform and compare with the quadrature value
    let mut rng = StreamRng::new(4);
    let z: Vec<f64> = (0..500)
        .map(|_| 1.7 * ErrorFamily::LognormalShifted { s: 0.6 }.sample(&mut rng))
        .collect();
    let model = KuleshovModel::fit(&unit_rows(&z)).unwrap();
    let pred = Prediction::new(0.0, 2.0);
    let draws: Vec<f64> = (0..400_000)
        .map(|_| model.quantile(pred, rng.open_uniform()).unwrap())
        .collect();
    let (_, v) = mean_var(&draws);
    let q = model.variance(pred);
    assert!(((v - q) / q).abs() < 0.02, "{v} vs {q}");
}

#[test]
fn calibration_score_is_bounded() {
    let identity = FittedRecalibrator::Identity;
    let cfg = SyntheticConfig::new(1_000, ErrorFamily::Gaussian, 2).miscal_scale(0.01);
    let test = synth_generate(&cfg).unwrap().to_prediction_set().unwrap();
    let curve = calibration_curve(&test, |pr, p| identity.extended_quantile(pr, p), 100).unwrap();
    let score = calibration_score(&curve);
    // nearly a step at p = 1/2: sqrt(sum_j min(p_j, 1 - p_j)^2 / S) ~= 0.29
    assert!(score > 0.27 && score <= 0.5817, "{score}");
}
