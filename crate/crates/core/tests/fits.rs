use std::f64::consts::PI;

use proptest::prelude::*;
use sspe_core::cavity::{critical_photon_number, half_splitting, linear_steady_photons};
use sspe_core::fit::{
    ac_stark_reconstruct, backaction_forward, exp_decay_fit, fit_backaction, fit_kerr_calibration, fit_ramsey,
    intrinsic_relaxation, kerr_steady_state, ramsey_forward, BackactionModel, KerrInit, RamseyInit, RamseyModel,
    Spectrum,
};
use sspe_core::synth::{
    gen_backaction_sequence, gen_kerr_calibration, gen_ramsey_dataset, gen_spectroscopy, NoiseSpec,
};
use sspe_core::{
    complex_rate, propagate_closed_form, propagate_ode, DeviceParams, DriveSegment, PulseSchedule, QubitState,
};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

// ---------------------------------------------------------------- Ramsey

const FRINGE: f64 = 2.0 * PI * 3.0;
const PHI0: f64 = 0.4;

fn ramsey_times() -> Vec<f64> {
    (0..200).map(|k| 2.0 * k as f64 / 199.0).collect()
}

fn ramsey_model(n0: f64) -> RamseyModel {
    RamseyModel::from_device(&DeviceParams::reference_q1(), FRINGE, PHI0, n0).unwrap()
}

fn ramsey_init() -> RamseyInit {
    RamseyInit { fringe: FRINGE * 1.02, phi0: PHI0 - 0.1, n0: 1.0 }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len().is_multiple_of(2) {
        0.5 * (v[m - 1] + v[m])
    } else {
        v[m]
    }
}

#[test]
fn ramsey_noiseless_round_trip() {
    for n0 in [0.0, 0.5, 1.0, 2.0] {
        let model = ramsey_model(n0);
        let data = gen_ramsey_dataset(&model, &ramsey_times(), &NoiseSpec::NONE).unwrap();
        let fit = fit_ramsey(&data, &model.fixed(), &ramsey_init()).unwrap();
        let got = fit.get("n0");
        if n0 == 0.0 {
            assert!(got < 0.01, "n0=0 fitted {got}");
        } else {
            assert!((got / n0 - 1.0).abs() < 1e-5, "n0={n0} fitted {got}");
        }
        assert!((fit.get("fringe") / FRINGE - 1.0).abs() < 1e-5);
    }
}

#[test]
fn ramsey_monte_carlo() {
    let times = ramsey_times();
    for n0 in [0.5, 1.0, 2.0] {
        let model = ramsey_model(n0);
        let base = NoiseSpec::gaussian(0.01, 2024);
        let estimates: Vec<f64> = (0..100)
            .map(|k| {
                let data = gen_ramsey_dataset(&model, &times, &base.split(k)).unwrap();
                fit_ramsey(&data, &model.fixed(), &ramsey_init()).unwrap().get("n0")
            })
            .collect();
        let worst = estimates.iter().map(|e| (e - n0).abs()).fold(0.0, f64::max);
        let bias = median(estimates.clone()) - n0;
        eprintln!("Ramsey n0={n0}: worst |error| {worst:.4}, median bias {bias:+.4}");
        assert!(worst <= 0.1);
        assert!(bias.abs() < 0.02);
    }
}

#[test]
fn ramsey_limits() {
    let m = ramsey_model(1.3);
    assert!((ramsey_forward(&m, 0.0) - 0.5 * (1.0 - PHI0.sin())).abs() < 1e-15);
    assert!((ramsey_forward(&m, 2000.0) - 0.5).abs() < 1e-12);
    let bare = ramsey_model(0.0);
    for k in 0..50 {
        let t = 0.037 * k as f64;
        let expected = 0.5 * (1.0 - (-bare.gamma2 * t).exp() * (PHI0 - FRINGE * t).sin());
        assert!((ramsey_forward(&bare, t) - expected).abs() < 1e-14);
    }
}

#[test]
fn ramsey_rejects_short_records() {
    let model = ramsey_model(1.0);
    let few: Vec<f64> = (0..9).map(|k| 0.1 * k as f64).collect();
    let data = gen_ramsey_dataset(&model, &few, &NoiseSpec::NONE).unwrap();
    assert!(fit_ramsey(&data, &model.fixed(), &ramsey_init()).is_err());
    let short: Vec<f64> = (0..50).map(|k| 0.001 * k as f64).collect();
    let data = gen_ramsey_dataset(&model, &short, &NoiseSpec::NONE).unwrap();
    assert!(fit_ramsey(&data, &model.fixed(), &ramsey_init()).is_err());
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn ramsey_signal_is_a_probability(
        gamma2 in 0.0f64..1.0, fringe in -100.0f64..100.0, chi in -30.0f64..30.0,
        kappa in 0.5f64..60.0, phi0 in -7.0f64..7.0, n0 in 0.0f64..50.0, t in 0.0f64..20.0,
    ) {
        let m = RamseyModel { gamma2, fringe, chi, kappa, phi0, n0 };
        let s = ramsey_forward(&m, t);
        prop_assert!((0.0..=1.0).contains(&s), "S = {}", s);
    }
}

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn ramsey_fit_recovers_random_photon_numbers(n0 in 0.05f64..3.0, fringe_mhz in 1.0f64..6.0, phi0 in -1.0f64..1.0) {
        let model = RamseyModel::from_device(&DeviceParams::reference_q1(), 2.0 * PI * fringe_mhz, phi0, n0).unwrap();
        let data = gen_ramsey_dataset(&model, &ramsey_times(), &NoiseSpec::NONE).unwrap();
        let init = RamseyInit { fringe: model.fringe * 1.01, phi0: phi0 + 0.05, n0: 1.0 };
        let fit = fit_ramsey(&data, &model.fixed(), &init).unwrap();
        prop_assert!((fit.get("n0") / n0 - 1.0).abs() < 1e-5, "n0 {} fitted {}", n0, fit.get("n0"));
    }
}

// ------------------------------------------------------------ backaction

#[test]
fn backaction_identities() {
    let m = BackactionModel { gamma_out: 0.07, gamma_back: 0.01, p0: 1.0 };
    assert!((m.steady().unwrap() - 0.125).abs() < 1e-15);
    assert!((m.ratio() - 0.92).abs() < 1e-15);
    assert_eq!(backaction_forward(&m, 1), 1.0);
    assert!((backaction_forward(&m, 100_000) - 0.125).abs() < 1e-12);
    for m in [
        BackactionModel { gamma_out: 0.0722, gamma_back: 0.005, p0: 0.98 },
        BackactionModel { gamma_out: 0.0005, gamma_back: 0.08, p0: 1.0 },
    ] {
        let p_inf = m.gamma_back / (m.gamma_out + m.gamma_back);
        assert!((m.steady().unwrap() - p_inf).abs() < 1e-12);
        assert!((backaction_forward(&m, 5000) - p_inf).abs() < 1e-12);
    }
    let still = BackactionModel { gamma_out: 0.0, gamma_back: 0.0, p0: 0.7 };
    assert_eq!(backaction_forward(&still, 40), 0.7);
}

#[test]
fn intrinsic_relaxation_estimate() {
    let p = intrinsic_relaxation(1.0, 26.51);
    assert!((p - 0.0370).abs() < 1e-4, "{p}");
    assert!((p - (1.0 - (-1.0f64 / 26.51).exp())).abs() < 1e-15);
}

#[test]
fn backaction_noiseless_round_trip() {
    for model in [
        BackactionModel { gamma_out: 0.0722, gamma_back: 0.005, p0: 1.0 },
        BackactionModel { gamma_out: 0.0005, gamma_back: 0.08, p0: 1.0 },
        BackactionModel { gamma_out: 0.02, gamma_back: 0.03, p0: 0.9 },
    ] {
        let data = gen_backaction_sequence(&model, 200, 2, &NoiseSpec::NONE).unwrap();
        let fit = fit_backaction(&data).unwrap();
        assert!((fit.get("gamma_out") / model.gamma_out - 1.0).abs() < 1e-5, "{model:?} {:?}", fit.values);
        assert!((fit.get("gamma_back") / model.gamma_back - 1.0).abs() < 1e-5, "{model:?} {:?}", fit.values);
        assert!((fit.get("p0") - model.p0).abs() < 1e-5);
    }
}

#[test]
fn backaction_constant_sequence() {
    let data: Vec<(u32, f64)> = (1..=60).map(|m| (m, 0.5)).collect();
    let fit = fit_backaction(&data).unwrap();
    assert!((fit.get("steady") - 0.5).abs() < 1e-6);
    assert!(fit.get("c").abs() < 1e-6);
    assert!((fit.get("gamma_out") - fit.get("gamma_back")).abs() < 1e-6);
}

#[test]
fn backaction_binomial_trials() {
    let cases = [
        (BackactionModel { gamma_out: 0.0722, gamma_back: 0.005, p0: 1.0 }, 0.005),
        (BackactionModel { gamma_out: 0.0005, gamma_back: 0.08, p0: 1.0 }, 0.0005),
    ];
    for (case, (model, tol)) in cases.iter().enumerate() {
        let base = NoiseSpec::binomial(4000, 77 + case as u64);
        let mut worst: f64 = 0.0;
        for k in 0..40 {
            let data = gen_backaction_sequence(model, 200, 2, &base.split(k)).unwrap();
            let fit = fit_backaction(&data).unwrap();
            worst = worst.max((fit.get("gamma_out") - model.gamma_out).abs());
        }
        eprintln!("backaction gamma_out={}: worst error {worst:.2e} (tolerance {tol})", model.gamma_out);
        assert!(worst <= *tol);
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn backaction_relaxes_geometrically(go in 0.0f64..0.5, gb in 0.0f64..0.45, p0 in 0.0f64..=1.0, m in 1u32..400) {
        prop_assume!(go + gb > 1e-6);
        let model = BackactionModel { gamma_out: go, gamma_back: gb, p0 };
        let p_inf = model.steady().unwrap();
        let a = backaction_forward(&model, m) - p_inf;
        let b = backaction_forward(&model, m + 1) - p_inf;
        prop_assert!(b.abs() <= a.abs() + 1e-15);
        prop_assert!((b - a * model.ratio()).abs() < 1e-12);
    }

    #[test]
    fn backaction_fit_recovers_random_rates(go in 0.005f64..0.2, gb in 0.005f64..0.2, p0 in 0.6f64..1.0) {
        let model = BackactionModel { gamma_out: go, gamma_back: gb, p0 };
        let data = gen_backaction_sequence(&model, 300, 1, &NoiseSpec::NONE).unwrap();
        let fit = fit_backaction(&data).unwrap();
        prop_assert!((fit.get("gamma_out") / go - 1.0).abs() < 1e-5, "{:?}", fit.values);
        prop_assert!((fit.get("gamma_back") / gb - 1.0).abs() < 1e-5, "{:?}", fit.values);
    }
}

// ------------------------------------------------------------------ Kerr

const KERR_MHZ: f64 = -0.011;

/// Drive (rad/ns) whose linear response would hold `n` photons.
fn drive_for_linear(p: &DeviceParams, j: QubitState, n: f64) -> f64 {
    let c = complex_rate(p, j).unwrap().value();
    (n * c.norm_sqr() / 4.0).sqrt()
}

#[test]
fn cubic_matches_linear_limit() {
    let p = DeviceParams::reference_q1();
    for j in QubitState::ALL {
        let rate = complex_rate(&p, j).unwrap();
        for eps in [0.0, 0.003, 0.02, 0.1] {
            let n = kerr_steady_state(&p, j, eps).unwrap();
            let lin = linear_steady_photons(rate, eps);
            assert!((n - lin).abs() <= 1e-12 * lin.max(1e-300));
        }
    }
}

#[test]
fn cubic_matches_long_ode_run() {
    let p = DeviceParams::reference_q1().with_kerr(KERR_MHZ);
    let n_crit = critical_photon_number(&p).unwrap();
    assert!((n_crit - 32.5).abs() < 0.05);
    for j in QubitState::ALL {
        for frac in [0.1, 0.4, 0.8] {
            let target = frac * n_crit;
            // find the drive that holds `target` photons on the low branch
            let (mut lo, mut hi) = (0.0, 1.0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if kerr_steady_state(&p, j, mid).unwrap() < target {
                    lo = mid
                } else {
                    hi = mid
                }
            }
            let eps = 0.5 * (lo + hi);
            let n = kerr_steady_state(&p, j, eps).unwrap();
            let s = PulseSchedule::custom(vec![DriveSegment::new(eps, 0.0, 5000.0).unwrap()]).unwrap();
            let tr = propagate_ode(&p, j, &s, 0.1).unwrap();
            let rel = (tr.final_photons() / n - 1.0).abs();
            assert!(rel < 1e-4, "j={j} n={n} ode={} rel={rel:e}", tr.final_photons());
        }
    }
}

fn calibration_voltages() -> Vec<f64> {
    (1..=24).map(|k| k as f64 / 24.0).collect()
}

#[test]
fn kerr_calibration_round_trip() {
    let p = DeviceParams::reference_q1().with_kerr(KERR_MHZ);
    let j = QubitState::Ground;
    // full scale holds 0.8 n_crit in the linear model
    let a = drive_for_linear(&p, j, 0.8 * critical_photon_number(&p).unwrap());
    let data = gen_kerr_calibration(&p, j, a, &calibration_voltages(), &NoiseSpec::NONE).unwrap();
    let fit = fit_kerr_calibration(&data, &p, j, &KerrInit::default()).unwrap();
    assert!((fit.get("kerr_khz") + 11.0).abs() < 1.0, "{:?}", fit.values);
    assert!((fit.get("kerr_khz") + 11.0).abs() < 1e-4, "{:?}", fit.values);
    assert!((fit.get("volt_to_eps") / a - 1.0).abs() < 1e-5);

    let linear = p.linearized();
    let data = gen_kerr_calibration(&linear, j, a, &calibration_voltages(), &NoiseSpec::NONE).unwrap();
    let fit = fit_kerr_calibration(&data, &linear, j, &KerrInit::default()).unwrap();
    assert!(fit.get("kerr_khz").abs() < 0.1, "{:?}", fit.values);
}

#[test]
fn kerr_deviation_depends_on_state() {
    let p = DeviceParams::reference_q1().with_kerr(KERR_MHZ);
    let a = drive_for_linear(&p, QubitState::Ground, 0.8 * critical_photon_number(&p).unwrap());
    let v = calibration_voltages();
    let d0 = gen_kerr_calibration(&p, QubitState::Ground, a, &v, &NoiseSpec::NONE).unwrap();
    let d1 = gen_kerr_calibration(&p, QubitState::Excited, a, &v, &NoiseSpec::NONE).unwrap();
    // identical linear response, opposite Kerr bending
    let (n0, n1) = (d0.last().unwrap().1, d1.last().unwrap().1);
    assert!((n0 - n1).abs() > 1.0, "n0={n0} n1={n1}");
    assert!((d0[0].1 / d1[0].1 - 1.0).abs() < 0.05);
    for (j, data) in [(QubitState::Ground, &d0), (QubitState::Excited, &d1)] {
        let fit = fit_kerr_calibration(data, &p, j, &KerrInit::default()).unwrap();
        assert!((fit.get("kerr_khz") + 11.0).abs() < 1.0);
    }
}

// ------------------------------------------------------ ac-Stark, decay

fn lorentzian(freqs: &[f64], center: f64, fwhm: f64) -> Vec<f64> {
    freqs.iter().map(|f| 1.0 / (1.0 + ((f - center) / (0.5 * fwhm)).powi(2))).collect()
}

#[test]
fn stark_shift_arithmetic() {
    let h = 0.05;
    let freqs: Vec<f64> = (0..=320).map(|k| -8.0 + h * k as f64).collect();
    // 2χ = −3.861 MHz, so a −3.861 MHz shift is one photon
    let s = Spectrum { delay: 0.0, freqs: freqs.clone(), amplitudes: lorentzian(&freqs, -3.861, 1.0) };
    let n = ac_stark_reconstruct(&[s], -3.861 / 2.0, 0.0).unwrap();
    assert!((n[0].1 - 1.0).abs() < 0.005 * h / 3.861);
    let s = Spectrum { delay: 0.0, freqs: freqs.clone(), amplitudes: lorentzian(&freqs, 0.0, 1.0) };
    assert_eq!(ac_stark_reconstruct(&[s], -1.9, 0.0).unwrap()[0].1, 0.0);
}

proptest! {
    #![proptest_config(config(128))]

    #[test]
    fn peak_interpolation_bias_is_small(center in -5.0f64..5.0, h in 0.01f64..0.08) {
        // grid spacing at most 8% of the line width
        let freqs: Vec<f64> = (0..).map(|k| -7.0 + h * k as f64).take_while(|f| *f <= 7.0).collect();
        let s = Spectrum { delay: 0.0, freqs: freqs.clone(), amplitudes: lorentzian(&freqs, center, 1.0) };
        let peak = sspe_core::fit::peak_frequency(&s, 0).unwrap();
        prop_assert!((peak - center).abs() < 0.005 * h, "bias {} at spacing {}", peak - center, h);
    }
}

#[test]
fn spectroscopy_round_trip() {
    let p = DeviceParams::reference_q1();
    let chi = half_splitting(&p).unwrap();
    let grid: Vec<f64> = (0..=400).map(|k| -30.0 + 0.1 * k as f64).collect();

    let three =
        sspe_core::Trajectory::new(vec![0.0], vec![sspe_core::Complex::new(3f64.sqrt(), 0.0)], QubitState::Ground);
    let s = gen_spectroscopy(&three, chi, 0.0, 1.0, &grid, &NoiseSpec::NONE).unwrap();
    let n = ac_stark_reconstruct(&s.spectra, chi, 0.0).unwrap()[0].1;
    assert!((2.97..=3.03).contains(&n), "{n}");

    let s = PulseSchedule::square(DriveSegment::new(0.025, 0.0, 900.0).unwrap(), 300.0).unwrap();
    let tr = propagate_closed_form(&p, QubitState::Ground, &s, 20.0).unwrap();
    let spec = gen_spectroscopy(&tr, chi, 0.0, 1.0, &grid, &NoiseSpec::NONE).unwrap();
    assert!(spec.outside_grid.is_empty());
    let rec = ac_stark_reconstruct(&spec.spectra, chi, 0.0).unwrap();
    let n_max = tr.photon_number.iter().copied().fold(0.0, f64::max);
    for ((t, n), truth) in rec.iter().zip(&tr.photon_number) {
        assert!((n - truth).abs() <= 0.01 * n_max, "t={t} n={n} truth={truth}");
    }
}

#[test]
fn square_decay_fit_is_kappa() {
    let p = DeviceParams::reference_q1();
    let s = PulseSchedule::square(DriveSegment::new(0.025, 0.0, 900.0).unwrap(), 400.0).unwrap();
    let tr = propagate_closed_form(&p, QubitState::Excited, &s, 1.0).unwrap();
    let tail: Vec<(f64, f64)> =
        tr.times.iter().zip(&tr.photon_number).filter(|(t, _)| **t >= 900.0).map(|(t, n)| (*t, *n)).collect();
    let fit = exp_decay_fit(&tail).unwrap();
    assert!((fit.get("rate") / 1.711 - 1.0).abs() < 1e-9);
}
