use nalgebra::DMatrix;
use proptest::prelude::*;

use qpm_core::dispersion::{
    phase_mismatch_for_order, CrystalSpec, Dispersion, PolarizationConfig,
};
use qpm_core::fitting::{
    fit_crystal, CurveGeometry, FitOptions, FitParameter, FitProblem, FreeParameter, ModelKind, Observation,
};
use qpm_core::scan::{
    qpm_fourier_coefficient, sample_count, sample_counts, simulate_sfg_scan_with, simulate_shg_scan, DetectorModel,
    InputRate, ScanAxis, ScanConfig, ShgProcess,
};
use qpm_core::schmidt::schmidt_decompose;
use qpm_core::spectrum::{phase_matching_at, Complex64, JointSpectrum, PhaseMatchSpec, SpectralMap};
use qpm_core::units::omega_from_nm;
use qpm_core::Execution;

fn ktp() -> Dispersion {
    Dispersion::from_json_str(include_str!("../../../data/sellmeier/ktp.json")).unwrap()
}

fn design() -> CrystalSpec {
    CrystalSpec::new(46.1, 30.0, 0.5, 1, PolarizationConfig::TYPE_II, ktp()).unwrap()
}

fn jsa_from(n: usize, m: usize, cells: &[(f64, f64)]) -> JointSpectrum {
    let axis = |k: usize| (0..k).map(|i| i as f64 * 1e10).collect::<Vec<_>>();
    let values = DMatrix::from_fn(n, m, |i, j| {
        let (re, im) = cells[i * m + j];
        Complex64::new(re, im)
    });
    let map = SpectralMap {
        signal_center: 1.2e15,
        idler_center: 1.19e15,
        signal_detuning: axis(n),
        idler_detuning: axis(m),
        values,
    };
    JointSpectrum::new(map, "random").unwrap()
}

fn random_jsa() -> impl Strategy<Value = JointSpectrum> {
    (2usize..10, 2usize..10).prop_flat_map(|(n, m)| {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * m)
            .prop_filter("nonzero", |c| c.iter().any(|&(a, b)| a.abs() + b.abs() > 1e-3))
            .prop_map(move |cells| jsa_from(n, m, &cells))
    })
}

proptest! {
    #[test]
    fn schmidt_number_times_purity_is_one(js in random_jsa()) {
        let r = schmidt_decompose(&js).unwrap();
        prop_assert!((r.schmidt_number * r.purity - 1.0).abs() < 1e-10);
        let modes = js.amplitudes().nrows().min(js.amplitudes().ncols()) as f64;
        prop_assert!(r.purity <= 1.0 + 1e-12 && r.purity >= 1.0 / modes - 1e-12);
        let norm: f64 = r.coefficients.iter().map(|l| l * l).sum();
        prop_assert!((norm - 1.0).abs() < 1e-10);
        prop_assert!(r.coefficients.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn transpose_keeps_schmidt_spectrum(js in random_jsa()) {
        let a = schmidt_decompose(&js).unwrap();
        let b = schmidt_decompose(&js.transposed()).unwrap();
        prop_assert_eq!(a.coefficients.len(), b.coefficients.len());
        for (x, y) in a.coefficients.iter().zip(&b.coefficients) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn purity_ignores_phase_and_scale(js in random_jsa(), phase in 0.0f64..6.3, scale in 1e-3f64..1e3) {
        let p = schmidt_decompose(&js).unwrap().purity;
        let q = schmidt_decompose(&js.scaled(Complex64::from_polar(scale, phase))).unwrap().purity;
        prop_assert!((p - q).abs() < 1e-10);
    }

    #[test]
    fn fourier_coefficient_symmetric_in_duty(m in 1u32..20, d in 0.001f64..0.999) {
        let a = qpm_fourier_coefficient(m, d).unwrap();
        let b = qpm_fourier_coefficient(m, 1.0 - d).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn opposite_grating_orders(l1 in 1500.0f64..1660.0, l2 in 1500.0f64..1660.0, m in 1i64..9) {
        let c = design();
        let (w1, w2) = (omega_from_nm(l1), omega_from_nm(l2));
        let d = phase_mismatch_for_order(w1, w2, &c, m).unwrap() - phase_mismatch_for_order(w1, w2, &c, -m).unwrap();
        let expect = -4.0 * std::f64::consts::PI * m as f64 / 46.1e-6;
        prop_assert!((d - expect).abs() < 1e-9 * expect.abs());
    }

    #[test]
    fn keyed_sampling_is_independent_of_subset(seed in any::<u64>(), start in 0usize..50, len in 1usize..50) {
        let rates: Vec<f64> = (0..100).map(|k| 5.0 + k as f64).collect();
        let all = sample_counts(&rates, 1.0, seed, Execution::Serial);
        for k in start..(start + len).min(100) {
            prop_assert_eq!(all[k], sample_count(rates[k], seed, k as u64));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, ..ProptestConfig::default() })]

    #[test]
    fn expected_rates_follow_rate_law(
        l0 in 1560.0f64..1600.0, cal in 1.0f64..1e7, n1 in 0.0f64..3.0, n2 in 0.0f64..3.0, dark in 0.0f64..1e3,
    ) {
        let c = design();
        let pm = PhaseMatchSpec::for_crystal(&c);
        let axis = ScanAxis::centered(l0, 0.1, 7);
        let config = ScanConfig {
            axis1: axis,
            axis2: Some(axis),
            input_rate_1: InputRate::Constant(n1),
            input_rate_2: InputRate::Constant(n2),
            calibration: cal,
            sample: false,
        };
        let det = DetectorModel { dark_count_rate: dark, ..Default::default() };
        let scan = simulate_sfg_scan_with(&config, &c, &pm, &det, None, Execution::Serial).unwrap();
        let pts = axis.points();
        for (i, &a) in pts.iter().enumerate() {
            for (j, &b) in pts.iter().enumerate() {
                let phi2 = phase_matching_at(&c, &pm, omega_from_nm(a), omega_from_nm(b)).unwrap().norm_sqr();
                let expect = cal * n1 * n2 * phi2 + dark;
                let got = scan.expected[i * pts.len() + j];
                prop_assert!((got - expect).abs() <= 1e-12 * expect.abs().max(1e-300));
            }
        }
    }

    #[test]
    fn shg_total_is_sum_of_components(a1 in 0.0f64..2.0, a2 in 0.0f64..2.0, dark in 0.0f64..100.0) {
        let d = ktp();
        let processes = vec![
            ShgProcess {
                label: "a".into(),
                crystal: CrystalSpec::new(46.125, 29.0, 0.47, 1, PolarizationConfig::TYPE_II, d.clone()).unwrap(),
                relative_amplitude: a1,
            },
            ShgProcess {
                label: "b".into(),
                crystal: CrystalSpec::new(46.010, 29.0, 0.47, 2, PolarizationConfig::TYPE_0, d).unwrap(),
                relative_amplitude: a2,
            },
        ];
        let config = ScanConfig {
            axis1: ScanAxis { start_nm: 1495.0, stop_nm: 1505.0, step_nm: 0.5 },
            axis2: None,
            sample: false,
            ..Default::default()
        };
        let det = DetectorModel { dark_count_rate: dark, ..Default::default() };
        let scan = simulate_shg_scan(&config, &processes, &det, None).unwrap();
        for k in 0..scan.expected.len() {
            let sum = scan.components[0].expected[k] + scan.components[1].expected[k] + dark;
            prop_assert_eq!(scan.expected[k], sum);
        }
    }
}

fn antidiagonal_observation(truth: &CrystalSpec) -> Observation {
    let wavelength_nm: Vec<f64> = (0..251).map(|k| 1575.0 + 0.04 * k as f64).collect();
    let wp = omega_from_nm(790.0);
    let pm = PhaseMatchSpec::for_crystal(truth);
    let intensity = wavelength_nm
        .iter()
        .map(|&l| {
            let ws = omega_from_nm(l);
            phase_matching_at(truth, &pm, ws, wp - ws).unwrap().norm_sqr()
        })
        .collect();
    Observation::Curve { geometry: CurveGeometry::AntiDiagonal { pump_nm: 790.0 }, wavelength_nm, intensity }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 20, ..ProptestConfig::default() })]

    #[test]
    fn noiseless_fit_recovers_generator(period in 45.95f64..46.35, length in 27.5f64..31.5) {
        let truth = design().with_poling_period(period).unwrap().with_length(length).unwrap();
        let problem = FitProblem::new(
            design(),
            ModelKind::UniformSinc,
            vec![antidiagonal_observation(&truth)],
            vec![
                FreeParameter::new(FitParameter::PolingPeriodUm, 45.9, 46.4),
                FreeParameter::new(FitParameter::LengthMm, 27.0, 32.0),
            ],
            FitOptions::default(),
        )
        .unwrap();
        let fit = fit_crystal(&problem).unwrap();
        let p = fit.value(FitParameter::PolingPeriodUm).unwrap();
        let l = fit.value(FitParameter::LengthMm).unwrap();
        prop_assert!((p / period - 1.0).abs() < 1e-4, "period {} vs {}", p, period);
        prop_assert!((l / length - 1.0).abs() < 1e-4, "length {} vs {}", l, length);
    }
}
