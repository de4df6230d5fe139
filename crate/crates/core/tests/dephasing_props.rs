use approx::assert_relative_eq;
use decohere::dephasing::{Beta, DephasingModel, SpectralDensity};
use decohere::gksl::{integrate_time_dependent, DensityMatrix};
use decohere::numcore::OdeSpec;
use decohere::Execution;
use proptest::prelude::*;

fn model(lambda: f64, s: f64, wc: f64, beta: Beta) -> DephasingModel {
    DephasingModel::new(1.0, SpectralDensity::ohmic(lambda, s, wc).unwrap(), beta).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn frequency_and_time_forms_agree(
        lambda in 0.05f64..1.0,
        s in 0.5f64..2.5,
        wc in 0.5f64..5.0,
        beta in 0.1f64..10.0,
        t in 0.1f64..8.0,
    ) {
        let m = model(lambda, s, wc, Beta::finite(beta).unwrap());
        let g = m.dephasing_rate(t).unwrap();
        prop_assert!((g - m.dephasing_rate_time_domain(t).unwrap()).abs() < 1e-7);
        let big = m.decoherence_function(t).unwrap();
        prop_assert!((big - m.decoherence_function_time_domain(t).unwrap()).abs() < 1e-7);
    }

    #[test]
    fn decoherence_nonnegative_and_grows_with_temperature(
        s in 0.5f64..3.0,
        wc in 0.5f64..5.0,
        beta in 0.2f64..5.0,
        t in 0.05f64..10.0,
    ) {
        let cold = model(0.5, s, wc, Beta::finite(2.0 * beta).unwrap()).decoherence_function(t).unwrap();
        let hot = model(0.5, s, wc, Beta::finite(beta).unwrap()).decoherence_function(t).unwrap();
        let vacuum = model(0.5, s, wc, Beta::Infinite).decoherence_function(t).unwrap();
        prop_assert!(vacuum >= 0.0);
        prop_assert!(cold >= vacuum - 1e-9);
        prop_assert!(hot >= cold - 1e-9);
    }

    #[test]
    fn bath_correlation_is_hermitian_in_time(s in 0.5f64..2.0, beta in 0.2f64..5.0, t in 0.1f64..5.0) {
        let m = model(0.3, s, 1.0, Beta::finite(beta).unwrap());
        let plus = m.bath_correlation(t).unwrap();
        let minus = m.bath_correlation(-t).unwrap();
        prop_assert!((plus - minus.conj()).norm() < 1e-10);
    }
}

#[test]
fn integrated_master_equation_reproduces_closed_form() {
    let m = model(0.5, 1.0, 1.0, Beta::finite(2.0).unwrap());
    let rho0 = DensityMatrix::plus();
    let times: Vec<f64> = (0..40).map(|k| 0.125 * k as f64).collect();
    let traj = integrate_time_dependent(
        |t| Ok(m.build_generator_at(t)?.generator),
        &rho0,
        &times,
        &OdeSpec::default(),
    )
    .unwrap();
    for (state, &t) in traj.states.iter().zip(&times) {
        let exact = m.coherence(&rho0, t).unwrap();
        assert!((state.matrix()[(0, 1)] - exact).norm() < 1e-6, "t = {t}");
        assert_relative_eq!(state.matrix()[(0, 0)].re, 0.5, epsilon = 1e-8);
    }
}

#[test]
fn curve_is_execution_independent() {
    let m = model(1.0, 1.0, 1.0, Beta::Infinite);
    let times: Vec<f64> = (0..16).map(|k| 0.3 * k as f64).collect();
    let seq = m.curve(&times, Execution::Sequential).unwrap();
    let par = m.curve(&times, Execution::Parallel).unwrap();
    assert_eq!(seq, par);
    // zero-temperature Ohmic: Γ(t) = λ ln(1 + ω_c² t²) / 2
    for p in &seq {
        assert_relative_eq!(p.decoherence, 0.5 * (1.0 + p.t * p.t).ln(), epsilon = 1e-9);
    }
}
