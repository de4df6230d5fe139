//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness; exits nonzero if any criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use decohere::collisional::{
    build_discretized_generator, evolve_exact, fdt_response, mb_structure_factor, sum_rule, GasSpec,
    MomentumTransferLaw, PositionDensityMatrix,
};
use decohere::dephasing::{Beta, DephasingModel, SpectralDensity};
use decohere::gksl::{choi_of_propagator, integrate_time_dependent, is_completely_positive, propagator, DensityMatrix};
use decohere::numcore::{OdeSpec, QuadratureSpec};
use decohere::{sample, Execution};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

/// `worst <= tol`, reported either way.
fn within(worst: f64, tol: f64) -> Outcome {
    let msg = format!("worst {worst:.3e}, tolerance {tol:.0e}");
    if worst <= tol {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn all(parts: Vec<(&str, Outcome)>) -> Outcome {
    let mut ok = true;
    let text: Vec<String> = parts
        .into_iter()
        .map(|(name, r)| {
            ok &= r.is_ok();
            format!("{name}: {}", r.unwrap_or_else(|e| format!("FAILED {e}")))
        })
        .collect();
    if ok {
        Ok(text.join("; "))
    } else {
        Err(text.join("; "))
    }
}

fn fail(e: impl std::fmt::Display) -> String {
    format!("error: {e}")
}

fn gksl_certification() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let mut min_eig = f64::INFINITY;
    let mut drift = 0.0_f64;
    for k in 0..50 {
        let dim = 2 + k % 3;
        let m = 1 + (k / 3) % 3;
        let gen = sample::generator(&mut rng, dim, m);
        let rho = sample::density_matrix(&mut rng, dim);
        for t in [0.1, 1.0, 10.0] {
            let p = propagator(&gen, t).map_err(fail)?;
            let choi = choi_of_propagator(&p).map_err(fail)?;
            min_eig = min_eig.min(is_completely_positive(&choi, 1e-8).map_err(fail)?.min_eigenvalue);
            let out = p.apply(rho.matrix()).map_err(fail)?;
            drift = drift.max((out.trace() - Complex64::new(1.0, 0.0)).norm());
            drift = drift.max(choi.trace_preservation_defect());
        }
    }
    all(vec![
        ("min Choi eigenvalue", within(-min_eig, 1e-8)),
        ("trace drift", within(drift, 1e-10)),
    ])
}

fn dephasing_two_forms() -> Outcome {
    let mut points = Vec::new();
    for lambda in [0.1, 1.0] {
        for s in [0.5, 1.0, 2.0] {
            for wc in [1.0, 5.0] {
                for beta in [Beta::Finite(0.1), Beta::Finite(1.0), Beta::Infinite] {
                    points.push((lambda, s, wc, beta));
                }
            }
        }
    }
    let results = Execution::Parallel
        .try_map(&points, |&(lambda, s, wc, beta)| {
            let m = DephasingModel::new(0.0, SpectralDensity::ohmic(lambda, s, wc)?, beta)?;
            let mut worst = (0.0_f64, 0.0_f64, 0.0_f64);
            if m.decoherence_function(0.0)? != 0.0 {
                worst.2 = f64::INFINITY;
            }
            for t in [0.5, 2.0, 5.0, 10.0] {
                let g = m.dephasing_rate(t)?;
                let big = m.decoherence_function(t)?;
                worst.0 = worst.0.max((g - m.dephasing_rate_time_domain(t)?).abs());
                worst.1 = worst.1.max((big - m.decoherence_function_time_domain(t)?).abs());
                worst.2 = worst.2.max(-big);
            }
            Ok(worst)
        })
        .map_err(fail)?;
    let fold = |f: fn(&(f64, f64, f64)) -> f64| results.iter().map(f).fold(0.0_f64, f64::max);
    all(vec![
        ("gamma", within(fold(|w| w.0), 1e-7)),
        ("Gamma", within(fold(|w| w.1), 1e-7)),
        ("Gamma >= 0", within(fold(|w| w.2), 0.0)),
    ])
}

fn dephasing_closed_form() -> Outcome {
    let m = DephasingModel::new(
        0.0,
        SpectralDensity::ohmic(1.0, 1.0, 1.0).map_err(fail)?,
        Beta::Infinite,
    )
    .map_err(fail)?;
    let g = m.dephasing_rate(1.0).map_err(fail)?;
    let big = m.decoherence_function(1.0).map_err(fail)?;
    all(vec![
        ("gamma(1) = 0.5", within((g - 0.5).abs(), 1e-8)),
        ("Gamma(1) = ln2/2", within((big - 0.5 * 2f64.ln()).abs(), 1e-8)),
    ])
}

fn dephasing_end_to_end() -> Outcome {
    let times: Vec<f64> = (0..50).map(|k| 5.0 * k as f64 / 49.0).collect();
    let rho0 = DensityMatrix::plus();
    let mut combos = Vec::new();
    for s in [0.5, 1.0, 2.0] {
        for beta in [Beta::Finite(0.5), Beta::Finite(2.0), Beta::Infinite] {
            combos.push((s, beta));
        }
    }
    let results = Execution::Parallel
        .try_map(&combos, |&(s, beta)| {
            let m = DephasingModel::new(1.0, SpectralDensity::ohmic(0.5, s, 1.0)?, beta)?;
            let traj = integrate_time_dependent(
                |t| Ok(m.build_generator_at(t)?.generator),
                &rho0,
                &times,
                &OdeSpec::default(),
            )?;
            let mut worst = (0.0_f64, 0.0_f64);
            for (state, &t) in traj.states.iter().zip(&times) {
                let expected = (-m.decoherence_function(t)?).exp() * 0.5;
                worst.0 = worst.0.max((state.matrix()[(0, 1)].norm() - expected).abs());
                worst.1 = worst.1.max((state.matrix()[(0, 0)].re - 0.5).abs());
            }
            Ok(worst)
        })
        .map_err(fail)?;
    all(vec![
        (
            "|coherence|",
            within(results.iter().map(|w| w.0).fold(0.0, f64::max), 1e-6),
        ),
        (
            "populations",
            within(results.iter().map(|w| w.1).fold(0.0, f64::max), 1e-8),
        ),
    ])
}

fn collisional_equivalence() -> Outcome {
    let grid: Vec<f64> = (0..8).map(|i| 0.5 * i as f64).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let amps: Vec<Complex64> = (0..8)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let rho0 = PositionDensityMatrix::pure(grid.clone(), &amps).map_err(fail)?;
    let times: Vec<f64> = (0..=20).map(|k| 0.25 * k as f64).collect();

    let mut ode_worst = 0.0_f64;
    for law in [
        MomentumTransferLaw::gaussian(1.0, 1.0).map_err(fail)?,
        MomentumTransferLaw::two_point(1.0, 1.3).map_err(fail)?,
    ] {
        let gen = build_discretized_generator(&law, &grid, 64).map_err(fail)?;
        let states = gen.evolve(&rho0, &times, &OdeSpec::default()).map_err(fail)?;
        for (s, &t) in states.iter().zip(&times) {
            let exact = evolve_exact(&rho0, &law, t).map_err(fail)?;
            ode_worst = ode_worst.max(s.matrix().max_abs_diff(exact.matrix()));
        }
    }

    let law = MomentumTransferLaw::two_point(1.0, 1.3).map_err(fail)?;
    let gen = build_discretized_generator(&law, &grid, 2).map_err(fail)?;
    let s = gen.to_generator().map_err(fail)?;
    let mut exact_worst = 0.0_f64;
    for t in [0.5, 1.0, 5.0] {
        let out = propagator(&s, t).and_then(|p| p.apply(rho0.matrix())).map_err(fail)?;
        let exact = evolve_exact(&rho0, &law, t).map_err(fail)?;
        exact_worst = exact_worst.max(out.max_abs_diff(exact.matrix()));
    }
    all(vec![
        ("ODE vs closed form", within(ode_worst, 1e-7)),
        ("two-point n_q=2", within(exact_worst, 1e-12)),
    ])
}

fn saturation() -> Outcome {
    let law = MomentumTransferLaw::gaussian(1.0, 1.0).map_err(fail)?;
    let f = law.decoherence_factor(10.0, 1.0).map_err(fail)?;
    within((f - (-1.0f64).exp()).abs(), 1e-6)
}

fn structure_factor() -> Outcome {
    let mut balance = 0.0_f64;
    let mut anti = 0.0_f64;
    let mut sum = 0.0_f64;
    let spec = QuadratureSpec::default();
    for q in [0.5, 1.0, 2.0] {
        for beta in [0.5, 1.0, 2.0] {
            for mass in [0.5, 1.0, 2.0] {
                let gas = GasSpec::thermal(mass, beta).map_err(fail)?;
                for e in [0.25, 0.5, 1.0, 2.0] {
                    let ratio = mb_structure_factor(&gas, q, e).map_err(fail)?
                        / mb_structure_factor(&gas, q, -e).map_err(fail)?;
                    balance = balance.max((ratio / (-beta * e).exp() - 1.0).abs());
                    let plus = fdt_response(&gas, q, e).map_err(fail)?;
                    let minus = fdt_response(&gas, q, -e).map_err(fail)?;
                    anti = anti.max(((plus + minus) / plus).abs());
                }
                sum = sum.max((sum_rule(&gas, q, 40.0, &spec).map_err(fail)?.value - 1.0).abs());
            }
        }
    }
    all(vec![
        ("detailed balance (rel)", within(balance, 1e-9)),
        ("sum rule", within(sum, 1e-8)),
        ("chi'' antisymmetry (rel)", within(anti, 1e-9)),
    ])
}

fn cli_contract() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_decohere");
    let shipped = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    let dir = tempfile::tempdir().map_err(fail)?;
    let run = |name: &str| -> Result<(Option<i32>, Option<Vec<u8>>), String> {
        let target = dir.path().join(name);
        std::fs::copy(shipped.join(name), &target).map_err(fail)?;
        let status = Command::new(bin)
            .arg("run")
            .arg(&target)
            .env_remove("DECOHERE_SEED")
            .output()
            .map_err(fail)?
            .status
            .code();
        let text = std::fs::read_to_string(&target).map_err(fail)?;
        let v: serde_json::Value = serde_json::from_str(&text).map_err(fail)?;
        let csv = v["output"]["csv_path"].as_str().map(|p| dir.path().join(p));
        Ok((status, csv.and_then(|p| std::fs::read(p).ok())))
    };
    let mut notes = Vec::new();
    let mut ok = true;
    for name in ["dephasing.json", "collisional.json", "gksl.json"] {
        let (code1, csv1) = run(name)?;
        let (code2, csv2) = run(name)?;
        let identical = csv1.is_some() && csv1 == csv2;
        ok &= code1 == Some(0) && code2 == Some(0) && identical;
        notes.push(format!("{name} exit {code1:?}/{code2:?}, identical CSV {identical}"));
    }
    let (code, _) = run("invalid_kossakowski.json")?;
    ok &= code == Some(2);
    notes.push(format!("invalid_kossakowski.json exit {code:?}"));
    if ok {
        Ok(notes.join("; "))
    } else {
        Err(notes.join("; "))
    }
}

fn main() {
    let criteria: [Criterion; 8] = [
        (
            "GKSL semigroups are completely positive and trace preserving",
            gksl_certification,
        ),
        (
            "dephasing rate and decoherence function: frequency vs time domain",
            dephasing_two_forms,
        ),
        ("zero-temperature Ohmic closed forms", dephasing_closed_form),
        (
            "integrated dephasing master equation vs exact coherence",
            dephasing_end_to_end,
        ),
        (
            "collisional generator vs characteristic-function solution",
            collisional_equivalence,
        ),
        ("collisional saturation plateau", saturation),
        (
            "structure factor: detailed balance, sum rule, antisymmetry",
            structure_factor,
        ),
        ("CLI contract", cli_contract),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed().as_secs_f64();
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        failed += outcome.is_err() as usize;
        println!("criterion {}: {tag} {name} ({detail}) [{elapsed:.2}s]", i + 1);
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 8 acceptance criteria passed");
}
