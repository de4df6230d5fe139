use decohere::collisional::{evolve_exact_with, DiscretizedCollisions, MomentumTransferLaw, PositionDensityMatrix};
use decohere::dephasing::DephasingModel;
use decohere::gksl::{
    choi_of_map, choi_of_propagator, integrate_time_dependent, is_completely_positive, to_superoperator, ChoiMatrix,
    DensityMatrix, GkslGenerator,
};
use decohere::numcore::matrix::ONE;
use decohere::numcore::OdeSpec;
use decohere::Execution;
use num_complex::Complex64;

use crate::error::{CliError, CliResult};
use crate::report::{ChoiCheck, InvariantReport, CP_TOL};
use crate::scenario::{Prepared, Scenario};
use crate::table::Table;

/// Number of grid times at which the frequency- and time-domain forms of
/// `γ` and `Γ` are compared (the time-domain form is a nested quadrature).
const TWO_FORM_SAMPLES: usize = 8;

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub table: Table,
    pub report: InvariantReport,
}

pub fn run_scenario(scenario: &Scenario, exec: Execution, seed: Option<u64>) -> CliResult<RunOutput> {
    let times = scenario.time.grid();
    let ode = scenario.numerics().ode_spec()?;
    let mut report = InvariantReport::new(scenario.model.kind().to_string(), seed);
    let table = match scenario.prepare()? {
        Prepared::Dephasing { model, rho0 } => run_dephasing(&model, &rho0, &times, &ode, exec, &mut report)?,
        Prepared::Collisional { law, discretized, rho0 } => {
            run_collisional(&law, &discretized, &rho0, &times, &ode, exec, &mut report)?
        }
        Prepared::Gksl { generator, rho0 } => run_gksl(&generator, &rho0, &times, &ode, exec, &mut report)?,
    };
    report.finalize();
    Ok(RunOutput { table, report })
}

fn trace_drift(m: &decohere::numcore::ComplexMatrix) -> f64 {
    (m.trace() - ONE).norm()
}

fn run_dephasing(
    model: &DephasingModel,
    rho0: &DensityMatrix,
    times: &[f64],
    ode: &OdeSpec,
    exec: Execution,
    report: &mut InvariantReport,
) -> CliResult<Table> {
    let curve = model.curve(times, exec).map_err(CliError::model("dephasing curve"))?;
    let traj = integrate_time_dependent(|t| Ok(model.build_generator_at(t)?.generator), rho0, times, ode)
        .map_err(CliError::model("integrating the dephasing master equation"))?;

    let mut table = Table::new(&[
        "t",
        "gamma",
        "Gamma",
        "coherence_re",
        "coherence_im",
        "coherence_abs",
        "coherence_abs_numeric",
        "trace_drift",
    ]);
    let mut coherence_residual = 0.0_f64;
    let mut population_drift = 0.0_f64;
    for ((point, state), &t) in curve.iter().zip(&traj.states).zip(times) {
        let exact = model
            .coherence(rho0, t)
            .map_err(CliError::model("closed-form coherence"))?;
        let numeric = state.matrix()[(0, 1)];
        coherence_residual = coherence_residual.max((numeric - exact).norm());
        population_drift = population_drift.max((state.matrix()[(0, 0)] - rho0.matrix()[(0, 0)]).norm());
        table.push(vec![
            t,
            point.rate,
            point.decoherence,
            exact.re,
            exact.im,
            exact.norm(),
            numeric.norm(),
            trace_drift(state.matrix()),
        ]);
    }

    let n = times.len();
    let mut sample: Vec<usize> = (1..=TWO_FORM_SAMPLES).map(|k| k * (n - 1) / TWO_FORM_SAMPLES).collect();
    sample.dedup();
    let pairs = exec
        .try_map(&sample, |&i| {
            let t = times[i];
            Ok((
                (curve[i].rate - model.dephasing_rate_time_domain(t)?).abs(),
                (curve[i].decoherence - model.decoherence_function_time_domain(t)?).abs(),
            ))
        })
        .map_err(CliError::model("time-domain cross-check"))?;
    let gamma_two_forms = pairs.iter().fold(0.0_f64, |m, p| m.max(p.0));
    let decoherence_two_forms = pairs.iter().fold(0.0_f64, |m, p| m.max(p.1));

    report.trace_drift_max = traj.trace_drift_max;
    report.hermiticity_drift_max = traj.hermiticity_drift_max;
    report.residual("coherence_exact_vs_numeric", coherence_residual);
    report.residual("population_drift", population_drift);
    report.residual("gamma_two_forms", gamma_two_forms);
    report.residual("decoherence_two_forms", decoherence_two_forms);
    Ok(table)
}

fn run_collisional(
    law: &MomentumTransferLaw,
    discretized: &DiscretizedCollisions,
    rho0: &PositionDensityMatrix,
    times: &[f64],
    ode: &OdeSpec,
    exec: Execution,
    report: &mut InvariantReport,
) -> CliResult<Table> {
    let numeric = discretized
        .evolve(rho0, times, ode)
        .map_err(CliError::model("integrating the discretized collision term"))?;
    let exact = exec
        .try_map(times, |&t| evolve_exact_with(rho0, law, t, Execution::Sequential))
        .map_err(CliError::model("closed-form collisional evolution"))?;

    let n = rho0.len();
    let grid = rho0.grid();
    let span = grid[n - 1] - grid[0];
    let mut table = Table::new(&[
        "t",
        "offdiag_abs",
        "offdiag_abs_numeric",
        "decoherence_factor",
        "diag_drift",
        "trace_drift",
    ]);
    let mut residual = 0.0_f64;
    let mut diag_max = 0.0_f64;
    for ((num, ex), &t) in numeric.iter().zip(&exact).zip(times) {
        residual = residual.max(num.matrix().max_abs_diff(ex.matrix()));
        let diag_drift = (0..n)
            .map(|i| (num.matrix()[(i, i)] - rho0.matrix()[(i, i)]).norm())
            .fold(0.0_f64, f64::max);
        diag_max = diag_max.max(diag_drift);
        let drift = (num.matrix().trace() * num.weight() - ONE).norm();
        report.trace_drift_max = report.trace_drift_max.max(drift);
        report.hermiticity_drift_max = report.hermiticity_drift_max.max(num.matrix().hermiticity_defect());
        table.push(vec![
            t,
            ex.matrix()[(0, n - 1)].norm(),
            num.matrix()[(0, n - 1)].norm(),
            law.decoherence_factor(span, t)
                .map_err(CliError::model("decoherence factor"))?,
            diag_drift,
            drift,
        ]);
    }
    report.residual("exact_vs_discretized", residual);
    report.residual("diagonal_drift", diag_max);
    report.residual(
        "quadrature_characteristic_error",
        discretized.max_characteristic_error(),
    );
    Ok(table)
}

fn run_gksl(
    generator: &GkslGenerator,
    rho0: &DensityMatrix,
    times: &[f64],
    ode: &OdeSpec,
    exec: Execution,
    report: &mut InvariantReport,
) -> CliResult<Table> {
    let s = to_superoperator(generator);
    let exact = exec
        .try_map(times, |&t| s.exp(t)?.apply(rho0.matrix()))
        .map_err(CliError::model("semigroup propagation"))?;
    let traj = integrate_time_dependent(|_| Ok(generator.clone()), rho0, times, ode)
        .map_err(CliError::model("integrating the master equation"))?;

    let mut table = Table::new(&[
        "t",
        "coherence_re",
        "coherence_im",
        "coherence_abs",
        "coherence_abs_numeric",
        "purity",
        "trace_drift",
    ]);
    let mut residual = 0.0_f64;
    for ((rho, state), &t) in exact.iter().zip(&traj.states).zip(times) {
        residual = residual.max(rho.max_abs_diff(state.matrix()));
        let drift = trace_drift(rho);
        report.trace_drift_max = report.trace_drift_max.max(drift);
        report.hermiticity_drift_max = report.hermiticity_drift_max.max(rho.hermiticity_defect());
        let c = rho[(0, 1)];
        let purity = (rho * rho).trace().re;
        table.push(vec![
            t,
            c.re,
            c.im,
            c.norm(),
            state.matrix()[(0, 1)].norm(),
            purity,
            drift,
        ]);
    }
    report.trace_drift_max = report.trace_drift_max.max(traj.trace_drift_max);
    report.hermiticity_drift_max = report.hermiticity_drift_max.max(traj.hermiticity_drift_max);
    report.residual("semigroup_vs_ode", residual);
    Ok(table)
}

/// Complete-positivity certificate of the scenario's dynamical map at each
/// requested time.
pub fn check_cp(scenario: &Scenario, times: &[f64], exec: Execution, seed: Option<u64>) -> CliResult<InvariantReport> {
    if times.is_empty() {
        return Err(CliError::Usage("--times needs at least one value".into()));
    }
    if let Some(t) = times.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        return Err(CliError::Usage(format!("times must be finite and ≥ 0, got {t}")));
    }
    let mut report = InvariantReport::new(scenario.model.kind().to_string(), seed);
    let chois: Vec<ChoiMatrix> = match scenario.prepare()? {
        Prepared::Gksl { generator, .. } => {
            let s = to_superoperator(&generator);
            exec.try_map(times, |&t| choi_of_propagator(&s.exp(t)?))
        }
        Prepared::Dephasing { model, .. } => exec.try_map(times, |&t| {
            let c = model.coherence(&DensityMatrix::plus(), t)? * 2.0;
            dephasing_channel_choi(c)
        }),
        Prepared::Collisional { law, rho0, .. } => {
            let grid = rho0.grid().to_vec();
            exec.try_map(times, |&t| {
                choi_of_map(grid.len(), |e| {
                    Ok(e.hadamard_real(|i, j| law.decoherence_factor(grid[i] - grid[j], t).unwrap_or(f64::NAN)))
                })
            })
        }
    }
    .map_err(CliError::model("building Choi matrices"))?;
    let reports = exec
        .try_map(&chois, |c| is_completely_positive(c, CP_TOL))
        .map_err(CliError::model("complete-positivity check"))?;

    for ((cp, choi), &t) in reports.iter().zip(&chois).zip(times) {
        report.trace_drift_max = report.trace_drift_max.max(choi.trace_preservation_defect());
        report.hermiticity_drift_max = report.hermiticity_drift_max.max(choi.matrix().hermiticity_defect());
        report.choi_checks.push(ChoiCheck {
            t,
            min_eigenvalue: cp.min_eigenvalue,
            completely_positive: cp.completely_positive,
        });
    }
    report.min_choi_eigenvalue = reports.iter().map(|r| r.min_eigenvalue).reduce(f64::min);
    report.finalize();
    Ok(report)
}

/// Choi matrix of `ρ ↦ ρ` on the diagonal, `ρ₀₁ ↦ c ρ₀₁` off it.
fn dephasing_channel_choi(c: Complex64) -> decohere::Result<ChoiMatrix> {
    choi_of_map(2, |e| {
        let mut out = e.clone();
        out[(0, 1)] *= c;
        out[(1, 0)] *= c.conj();
        Ok(out)
    })
}
