use num_complex::Complex64;

use super::generator::{DensityMatrix, GkslGenerator};
use crate::numcore::matrix::ComplexMatrix;
use crate::numcore::{ode_solve, OdeSpec};
use crate::{Error, Result};

/// Drift reported as an error during time-dependent integration.
pub const DRIFT_LIMIT: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    /// `max_t |tr ρ(t) - 1|`.
    pub trace_drift_max: f64,
    /// `max_t max |ρ(t) - ρ(t)†|`.
    pub hermiticity_drift_max: f64,
}

/// Integrates `dρ/dt = L(t) ρ` on `t_grid`, re-evaluating `gen_at` at every
/// Runge–Kutta stage.
///
/// States are stored as `[Re vec(ρ), Im vec(ρ)]`. Trace or Hermiticity drift
/// above [`DRIFT_LIMIT`] at any output time aborts with
/// [`Error::InvariantViolation`].
pub fn integrate_time_dependent<G>(
    gen_at: G,
    rho0: &DensityMatrix,
    t_grid: &[f64],
    spec: &OdeSpec,
) -> Result<Trajectory>
where
    G: Fn(f64) -> Result<GkslGenerator>,
{
    let d = rho0.dim();
    let n = d * d;
    let y0 = pack(rho0.matrix());

    let rhs = |t: f64, y: &[f64], dy: &mut [f64]| -> Result<()> {
        let gen = gen_at(t)?;
        if gen.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: gen.dim(),
            });
        }
        let rho = unpack(y, d);
        let drho = gen.apply(&rho)?;
        for (k, z) in drho.vec().iter().enumerate() {
            dy[k] = z.re;
            dy[n + k] = z.im;
        }
        Ok(())
    };
    let raw = ode_solve(rhs, &y0, t_grid, spec)?;

    let mut states = Vec::with_capacity(raw.len());
    let mut trace_drift_max = 0.0_f64;
    let mut hermiticity_drift_max = 0.0_f64;
    for (y, &t) in raw.iter().zip(t_grid) {
        let rho = unpack(y, d);
        let trace_drift = (rho.trace() - Complex64::new(1.0, 0.0)).norm();
        let herm_drift = rho.hermiticity_defect();
        trace_drift_max = trace_drift_max.max(trace_drift);
        hermiticity_drift_max = hermiticity_drift_max.max(herm_drift);
        if trace_drift > DRIFT_LIMIT {
            return Err(Error::InvariantViolation {
                t,
                what: "trace",
                drift: trace_drift,
            });
        }
        if herm_drift > DRIFT_LIMIT {
            return Err(Error::InvariantViolation {
                t,
                what: "hermiticity",
                drift: herm_drift,
            });
        }
        let state = DensityMatrix::with_tolerance(rho, DRIFT_LIMIT).map_err(|_| Error::InvariantViolation {
            t,
            what: "positivity",
            drift: f64::NAN,
        })?;
        states.push(state);
    }
    Ok(Trajectory {
        times: t_grid.to_vec(),
        states,
        trace_drift_max,
        hermiticity_drift_max,
    })
}

fn pack(m: &ComplexMatrix) -> Vec<f64> {
    let v = m.vec();
    v.iter().map(|z| z.re).chain(v.iter().map(|z| z.im)).collect()
}

fn unpack(y: &[f64], d: usize) -> ComplexMatrix {
    let n = d * d;
    let v: Vec<Complex64> = (0..n).map(|k| Complex64::new(y[k], y[n + k])).collect();
    ComplexMatrix::unvec(&v, d)
}
