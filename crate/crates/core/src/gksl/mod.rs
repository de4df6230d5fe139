//! Generators in Gorini–Kossakowski–Sudarshan–Lindblad form.
//!
//! Vectorization is column-stacking throughout: `vec(A X B) = (Bᵀ ⊗ A) vec(X)`.
//! Choi matrices are unnormalized, `C = Σ_ij E_ij ⊗ Φ(E_ij)`.

mod choi;
mod generator;
mod superop;
mod time_dependent;

pub use choi::{choi_of_map, choi_of_propagator, is_completely_positive, ChoiMatrix, CpReport, CP_TOL};
pub use generator::{apply_generator, DensityMatrix, GkslGenerator, VALIDATION_TOL};
pub use superop::{propagate_semigroup, propagator, to_superoperator, Superoperator, PROPAGATION_TOL};
pub use time_dependent::{integrate_time_dependent, Trajectory, DRIFT_LIMIT};

use crate::par::Execution;
use crate::Result;

/// Choi spectrum of `exp(t L)` at each time.
pub fn certify_semigroup(gen: &GkslGenerator, times: &[f64], tol: f64, exec: Execution) -> Result<Vec<CpReport>> {
    let s = to_superoperator(gen);
    exec.try_map(times, |&t| {
        let choi = choi_of_propagator(&s.exp(t)?)?;
        is_completely_positive(&choi, tol)
    })
}
