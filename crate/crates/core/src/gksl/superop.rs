use num_complex::Complex64;

use super::generator::{DensityMatrix, GkslGenerator};
use crate::numcore::matrix::{ComplexMatrix, I, ZERO};
use crate::numcore::matrix_exp;
use crate::{Error, Result};

/// Linear map on `d×d` matrices as a `d²×d²` matrix acting on column-stacked
/// vectors: `vec(A X B) = (Bᵀ ⊗ A) vec(X)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    dim: usize,
    matrix: ComplexMatrix,
}

impl Superoperator {
    pub fn from_matrix(dim: usize, matrix: ComplexMatrix) -> Result<Self> {
        if matrix.dim() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: matrix.dim(),
            });
        }
        matrix.ensure_finite()?;
        Ok(Superoperator { dim, matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Superoperator {
            dim,
            matrix: ComplexMatrix::identity(dim * dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: rho.dim(),
            });
        }
        Ok(ComplexMatrix::unvec(&self.matrix.mul_vec(&rho.vec()), self.dim))
    }

    /// `exp(t S)`.
    pub fn exp(&self, t: f64) -> Result<Superoperator> {
        Ok(Superoperator {
            dim: self.dim,
            matrix: matrix_exp(&self.matrix.scale_real(t))?,
        })
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Superoperator) -> Result<Superoperator> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(Superoperator {
            dim: self.dim,
            matrix: &self.matrix * &other.matrix,
        })
    }

    /// Row vector `vec(I)†` times the matrix: the trace functional pulled
    /// back through the map. Trace preservation of the generator means this
    /// vanishes; for a propagator it equals `vec(I)†`.
    pub fn trace_row(&self) -> Vec<Complex64> {
        let d = self.dim;
        let n = d * d;
        (0..n)
            .map(|col| (0..d).fold(ZERO, |acc, i| acc + self.matrix[(i * d + i, col)]))
            .collect()
    }
}

pub fn to_superoperator(gen: &GkslGenerator) -> Superoperator {
    let d = gen.dim();
    let id = ComplexMatrix::identity(d);
    let h = gen.hamiltonian();
    let mut s = (id.kron(h) - h.transpose().kron(&id)).scale(-I);
    let ops = gen.lindblad_ops();
    let a = gen.kossakowski();
    for (j, lj) in ops.iter().enumerate() {
        for (k, lk) in ops.iter().enumerate() {
            let coeff = a[(j, k)];
            if coeff == ZERO {
                continue;
            }
            let lkd_lj = &lk.adjoint() * lj;
            let term =
                lk.conj().kron(lj) - id.kron(&lkd_lj).scale_real(0.5) - lkd_lj.transpose().kron(&id).scale_real(0.5);
            s = s + term.scale(coeff);
        }
    }
    Superoperator { dim: d, matrix: s }
}

/// `exp(t L)` as a superoperator.
pub fn propagator(gen: &GkslGenerator, t: f64) -> Result<Superoperator> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::invalid("t", "must be finite and >= 0"));
    }
    to_superoperator(gen).exp(t)
}

/// Tolerance on the propagated state's density-matrix invariants.
pub const PROPAGATION_TOL: f64 = 1e-8;

pub fn propagate_semigroup(gen: &GkslGenerator, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    if rho0.dim() != gen.dim() {
        return Err(Error::DimensionMismatch {
            expected: gen.dim(),
            found: rho0.dim(),
        });
    }
    if t == 0.0 {
        return Ok(rho0.clone());
    }
    let rho = propagator(gen, t)?.apply(rho0.matrix())?;
    DensityMatrix::with_tolerance(rho, PROPAGATION_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gksl::generator::apply_generator;
    use crate::numcore::matrix::pauli_z;

    #[test]
    fn zero_generator_gives_zero_superoperator() {
        let gen = GkslGenerator::unitary(ComplexMatrix::zeros(3)).unwrap();
        assert_eq!(to_superoperator(&gen).matrix().max_abs(), 0.0);
    }

    #[test]
    fn hamiltonian_vectorization_identity() {
        let z = pauli_z();
        let gen = GkslGenerator::unitary(z.clone()).unwrap();
        let id = ComplexMatrix::identity(2);
        let expected = (id.kron(&z) - z.transpose().kron(&id)).scale(-I);
        assert_eq!(to_superoperator(&gen).matrix(), &expected);
    }

    #[test]
    fn dephasing_superoperator_is_diagonal() {
        let gamma = 0.3;
        let gen = GkslGenerator::with_rates(ComplexMatrix::zeros(2), vec![(pauli_z(), gamma)]).unwrap();
        let s = to_superoperator(&gen);
        let expected = ComplexMatrix::real_diagonal(&[0.0, -2.0 * gamma, -2.0 * gamma, 0.0]);
        assert!(s.matrix().max_abs_diff(&expected) < 1e-15);
        let out = s.apply(DensityMatrix::plus().matrix()).unwrap();
        let direct = apply_generator(&gen, &DensityMatrix::plus()).unwrap();
        assert!(out.max_abs_diff(&direct) < 1e-15);
    }

    #[test]
    fn semigroup_closed_forms() {
        let gen = GkslGenerator::with_rates(ComplexMatrix::zeros(2), vec![(pauli_z(), 0.5)]).unwrap();
        let rho0 = DensityMatrix::plus();
        assert_eq!(propagate_semigroup(&gen, &rho0, 0.0).unwrap(), rho0);
        let rho = propagate_semigroup(&gen, &rho0, 1.0).unwrap();
        assert!((rho.matrix()[(0, 1)].re - 0.5 * (-1.0f64).exp()).abs() < 1e-12);
        assert!((rho.matrix()[(0, 0)].re - 0.5).abs() < 1e-14);

        // H = ω0 σz: ρ01 picks up e^{-2iω0 t}
        let w0 = 0.8;
        let gen = GkslGenerator::unitary(pauli_z().scale_real(w0)).unwrap();
        let t = std::f64::consts::PI / w0 / 3.0;
        let rho = propagate_semigroup(&gen, &rho0, t).unwrap();
        let expected = Complex64::from_polar(0.5, -2.0 * w0 * t);
        assert!((rho.matrix()[(0, 1)] - expected).norm() < 1e-12);
    }

    #[test]
    fn negative_time_rejected() {
        let gen = GkslGenerator::unitary(pauli_z()).unwrap();
        assert!(propagator(&gen, -1.0).is_err());
    }
}
