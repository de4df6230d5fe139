use num_complex::Complex64;

use crate::numcore::eigen::{hermitian_eigen, hermitian_eigenvalues};
use crate::numcore::matrix::{ComplexMatrix, I, ZERO};
use crate::{Error, Result};

/// Hermiticity / positivity tolerance applied at construction.
pub const VALIDATION_TOL: f64 = 1e-10;

/// Hermitian, unit-trace, positive-semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(m, VALIDATION_TOL)
    }

    /// Validates every invariant against `tol` instead of the default 1e-10.
    pub fn with_tolerance(m: ComplexMatrix, tol: f64) -> Result<Self> {
        m.ensure_finite()?;
        let defect = m.hermiticity_defect();
        if defect > tol {
            return Err(Error::NotDensityMatrix {
                reason: format!("hermiticity defect {defect:.3e}"),
            });
        }
        let tr = m.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > tol {
            return Err(Error::NotDensityMatrix {
                reason: format!("trace {tr}"),
            });
        }
        let min = hermitian_eigenvalues(&m.hermitian_part())?[0];
        if min < -tol {
            return Err(Error::NotDensityMatrix {
                reason: format!("min eigenvalue {min:.3e}"),
            });
        }
        Ok(DensityMatrix(m))
    }

    /// Pure state `|ψ><ψ|`; `psi` is normalized here.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::NotDensityMatrix {
                reason: "zero state vector".into(),
            });
        }
        let v: Vec<Complex64> = psi.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::outer(&v))
    }

    /// `|+><+|` for a qubit.
    pub fn plus() -> Self {
        DensityMatrix(ComplexMatrix::from_fn(2, |_, _| Complex64::new(0.5, 0.0)))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn purity(&self) -> f64 {
        (&self.0 * &self.0).trace().re
    }
}

/// Generator `-i[H, ρ] + Σ_jk a_jk (L_j ρ L_k† - ½{L_k† L_j, ρ})`.
#[derive(Debug, Clone, PartialEq)]
pub struct GkslGenerator {
    hamiltonian: ComplexMatrix,
    lindblad_ops: Vec<ComplexMatrix>,
    kossakowski: ComplexMatrix,
    certified: bool,
}

impl GkslGenerator {
    /// Validates H Hermitian and the Kossakowski matrix Hermitian and
    /// positive semidefinite, all within 1e-10.
    pub fn new(
        hamiltonian: ComplexMatrix,
        lindblad_ops: Vec<ComplexMatrix>,
        kossakowski: ComplexMatrix,
    ) -> Result<Self> {
        let mut gen = Self::time_local(hamiltonian, lindblad_ops, kossakowski)?;
        if gen.lindblad_ops.is_empty() {
            gen.certified = true;
            return Ok(gen);
        }
        let scale = gen.kossakowski.max_abs().max(1.0);
        let min = hermitian_eigenvalues(&gen.kossakowski)?[0];
        if min < -VALIDATION_TOL * scale {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
        gen.certified = true;
        Ok(gen)
    }

    /// Same structural checks as [`GkslGenerator::new`] but admits a
    /// Kossakowski matrix with negative eigenvalues, as arises for
    /// time-local generators with transiently negative rates.
    pub fn time_local(
        hamiltonian: ComplexMatrix,
        lindblad_ops: Vec<ComplexMatrix>,
        kossakowski: ComplexMatrix,
    ) -> Result<Self> {
        let d = hamiltonian.dim();
        hamiltonian.ensure_finite()?;
        hamiltonian.ensure_hermitian(VALIDATION_TOL * hamiltonian.max_abs().max(1.0))?;
        for op in &lindblad_ops {
            if op.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: op.dim(),
                });
            }
            op.ensure_finite()?;
        }
        let m = lindblad_ops.len();
        let kossakowski = if m == 0 && kossakowski.dim() == 0 {
            ComplexMatrix::zeros(0)
        } else {
            kossakowski
        };
        if kossakowski.dim() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: kossakowski.dim(),
            });
        }
        kossakowski.ensure_finite()?;
        kossakowski.ensure_hermitian(VALIDATION_TOL * kossakowski.max_abs().max(1.0))?;
        Ok(GkslGenerator {
            hamiltonian,
            lindblad_ops,
            kossakowski,
            certified: false,
        })
    }

    /// Purely Hamiltonian generator.
    pub fn unitary(hamiltonian: ComplexMatrix) -> Result<Self> {
        Self::new(hamiltonian, Vec::new(), ComplexMatrix::zeros(0))
    }

    /// Diagonal Kossakowski matrix: `Σ_j rate_j D[L_j]`.
    pub fn with_rates(hamiltonian: ComplexMatrix, ops_and_rates: Vec<(ComplexMatrix, f64)>) -> Result<Self> {
        let rates: Vec<f64> = ops_and_rates.iter().map(|(_, r)| *r).collect();
        let ops = ops_and_rates.into_iter().map(|(l, _)| l).collect();
        Self::new(hamiltonian, ops, ComplexMatrix::real_diagonal(&rates))
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix {
        &self.hamiltonian
    }

    pub fn lindblad_ops(&self) -> &[ComplexMatrix] {
        &self.lindblad_ops
    }

    pub fn kossakowski(&self) -> &ComplexMatrix {
        &self.kossakowski
    }

    /// True when the Kossakowski matrix was certified PSD at construction.
    pub fn is_certified(&self) -> bool {
        self.certified
    }

    /// Applies the generator to an arbitrary `d×d` matrix.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        let d = self.dim();
        if rho.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: rho.dim(),
            });
        }
        let mut out = self.hamiltonian.commutator(rho).scale(-I);
        let m = self.lindblad_ops.len();
        for j in 0..m {
            let lj_rho = &self.lindblad_ops[j] * rho;
            for k in 0..m {
                let a = self.kossakowski[(j, k)];
                if a == ZERO {
                    continue;
                }
                let lk_dag = self.lindblad_ops[k].adjoint();
                let jump = &lj_rho * &lk_dag;
                let lkd_lj = &lk_dag * &self.lindblad_ops[j];
                let anti = lkd_lj.anticommutator(rho).scale_real(0.5);
                out = out + (jump - anti).scale(a);
            }
        }
        Ok(out)
    }

    /// Equivalent generator with diagonal Kossakowski matrix.
    ///
    /// With `a = U diag(r) U†` the new operators are `M_n = Σ_j U_jn L_j`.
    /// Channels whose rate is below `1e-14 · max|a|` are dropped; small
    /// negative rounding is clamped to zero.
    pub fn canonical_form(&self) -> Result<GkslGenerator> {
        if self.lindblad_ops.is_empty() {
            return Ok(self.clone());
        }
        let eig = hermitian_eigen(&self.kossakowski)?;
        let cutoff = 1e-14 * self.kossakowski.max_abs();
        let d = self.dim();
        let mut pairs = Vec::new();
        for (n, &rate) in eig.values.iter().enumerate().rev() {
            if rate <= cutoff {
                continue;
            }
            let mut op = ComplexMatrix::zeros(d);
            for (j, l) in self.lindblad_ops.iter().enumerate() {
                let u = eig.vectors[(j, n)];
                if u != ZERO {
                    op = op + l.scale(u);
                }
            }
            pairs.push((op, rate));
        }
        if pairs.is_empty() {
            return GkslGenerator::unitary(self.hamiltonian.clone());
        }
        let mut out = GkslGenerator::with_rates(self.hamiltonian.clone(), pairs)?;
        out.certified = self.certified;
        Ok(out)
    }
}

/// Spec-level entry point: `gen(ρ)` for a density matrix.
pub fn apply_generator(gen: &GkslGenerator, rho: &DensityMatrix) -> Result<ComplexMatrix> {
    gen.apply(rho.matrix())
}
