use super::superop::Superoperator;
use crate::numcore::eigen::hermitian_eigenvalues;
use crate::numcore::matrix::{ComplexMatrix, ONE};
use crate::{Error, Result};

/// Default PSD threshold for [`is_completely_positive`].
pub const CP_TOL: f64 = 1e-9;

/// Unnormalized Choi matrix `C = Σ_ij E_ij ⊗ Φ(E_ij)`: block `(i, j)` of `C`
/// is `Φ(E_ij)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    dim: usize,
    matrix: ComplexMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CpReport {
    pub completely_positive: bool,
    pub min_eigenvalue: f64,
    /// Ascending.
    pub spectrum: Vec<f64>,
}

impl ChoiMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Partial trace over the output factor; equals the identity iff the map
    /// is trace preserving.
    pub fn trace_preservation_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0_f64;
        for i in 0..d {
            for j in 0..d {
                let mut tr = (0..d).fold(ONE * 0.0, |acc, k| acc + self.matrix[(i * d + k, j * d + k)]);
                if i == j {
                    tr -= ONE;
                }
                worst = worst.max(tr.norm());
            }
        }
        worst
    }
}

/// Choi matrix of an arbitrary linear map on `d×d` matrices.
pub fn choi_of_map<F>(dim: usize, map: F) -> Result<ChoiMatrix>
where
    F: Fn(&ComplexMatrix) -> Result<ComplexMatrix>,
{
    let n = dim * dim;
    let mut c = ComplexMatrix::zeros(n);
    for i in 0..dim {
        for j in 0..dim {
            let mut unit = ComplexMatrix::zeros(dim);
            unit[(i, j)] = ONE;
            let image = map(&unit)?;
            if image.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: image.dim(),
                });
            }
            for k in 0..dim {
                for l in 0..dim {
                    c[(i * dim + k, j * dim + l)] = image[(k, l)];
                }
            }
        }
    }
    Ok(ChoiMatrix { dim, matrix: c })
}

/// Choi matrix of a superoperator (typically a propagator `exp(tS)`).
pub fn choi_of_propagator(prop: &Superoperator) -> Result<ChoiMatrix> {
    choi_of_map(prop.dim(), |e| prop.apply(e))
}

/// PSD check of a Choi matrix: CP iff `min eigenvalue >= -tol`.
pub fn is_completely_positive(c: &ChoiMatrix, tol: f64) -> Result<CpReport> {
    let defect = c.matrix.hermiticity_defect();
    if defect > 1e-9 * c.matrix.max_abs().max(1.0) {
        return Err(Error::NotHermitian { defect });
    }
    let spectrum = hermitian_eigenvalues(&c.matrix.hermitian_part())?;
    let min_eigenvalue = spectrum[0];
    Ok(CpReport {
        completely_positive: min_eigenvalue >= -tol,
        min_eigenvalue,
        spectrum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::matrix::pauli_x;

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn identity_channel() {
        let c = choi_of_propagator(&Superoperator::identity(2)).unwrap();
        let r = is_completely_positive(&c, CP_TOL).unwrap();
        assert!(r.completely_positive);
        assert!(close(&r.spectrum, &[0.0, 0.0, 0.0, 2.0]));
        assert!(c.trace_preservation_defect() < 1e-15);
    }

    #[test]
    fn full_dephasing_channel() {
        // E_ij -> δ_ij E_ii ; C = E00⊗E00 + E11⊗E11
        let c = choi_of_map(2, |e| {
            let mut out = e.clone();
            out[(0, 1)] = ONE * 0.0;
            out[(1, 0)] = ONE * 0.0;
            Ok(out)
        })
        .unwrap();
        let r = is_completely_positive(&c, CP_TOL).unwrap();
        assert!(r.completely_positive);
        assert!(close(&r.spectrum, &[0.0, 0.0, 1.0, 1.0]));
    }

    #[test]
    fn unitary_channel_rank_one() {
        let x = pauli_x();
        let c = choi_of_map(2, |e| Ok(&(&x * e) * &x)).unwrap();
        let r = is_completely_positive(&c, CP_TOL).unwrap();
        assert!(r.completely_positive);
        assert!(close(&r.spectrum, &[0.0, 0.0, 0.0, 2.0]));
    }

    #[test]
    fn transpose_is_not_cp() {
        let c = choi_of_map(2, |e| Ok(e.transpose())).unwrap();
        let r = is_completely_positive(&c, CP_TOL).unwrap();
        assert!(!r.completely_positive);
        assert!(close(&r.spectrum, &[-1.0, 1.0, 1.0, 1.0]));
    }

    #[test]
    fn non_hermitian_choi_rejected() {
        // E_ij -> E_ij E_00 is not Hermiticity preserving
        let c = choi_of_map(2, |e| {
            let mut p = ComplexMatrix::zeros(2);
            p[(0, 0)] = ONE;
            Ok(e * &p)
        })
        .unwrap();
        assert!(matches!(
            is_completely_positive(&c, CP_TOL),
            Err(Error::NotHermitian { .. })
        ));
    }
}
