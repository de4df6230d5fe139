use num_complex::Complex64;

use crate::gksl::{GkslGenerator, Superoperator};
use crate::numcore::eigen::hermitian_eigen;
use crate::numcore::matrix::{ComplexMatrix, ZERO};
use crate::numcore::{ode_solve, OdeSpec};
use crate::par::Execution;
use crate::{Error, Result};

/// Largest tolerated `|Φ_n - Φ|` on the grid's separations.
pub const SUPPORT_TOL: f64 = 1e-8;

/// Probability law of a single momentum transfer `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TransferDistribution {
    /// `q ~ N(0, σ_q²)`; `Φ(x) = exp(-σ_q² x² / 2)`.
    Gaussian { sigma: f64 },
    /// `q = ±q₀` with probability ½ each; `Φ(x) = cos(q₀ x)`.
    TwoPoint { q0: f64 },
}

/// Collision rate `Λ` together with the law of momentum transfers. The
/// positive density in front of the collision superoperator is
/// `Λ × pdf(q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumTransferLaw {
    rate: f64,
    law: TransferDistribution,
}

impl MomentumTransferLaw {
    pub fn new(rate: f64, law: TransferDistribution) -> Result<Self> {
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(Error::invalid("rate", "must be finite and > 0"));
        }
        match law {
            TransferDistribution::Gaussian { sigma } if !(sigma > 0.0 && sigma.is_finite()) => {
                return Err(Error::invalid("sigma", "must be finite and > 0"));
            }
            TransferDistribution::TwoPoint { q0 } if !(q0 > 0.0 && q0.is_finite()) => {
                return Err(Error::invalid("q0", "must be finite and > 0"));
            }
            _ => {}
        }
        Ok(MomentumTransferLaw { rate, law })
    }

    pub fn gaussian(rate: f64, sigma: f64) -> Result<Self> {
        Self::new(rate, TransferDistribution::Gaussian { sigma })
    }

    pub fn two_point(rate: f64, q0: f64) -> Result<Self> {
        Self::new(rate, TransferDistribution::TwoPoint { q0 })
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn law(&self) -> TransferDistribution {
        self.law
    }

    /// `Φ(x) = E[e^{iqx}]`, real for both symmetric laws.
    pub fn characteristic_function(&self, x: f64) -> f64 {
        match self.law {
            TransferDistribution::Gaussian { sigma } => (-0.5 * sigma * sigma * x * x).exp(),
            TransferDistribution::TwoPoint { q0 } => (q0 * x).cos(),
        }
    }

    /// `exp(-Λ [1 - Φ(dx)] t)`.
    pub fn decoherence_factor(&self, dx: f64, t: f64) -> Result<f64> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::invalid("t", "must be finite and >= 0"));
        }
        Ok((-self.rate * (1.0 - self.characteristic_function(dx)) * t).exp())
    }

    /// Quadrature nodes `(q_n, w_n)`, `Σ w_n = 1`, for the law.
    ///
    /// Gaussian: `n_q`-point Gauss–Hermite rule (probabilists' weight) from
    /// the Golub–Welsch eigenproblem, `n_q >= 16`. Two-point: the two atoms,
    /// which represent the law exactly for any `n_q >= 2`.
    pub fn nodes(&self, n_q: usize) -> Result<Vec<(f64, f64)>> {
        match self.law {
            TransferDistribution::TwoPoint { q0 } => {
                if n_q < 2 {
                    return Err(Error::QuadratureSupport {
                        reason: format!("two-point law needs 2 nodes, got {n_q}"),
                    });
                }
                Ok(vec![(-q0, 0.5), (q0, 0.5)])
            }
            TransferDistribution::Gaussian { sigma } => {
                if n_q < 16 {
                    return Err(Error::QuadratureSupport {
                        reason: format!("gaussian law needs at least 16 nodes, got {n_q}"),
                    });
                }
                Ok(gauss_hermite(n_q)?.into_iter().map(|(x, w)| (sigma * x, w)).collect())
            }
        }
    }
}

pub fn characteristic_function(law: &MomentumTransferLaw, x: f64) -> f64 {
    law.characteristic_function(x)
}

pub fn decoherence_factor(law: &MomentumTransferLaw, dx: f64, t: f64) -> Result<f64> {
    law.decoherence_factor(dx, t)
}

/// Gauss–Hermite rule for the standard normal density.
fn gauss_hermite(n: usize) -> Result<Vec<(f64, f64)>> {
    // Jacobi matrix of the probabilists' Hermite recurrence: zero diagonal,
    // off-diagonal sqrt(k).
    let jacobi = ComplexMatrix::from_fn(n, |i, j| {
        if i + 1 == j || j + 1 == i {
            Complex64::new((i.max(j) as f64).sqrt(), 0.0)
        } else {
            ZERO
        }
    });
    let eig = hermitian_eigen(&jacobi)?;
    Ok(eig
        .values
        .iter()
        .enumerate()
        .map(|(k, &x)| (x, eig.vectors[(0, k)].norm_sqr()))
        .collect())
}

/// Density matrix on a 1D position grid. The trace is `weight · Σ ρ_ii`.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionDensityMatrix {
    grid: Vec<f64>,
    weight: f64,
    matrix: ComplexMatrix,
}

impl PositionDensityMatrix {
    /// Unit grid weight (each grid point a site).
    pub fn new(grid: Vec<f64>, matrix: ComplexMatrix) -> Result<Self> {
        Self::with_weight(grid, 1.0, matrix)
    }

    pub fn with_weight(grid: Vec<f64>, weight: f64, matrix: ComplexMatrix) -> Result<Self> {
        validate_grid(&grid)?;
        if !(weight > 0.0 && weight.is_finite()) {
            return Err(Error::invalid("weight", "must be finite and > 0"));
        }
        if matrix.dim() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                found: matrix.dim(),
            });
        }
        matrix.ensure_finite()?;
        let defect = matrix.hermiticity_defect();
        if defect > 1e-10 {
            return Err(Error::NotDensityMatrix {
                reason: format!("hermiticity defect {defect:.3e}"),
            });
        }
        let trace = weight * matrix.trace().re;
        if (trace - 1.0).abs() > 1e-8 {
            return Err(Error::NotDensityMatrix {
                reason: format!("grid trace {trace}"),
            });
        }
        let min = crate::numcore::hermitian_eigenvalues(&matrix.hermitian_part())?[0] * weight;
        if min < -1e-8 {
            return Err(Error::NotDensityMatrix {
                reason: format!("min eigenvalue {min:.3e}"),
            });
        }
        Ok(PositionDensityMatrix { grid, weight, matrix })
    }

    /// Pure state with the given amplitudes on the grid, normalized so that
    /// the grid trace is one.
    pub fn pure(grid: Vec<f64>, amplitudes: &[Complex64]) -> Result<Self> {
        if amplitudes.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                found: amplitudes.len(),
            });
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::invalid("amplitudes", "must not vanish"));
        }
        let psi: Vec<Complex64> = amplitudes.iter().map(|z| z / norm).collect();
        Self::new(grid, ComplexMatrix::outer(&psi))
    }

    /// Equal-weight superposition over all grid points.
    pub fn uniform_superposition(grid: Vec<f64>) -> Result<Self> {
        let n = grid.len();
        Self::pure(grid, &vec![Complex64::new(1.0, 0.0); n])
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    fn with_matrix(&self, matrix: ComplexMatrix) -> Self {
        PositionDensityMatrix {
            grid: self.grid.clone(),
            weight: self.weight,
            matrix,
        }
    }
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::invalid("grid", "must not be empty"));
    }
    if grid.iter().any(|x| !x.is_finite()) || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("grid", "must be finite and strictly ascending"));
    }
    Ok(())
}

/// Entrywise `ρ_ij(t) = e^{-Λ[1 - Φ(x_i - x_j)] t} ρ_ij(0)`, rows evaluated
/// under `exec`.
pub fn evolve_exact_with(
    rho0: &PositionDensityMatrix,
    law: &MomentumTransferLaw,
    t: f64,
    exec: Execution,
) -> Result<PositionDensityMatrix> {
    law.decoherence_factor(0.0, t)?;
    let x = rho0.grid();
    let n = x.len();
    let rows: Vec<Vec<Complex64>> = exec.map_range(n, |i| {
        (0..n)
            .map(|j| {
                let f = (-law.rate * (1.0 - law.characteristic_function(x[i] - x[j])) * t).exp();
                rho0.matrix[(i, j)] * f
            })
            .collect()
    });
    Ok(rho0.with_matrix(ComplexMatrix::from_fn(n, |i, j| rows[i][j])))
}

pub fn evolve_exact(rho0: &PositionDensityMatrix, law: &MomentumTransferLaw, t: f64) -> Result<PositionDensityMatrix> {
    evolve_exact_with(rho0, law, t, Execution::default())
}

/// Collision superoperator on a grid built from `n_q` quadrature nodes:
/// `Σ_n Λ w_n (U_n ρ U_n† - ρ)` with `U_n = e^{i q_n x̂}`.
#[derive(Debug, Clone)]
pub struct DiscretizedCollisions {
    law: MomentumTransferLaw,
    grid: Vec<f64>,
    nodes: Vec<(f64, f64)>,
}

impl DiscretizedCollisions {
    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn nodes(&self) -> &[(f64, f64)] {
        &self.nodes
    }

    /// Quadrature approximant `Φ_n(x) = Σ w_n cos(q_n x)`.
    pub fn approximate_characteristic(&self, x: f64) -> f64 {
        self.nodes.iter().map(|&(q, w)| w * (q * x).cos()).sum()
    }

    /// Largest `|Φ_n - Φ|` over all grid separations.
    pub fn max_characteristic_error(&self) -> f64 {
        let mut worst = 0.0_f64;
        for &xi in &self.grid {
            for &xj in &self.grid {
                let dx = xi - xj;
                worst = worst.max((self.approximate_characteristic(dx) - self.law.characteristic_function(dx)).abs());
            }
        }
        worst
    }

    /// `-Λ [1 - Φ_n(x_i - x_j)] ρ_ij`.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.grid.len();
        if rho.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: rho.dim(),
            });
        }
        let x = &self.grid;
        Ok(rho.hadamard_real(|i, j| -self.law.rate * (1.0 - self.approximate_characteristic(x[i] - x[j]))))
    }

    /// Integrates `dρ/dt = L ρ` on `t_grid` with the adaptive Runge–Kutta
    /// solver; returns one state per grid time.
    pub fn evolve(
        &self,
        rho0: &PositionDensityMatrix,
        t_grid: &[f64],
        spec: &OdeSpec,
    ) -> Result<Vec<PositionDensityMatrix>> {
        let n = self.grid.len();
        if rho0.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: rho0.len(),
            });
        }
        let m = n * n;
        let v = rho0.matrix().vec();
        let y0: Vec<f64> = v.iter().map(|z| z.re).chain(v.iter().map(|z| z.im)).collect();
        let unpack = |y: &[f64]| {
            let v: Vec<Complex64> = (0..m).map(|k| Complex64::new(y[k], y[m + k])).collect();
            ComplexMatrix::unvec(&v, n)
        };
        let raw = ode_solve(
            |_, y: &[f64], dy: &mut [f64]| {
                let d = self.apply(&unpack(y))?.vec();
                for (k, z) in d.iter().enumerate() {
                    dy[k] = z.re;
                    dy[m + k] = z.im;
                }
                Ok(())
            },
            &y0,
            t_grid,
            spec,
        )?;
        raw.iter()
            .map(|y| PositionDensityMatrix::with_weight(self.grid.clone(), rho0.weight(), unpack(y)))
            .collect()
    }

    /// As a [`GkslGenerator`] with diagonal unitary jump operators and
    /// Kossakowski matrix `diag(Λ w_n)`.
    pub fn to_generator(&self) -> Result<GkslGenerator> {
        let n = self.grid.len();
        let pairs = self
            .nodes
            .iter()
            .map(|&(q, w)| {
                let u = ComplexMatrix::diagonal(
                    &self
                        .grid
                        .iter()
                        .map(|&x| Complex64::from_polar(1.0, q * x))
                        .collect::<Vec<_>>(),
                );
                (u, self.law.rate * w)
            })
            .collect();
        GkslGenerator::with_rates(ComplexMatrix::zeros(n), pairs)
    }

    /// Diagonal superoperator in column-stacked coordinates.
    pub fn to_superoperator(&self) -> Superoperator {
        let n = self.grid.len();
        let diag: Vec<Complex64> = (0..n * n)
            .map(|k| {
                let (i, j) = (k % n, k / n);
                let dx = self.grid[i] - self.grid[j];
                Complex64::new(-self.law.rate * (1.0 - self.approximate_characteristic(dx)), 0.0)
            })
            .collect();
        Superoperator::from_matrix(n, ComplexMatrix::diagonal(&diag)).expect("dimensions consistent by construction")
    }
}

pub fn build_discretized_generator(
    law: &MomentumTransferLaw,
    grid: &[f64],
    n_q: usize,
) -> Result<DiscretizedCollisions> {
    validate_grid(grid)?;
    let nodes = law.nodes(n_q)?;
    let gen = DiscretizedCollisions {
        law: *law,
        grid: grid.to_vec(),
        nodes,
    };
    let err = gen.max_characteristic_error();
    if err > SUPPORT_TOL {
        return Err(Error::QuadratureSupport {
            reason: format!("max |Φ_n - Φ| = {err:.3e} on the grid separations; increase n_q or refine the grid"),
        });
    }
    Ok(gen)
}
