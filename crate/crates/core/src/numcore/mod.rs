//! Dense complex linear algebra, quadrature and ODE integration.

pub mod eigen;
pub mod expm;
pub mod matrix;
pub mod ode;
pub mod quadrature;

pub use eigen::{hermitian_eigen, hermitian_eigenvalues, HermitianEigen};
pub use expm::matrix_exp;
pub use matrix::{pauli_x, pauli_y, pauli_z, ComplexMatrix};
pub use ode::{ode_solve, OdeSpec};
pub use quadrature::{integrate_adaptive, Estimate, Limit, QuadratureSpec};
