//! Master-equation models of decoherence.
//!
//! * [`gksl`]: generators in Gorini–Kossakowski–Sudarshan–Lindblad form, their
//!   superoperator and Choi representations, complete-positivity checks and
//!   propagation (semigroup and time-dependent rates).
//! * [`dephasing`]: the exactly solvable two-level dephasing model driven by
//!   an Ohmic-family bath spectral density.
//! * [`collisional`]: collisional decoherence in the position representation
//!   and the ideal-gas dynamic structure factor.
//! * [`numcore`]: the dense linear algebra, quadrature and ODE machinery
//!   underneath.
//!
//! Units: `ħ = 1`. Energies and frequencies share one unit, times its inverse.

pub mod collisional;
pub mod dephasing;
pub mod error;
pub mod gksl;
pub mod numcore;
pub mod par;
pub mod sample;

pub use error::{Error, Result};
pub use par::Execution;
