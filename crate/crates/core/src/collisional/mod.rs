//! Collisional decoherence of a test particle in a gas, position
//! representation, one spatial dimension.
//!
//! Each collision transfers a random momentum `q`. With collision rate `Λ`
//! and `Φ` the characteristic function of the transfer law,
//!
//! ```text
//! dρ/dt = ∫ dq μ̃(q) [e^{iqx̂} ρ e^{-iqx̂} - ρ],      μ̃ = Λ · pdf
//! <x|ρ(t)|y> = e^{-Λ[1 - Φ(x - y)] t} <x|ρ(0)|y>
//! ```
//!
//! [`gas`] holds the ideal-gas dynamic structure factor and its
//! fluctuation–dissipation partner.

pub mod gas;
mod transfer;

pub use gas::{
    detailed_balance_ratio, fdt_response, mb_structure_factor, structure_factor_grid, sum_rule, GasSpec,
    StructureFactorValue,
};
pub use transfer::{
    build_discretized_generator, characteristic_function, decoherence_factor, evolve_exact, evolve_exact_with,
    DiscretizedCollisions, MomentumTransferLaw, PositionDensityMatrix, TransferDistribution, SUPPORT_TOL,
};
