//! Ideal Maxwell–Boltzmann gas in one dimension.

use std::f64::consts::PI;

use crate::numcore::quadrature::{integrate_pieces, Estimate};
use crate::numcore::QuadratureSpec;
use crate::par::Execution;
use crate::{Error, Result};

/// Above this `|βE|` the response is assembled from logarithms.
const LOG_SPACE_THRESHOLD: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasSpec {
    mass: f64,
    density: f64,
    beta: f64,
    /// Amplitude of `ṽ(q) = v₀ exp(-q² / (2σ_v²))`.
    v0: f64,
    /// Momentum-space width of `ṽ`.
    sigma_v: f64,
}

impl GasSpec {
    pub fn new(mass: f64, density: f64, beta: f64, v0: f64, sigma_v: f64) -> Result<Self> {
        for (name, v) in [
            ("mass", mass),
            ("density", density),
            ("beta", beta),
            ("v0", v0),
            ("sigma_v", sigma_v),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(name, "must be finite and > 0"));
            }
        }
        Ok(GasSpec {
            mass,
            density,
            beta,
            v0,
            sigma_v,
        })
    }

    /// Gas with unit density and interaction, for structure-factor work
    /// where only `M` and `β` matter.
    pub fn thermal(mass: f64, beta: f64) -> Result<Self> {
        Self::new(mass, 1.0, beta, 1.0, 1.0)
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn density(&self) -> f64 {
        self.density
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn interaction_ft(&self, q: f64) -> f64 {
        self.v0 * (-0.5 * q * q / (self.sigma_v * self.sigma_v)).exp()
    }

    /// `μ(q) = (2π)⁴ n |ṽ(q)|²`.
    pub fn mu(&self, q: f64) -> f64 {
        (2.0 * PI).powi(4) * self.density * self.interaction_ft(q).powi(2)
    }

    /// Recoil energy `q²/2M`; `-recoil` is where `S(q, ·)` peaks.
    pub fn recoil(&self, q: f64) -> f64 {
        q * q / (2.0 * self.mass)
    }

    /// Standard deviation of `S(q, ·)` in `E`: `|q| / sqrt(βM)`.
    pub fn energy_width(&self, q: f64) -> f64 {
        q.abs() / (self.beta * self.mass).sqrt()
    }

    fn ln_structure_factor(&self, q: f64, e: f64) -> Result<f64> {
        if q == 0.0 {
            return Err(Error::ZeroMomentumTransfer);
        }
        if !(q.is_finite() && e.is_finite()) {
            return Err(Error::invalid("q, E", "must be finite"));
        }
        let bm = self.beta * self.mass;
        let shifted = e + self.recoil(q);
        Ok(0.5 * (bm / (2.0 * PI * q * q)).ln() - bm * shifted * shifted / (2.0 * q * q))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructureFactorValue {
    pub q: f64,
    pub e: f64,
    pub value: f64,
}

/// `S(q, E) = sqrt(βM / 2πq²) exp(-βM (E + q²/2M)² / 2q²)`.
pub fn mb_structure_factor(gas: &GasSpec, q: f64, e: f64) -> Result<f64> {
    Ok(gas.ln_structure_factor(q, e)?.exp())
}

/// `S(q, E) / S(q, -E)`, formed from the exponent difference so that it
/// stays finite where both factors underflow.
pub fn detailed_balance_ratio(gas: &GasSpec, q: f64, e: f64) -> Result<f64> {
    Ok((gas.ln_structure_factor(q, e)? - gas.ln_structure_factor(q, -e)?).exp())
}

/// `χ''(q, E) = π (1 - e^{βE}) S(q, E)`; zero at `E = 0`.
pub fn fdt_response(gas: &GasSpec, q: f64, e: f64) -> Result<f64> {
    let ln_s = gas.ln_structure_factor(q, e)?;
    let be = gas.beta * e;
    if be > LOG_SPACE_THRESHOLD {
        // 1 - e^{βE} = -e^{βE} (1 - e^{-βE})
        let ln_mag = PI.ln() + be + (-(-be).exp()).ln_1p() + ln_s;
        return Ok(-ln_mag.exp());
    }
    Ok(-PI * be.exp_m1() * ln_s.exp())
}

/// `S` on the Cartesian product `qs × energies`, row-major in `q`.
pub fn structure_factor_grid(
    gas: &GasSpec,
    qs: &[f64],
    energies: &[f64],
    exec: Execution,
) -> Result<Vec<StructureFactorValue>> {
    let points: Vec<(f64, f64)> = qs.iter().flat_map(|&q| energies.iter().map(move |&e| (q, e))).collect();
    exec.try_map(&points, |&(q, e)| {
        Ok(StructureFactorValue {
            q,
            e,
            value: mb_structure_factor(gas, q, e)?,
        })
    })
}

/// `∫ S(q, E) dE` over `peak ± half_width_sigmas · σ_E`.
pub fn sum_rule(gas: &GasSpec, q: f64, half_width_sigmas: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    if q == 0.0 {
        return Err(Error::ZeroMomentumTransfer);
    }
    let center = -gas.recoil(q);
    let width = gas.energy_width(q);
    let f = |e: f64| mb_structure_factor(gas, q, e).unwrap_or(f64::NAN);
    // breakpoints every σ_E keep each panel smooth on the GK21 scale
    let n = (2.0 * half_width_sigmas).ceil().max(2.0) as usize;
    let lo = center - half_width_sigmas * width;
    let step = 2.0 * half_width_sigmas * width / n as f64;
    let points: Vec<f64> = (0..=n).map(|k| lo + step * k as f64).collect();
    integrate_pieces(&f, &points, spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> GasSpec {
        GasSpec::thermal(1.0, 1.0).unwrap()
    }

    #[test]
    fn structure_factor_values() {
        let g = unit();
        let peak = mb_structure_factor(&g, 1.0, -0.5).unwrap();
        assert!((peak - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-15);
        assert!((peak - 0.398_942).abs() < 1e-6);
        let s = mb_structure_factor(&g, 1.0, 0.5).unwrap();
        assert!((s - peak * (-0.5f64).exp()).abs() < 1e-15);
        assert!((s - 0.241_971).abs() < 1e-6);
        assert_eq!(mb_structure_factor(&g, 0.0, 0.5), Err(Error::ZeroMomentumTransfer));
    }

    #[test]
    fn sum_rule_unit_gas() {
        let est = sum_rule(&unit(), 1.0, 40.0, &QuadratureSpec::default()).unwrap();
        assert!((est.value - 1.0).abs() < 1e-8, "{est:?}");
    }

    #[test]
    fn detailed_balance_values() {
        assert_eq!(detailed_balance_ratio(&unit(), 1.0, 0.0).unwrap(), 1.0);
        let r = detailed_balance_ratio(&unit(), 1.0, 0.5).unwrap();
        assert!((r - (-0.5f64).exp()).abs() < 1e-15);
        let g2 = GasSpec::thermal(1.0, 2.0).unwrap();
        let r = detailed_balance_ratio(&g2, 1.0, 1.0).unwrap();
        assert!((r / (-2.0f64).exp() - 1.0).abs() < 1e-12);
        // both S factors underflow here
        let r = detailed_balance_ratio(&unit(), 0.01, 3.0).unwrap();
        assert!((r / (-3.0f64).exp() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn fdt_values() {
        let g = unit();
        assert_eq!(fdt_response(&g, 1.0, 0.0).unwrap(), 0.0);
        let chi = fdt_response(&g, 1.0, 0.5).unwrap();
        assert!((chi + 0.493_141).abs() < 1e-6, "{chi}");
        let anti = fdt_response(&g, 1.0, -0.5).unwrap();
        assert!((chi + anti).abs() < 1e-12);
    }

    #[test]
    fn fdt_log_branch_is_continuous() {
        let g = GasSpec::thermal(1.0, 1.0).unwrap();
        // straddle the threshold with a broad S so neither side underflows
        let q = 12.0;
        let lo = fdt_response(&g, q, LOG_SPACE_THRESHOLD - 1e-9).unwrap();
        let hi = fdt_response(&g, q, LOG_SPACE_THRESHOLD + 1e-9).unwrap();
        assert!(lo < 0.0 && hi < 0.0);
        assert!((lo / hi - 1.0).abs() < 1e-7);
        let chi = fdt_response(&g, q, 35.0).unwrap();
        let anti = fdt_response(&g, q, -35.0).unwrap();
        assert!((chi / anti + 1.0).abs() < 1e-9);
    }

    #[test]
    fn gas_validation_and_mu() {
        assert!(GasSpec::new(0.0, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(GasSpec::new(1.0, 1.0, f64::INFINITY, 1.0, 1.0).is_err());
        let g = GasSpec::new(1.0, 2.0, 1.0, 0.5, 1.0).unwrap();
        assert!((g.mu(0.0) - (2.0 * PI).powi(4) * 2.0 * 0.25).abs() < 1e-10);
        assert!(g.mu(3.0) < g.mu(1.0));
    }

    #[test]
    fn grid_ordering() {
        let vals = structure_factor_grid(&unit(), &[1.0, 2.0], &[-1.0, 0.0, 1.0], Execution::Sequential).unwrap();
        assert_eq!(vals.len(), 6);
        assert_eq!((vals[4].q, vals[4].e), (2.0, 0.0));
        assert!(vals.iter().all(|v| v.value >= 0.0));
    }
}
