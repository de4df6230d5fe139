//! Exactly solvable pure-dephasing model of a two-level system coupled to a
//! thermal bosonic bath through `σ_z`.
//!
//! The bath enters only through its spectral density `J(ω)`. With `ħ = 1`:
//!
//! * bath correlation `α(t) = ∫ J(ω) [coth(βω/2) cos ωt - i sin ωt] dω`
//! * rate `γ(t) = ∫ J(ω) coth(βω/2) sin(ωt)/ω dω = Re ∫_0^t α(τ) dτ`
//! * decoherence function `Γ(t) = ∫ J(ω) coth(βω/2) (1 - cos ωt)/ω² dω = ∫_0^t γ`
//!
//! Basis convention: index 0 is the `σ_z = +1` eigenvector, labelled `|1>`;
//! index 1 is `|0>`. The coherence `<1|ρ|0>` is therefore `ρ[(0, 1)]`, and
//! under `H₀ = ω₀ σ_z` it rotates as `e^{-2iω₀t}` (the eigenvalue gap is
//! `2ω₀`).
//!
//! The master equation `dρ/dt = -i[H₀, ρ] + c(t) (σ_z ρ σ_z - ρ)` damps
//! coherences at rate `2c(t)`. [`DephasingModel::build_generator_at`] uses
//! `c(t) = γ(t)/2` so that the integrated equation reproduces
//! `|<1|ρ(t)|0>| = e^{-Γ(t)} |<1|ρ(0)|0>|` with `Γ = ∫γ`.

use num_complex::Complex64;

use crate::gksl::{DensityMatrix, GkslGenerator};
use crate::numcore::matrix::{pauli_z, ComplexMatrix};
use crate::numcore::quadrature::{
    integrate_adaptive, integrate_algebraic_left, integrate_pieces, oscillation_breakpoints, Limit,
};
use crate::numcore::QuadratureSpec;
use crate::par::Execution;
use crate::{Error, Result};

/// Upper bound on pieces produced by oscillation splitting.
const MAX_OSCILLATION_PIECES: usize = 256;

/// Ohmic-family spectral density `J(ω) = λ ω^s ω_c^{1-s} e^{-ω/ω_c}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralDensity {
    coupling: f64,
    exponent: f64,
    cutoff: f64,
}

impl SpectralDensity {
    pub fn ohmic(coupling: f64, exponent: f64, cutoff: f64) -> Result<Self> {
        if !(coupling >= 0.0 && coupling.is_finite()) {
            return Err(Error::invalid("coupling", "must be finite and >= 0"));
        }
        if !(exponent > 0.0 && exponent.is_finite()) {
            return Err(Error::invalid("exponent", "must be finite and > 0"));
        }
        if !(cutoff > 0.0 && cutoff.is_finite()) {
            return Err(Error::invalid("cutoff", "must be finite and > 0"));
        }
        Ok(SpectralDensity {
            coupling,
            exponent,
            cutoff,
        })
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn value(&self, omega: f64) -> Result<f64> {
        if omega < 0.0 || omega.is_nan() {
            return Err(Error::NegativeFrequency { omega });
        }
        Ok(self.eval(omega))
    }

    fn eval(&self, omega: f64) -> f64 {
        if omega == 0.0 {
            return 0.0;
        }
        self.coupling * (omega / self.cutoff).powf(self.exponent) * self.cutoff * (-omega / self.cutoff).exp()
    }
}

pub fn spectral_value(j: &SpectralDensity, omega: f64) -> Result<f64> {
    j.value(omega)
}

/// Inverse temperature; `Infinite` is zero temperature (`coth → 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Beta {
    Finite(f64),
    Infinite,
}

impl Beta {
    pub fn finite(beta: f64) -> Result<Self> {
        if beta.is_infinite() && beta > 0.0 {
            return Ok(Beta::Infinite);
        }
        if !(beta > 0.0) {
            return Err(Error::invalid("beta", "must be > 0"));
        }
        Ok(Beta::Finite(beta))
    }

    /// `coth(βω/2)`, exactly 1 at zero temperature.
    pub fn thermal_factor(&self, omega: f64) -> f64 {
        match *self {
            Beta::Infinite => 1.0,
            Beta::Finite(b) => 1.0 / (0.5 * b * omega).tanh(),
        }
    }

    pub fn value(&self) -> f64 {
        match *self {
            Beta::Infinite => f64::INFINITY,
            Beta::Finite(b) => b,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathSpec {
    pub beta: Beta,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DephasingModel {
    omega0: f64,
    spectral: SpectralDensity,
    bath: BathSpec,
    quadrature: QuadratureSpec,
}

/// A generator built at some time, with a flag for negative rates.
#[derive(Debug, Clone)]
pub struct GeneratorAt {
    pub generator: GkslGenerator,
    pub rate: f64,
    pub negative_rate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub t: f64,
    pub rate: f64,
    pub decoherence: f64,
}

impl DephasingModel {
    pub fn new(omega0: f64, spectral: SpectralDensity, beta: Beta) -> Result<Self> {
        if !omega0.is_finite() {
            return Err(Error::invalid("omega0", "must be finite"));
        }
        Ok(DephasingModel {
            omega0,
            spectral,
            bath: BathSpec { beta },
            quadrature: QuadratureSpec::default(),
        })
    }

    pub fn with_quadrature(mut self, spec: QuadratureSpec) -> Result<Self> {
        spec.validate()?;
        self.quadrature = spec;
        Ok(self)
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn spectral(&self) -> &SpectralDensity {
        &self.spectral
    }

    pub fn beta(&self) -> Beta {
        self.bath.beta
    }

    pub fn quadrature(&self) -> &QuadratureSpec {
        &self.quadrature
    }

    /// `J(ω) coth(βω/2)`.
    fn thermal_weight(&self, omega: f64) -> f64 {
        self.spectral.eval(omega) * self.bath.beta.thermal_factor(omega)
    }

    /// Small-ω power of `J(ω) coth(βω/2)`.
    fn infrared_exponent(&self) -> f64 {
        match self.bath.beta {
            Beta::Infinite => self.spectral.exponent,
            Beta::Finite(_) => self.spectral.exponent - 1.0,
        }
    }

    /// `∫_0^∞ f(ω) dω` for a spectral integrand with oscillation frequency `t`
    /// and small-ω power `ir_exponent`. `[0, min(1/t, ω_c)]` is integrated
    /// under a power substitution, the rest adaptively on oscillation pieces.
    fn spectral_integral<F>(&self, f: F, t: f64, ir_exponent: f64) -> Result<f64>
    where
        F: Fn(f64) -> f64,
    {
        let wc = self.spectral.cutoff;
        let upper = self.quadrature.tail_cutoff_multiplier * wc;
        let split = if t > 0.0 { (1.0 / t).min(wc) } else { wc };
        let low = integrate_algebraic_left(&f, 0.0, split, ir_exponent, &self.quadrature)?;
        let pieces = oscillation_breakpoints(split, upper, t, wc, MAX_OSCILLATION_PIECES);
        let high = integrate_pieces(&f, &pieces, &self.quadrature)?;
        Ok(low.value + high.value)
    }

    /// `α(t)`; the real part is even and the imaginary part odd in `t`.
    pub fn bath_correlation(&self, t: f64) -> Result<Complex64> {
        if !t.is_finite() {
            return Err(Error::invalid("t", "must be finite"));
        }
        let tau = t.abs();
        let re = self.spectral_integral(
            |w| self.thermal_weight(w) * (w * tau).cos(),
            tau,
            self.infrared_exponent(),
        )?;
        let im = if tau == 0.0 {
            0.0
        } else {
            -self.spectral_integral(
                |w| self.spectral.eval(w) * (w * tau).sin(),
                tau,
                self.spectral.exponent + 1.0,
            )?
        };
        Ok(Complex64::new(re, im * t.signum()))
    }

    /// `γ(t)` from the frequency integral.
    pub fn dephasing_rate(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        if t == 0.0 || self.spectral.coupling == 0.0 {
            return Ok(0.0);
        }
        self.spectral_integral(
            |w| self.thermal_weight(w) * (w * t).sin() / w,
            t,
            self.infrared_exponent(),
        )
    }

    /// `Γ(t)` from the frequency integral.
    pub fn decoherence_function(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        if t == 0.0 || self.spectral.coupling == 0.0 {
            return Ok(0.0);
        }
        let value = self.spectral_integral(
            |w| {
                let s = (0.5 * w * t).sin();
                self.thermal_weight(w) * 2.0 * s * s / (w * w)
            },
            t,
            self.infrared_exponent(),
        )?;
        Ok(value.max(0.0))
    }

    /// `Re ∫_0^t α(τ) dτ`, the time-domain route to `γ(t)`.
    pub fn dephasing_rate_time_domain(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        if t == 0.0 {
            return Ok(0.0);
        }
        let inner = |tau: f64| self.bath_correlation(tau).map(|a| a.re);
        integrate_fallible(inner, t, &self.quadrature)
    }

    /// `∫_0^t γ(τ) dτ`, the time-domain route to `Γ(t)`.
    pub fn decoherence_function_time_domain(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        if t == 0.0 {
            return Ok(0.0);
        }
        integrate_fallible(|tau| self.dephasing_rate(tau), t, &self.quadrature)
    }

    /// Predicted `<1|ρ(t)|0> = e^{-Γ(t)} e^{-2iω₀t} <1|ρ(0)|0>`.
    pub fn coherence(&self, rho0: &DensityMatrix, t: f64) -> Result<Complex64> {
        if rho0.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: rho0.dim(),
            });
        }
        let initial = rho0.matrix()[(0, 1)];
        if initial == Complex64::new(0.0, 0.0) {
            return Ok(initial);
        }
        let decay = (-self.decoherence_function(t)?).exp();
        Ok(initial * Complex64::from_polar(decay, -2.0 * self.omega0 * t))
    }

    /// `H = ω₀ σ_z`, single operator `σ_z` with Kossakowski entry `γ(t)/2`.
    ///
    /// Negative rates are allowed and flagged; the generator is then built
    /// with [`GkslGenerator::time_local`].
    pub fn build_generator_at(&self, t: f64) -> Result<GeneratorAt> {
        let rate = self.dephasing_rate(t)?;
        let h = pauli_z().scale_real(self.omega0);
        let a = ComplexMatrix::real_diagonal(&[0.5 * rate]);
        let negative_rate = rate < 0.0;
        let generator = if negative_rate {
            GkslGenerator::time_local(h, vec![pauli_z()], a)?
        } else {
            GkslGenerator::new(h, vec![pauli_z()], a)?
        };
        Ok(GeneratorAt {
            generator,
            rate,
            negative_rate,
        })
    }

    /// `γ` and `Γ` on a time grid.
    pub fn curve(&self, times: &[f64], exec: Execution) -> Result<Vec<CurvePoint>> {
        exec.try_map(times, |&t| {
            Ok(CurvePoint {
                t,
                rate: self.dephasing_rate(t)?,
                decoherence: self.decoherence_function(t)?,
            })
        })
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::invalid("t", "must be finite and >= 0"));
    }
    Ok(())
}

/// `∫_0^t g` for an integrand that may fail; the first failure is returned.
fn integrate_fallible<G>(g: G, t: f64, spec: &QuadratureSpec) -> Result<f64>
where
    G: Fn(f64) -> Result<f64>,
{
    let failure = std::cell::RefCell::new(None);
    let est = integrate_adaptive(
        |tau| match g(tau) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        },
        0.0,
        Limit::Finite(t),
        spec,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(est?.value)
}
