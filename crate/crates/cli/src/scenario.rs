//! Scenario files: strict JSON, validated against the model constructors
//! before anything runs.

use std::fmt;
use std::path::{Path, PathBuf};

use decohere::collisional::{
    build_discretized_generator, DiscretizedCollisions, MomentumTransferLaw, PositionDensityMatrix,
};
use decohere::dephasing::{Beta, DephasingModel, SpectralDensity};
use decohere::gksl::{DensityMatrix, GkslGenerator};
use decohere::numcore::{ComplexMatrix, OdeSpec, QuadratureSpec};
use num_complex::Complex64;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, CliResult};

/// Default number of quadrature nodes for the discretized collision term.
pub const DEFAULT_N_Q: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Dephasing,
    Collisional,
    Gksl,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Dephasing => "dephasing",
            ModelKind::Collisional => "collisional",
            ModelKind::Gksl => "gksl",
        })
    }
}

/// A complex number written either as a bare real or as `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cplx(pub Complex64);

impl Serialize for Cplx {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.0.re, self.0.im].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cplx {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Real(f64),
            Pair([f64; 2]),
        }
        match Repr::deserialize(d).map_err(|_| de::Error::custom("expected a number or a [re, im] pair"))? {
            Repr::Real(re) => Ok(Cplx(Complex64::new(re, 0.0))),
            Repr::Pair([re, im]) => Ok(Cplx(Complex64::new(re, im))),
        }
    }
}

/// Inverse temperature; the string `"inf"` stands for zero temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BetaValue {
    Finite(f64),
    Infinite,
}

impl BetaValue {
    fn to_beta(self) -> decohere::Result<Beta> {
        match self {
            BetaValue::Infinite => Ok(Beta::Infinite),
            BetaValue::Finite(b) => Beta::finite(b),
        }
    }
}

impl Serialize for BetaValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            BetaValue::Finite(b) => s.serialize_f64(*b),
            BetaValue::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for BetaValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d).map_err(|_| de::Error::custom("expected a number or \"inf\""))? {
            Repr::Num(b) => Ok(BetaValue::Finite(b)),
            Repr::Str(s) if s == "inf" => Ok(BetaValue::Infinite),
            Repr::Str(s) => Err(de::Error::custom(format!(
                "expected a number or \"inf\", found \"{s}\""
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralParams {
    #[serde(alias = "lambda")]
    pub coupling: f64,
    #[serde(alias = "s")]
    pub exponent: f64,
    #[serde(alias = "omega_c")]
    pub cutoff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DephasingParams {
    pub omega0: f64,
    pub beta: BetaValue,
    pub spectral: SpectralParams,
    /// Amplitudes of the initial pure state; `|+>` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_state: Option<Vec<Cplx>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LawParams {
    Gaussian { sigma: f64 },
    TwoPoint { q0: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CollisionalParams {
    pub rate: f64,
    pub law: LawParams,
    /// Ascending positions; every grid point carries unit weight.
    pub grid: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_q: Option<usize>,
    /// Amplitudes on the grid; the uniform superposition when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_state: Option<Vec<Cplx>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GkslParams {
    /// Row-major.
    pub hamiltonian: Vec<Vec<Cplx>>,
    pub lindblad_ops: Vec<Vec<Vec<Cplx>>>,
    pub kossakowski: Vec<Vec<Cplx>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_state: Option<Vec<Cplx>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelParams {
    Dephasing(DephasingParams),
    Collisional(CollisionalParams),
    Gksl(GkslParams),
}

impl ModelParams {
    pub fn kind(&self) -> ModelKind {
        match self {
            ModelParams::Dephasing(_) => ModelKind::Dephasing,
            ModelParams::Collisional(_) => ModelKind::Collisional,
            ModelParams::Gksl(_) => ModelKind::Gksl,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSpec {
    pub t_max: f64,
    pub n_points: usize,
}

impl TimeSpec {
    /// `n_points` equally spaced times from 0 to `t_max` inclusive.
    pub fn grid(&self) -> Vec<f64> {
        let last = (self.n_points - 1) as f64;
        (0..self.n_points)
            .map(|k| {
                if k + 1 == self.n_points {
                    self.t_max
                } else {
                    self.t_max * k as f64 / last
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abs_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_subdivisions: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_cutoff_multiplier: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OdeOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abs_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_steps: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Numerics {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<QuadratureOverrides>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ode: Option<OdeOverrides>,
}

impl Numerics {
    pub fn quadrature_spec(&self) -> CliResult<QuadratureSpec> {
        let mut spec = QuadratureSpec::default();
        if let Some(o) = &self.quadrature {
            spec.abs_tol = o.abs_tol.unwrap_or(spec.abs_tol);
            spec.rel_tol = o.rel_tol.unwrap_or(spec.rel_tol);
            spec.max_subdivisions = o.max_subdivisions.unwrap_or(spec.max_subdivisions);
            spec.tail_cutoff_multiplier = o.tail_cutoff_multiplier.unwrap_or(spec.tail_cutoff_multiplier);
        }
        spec.validate()
            .map_err(|e| CliError::validation("numerics.quadrature", e.to_string()))?;
        Ok(spec)
    }

    pub fn ode_spec(&self) -> CliResult<OdeSpec> {
        let mut spec = OdeSpec::default();
        if let Some(o) = &self.ode {
            spec.abs_tol = o.abs_tol.unwrap_or(spec.abs_tol);
            spec.rel_tol = o.rel_tol.unwrap_or(spec.rel_tol);
            spec.initial_step = o.initial_step.unwrap_or(spec.initial_step);
            spec.max_steps = o.max_steps.unwrap_or(spec.max_steps);
        }
        spec.validate()
            .map_err(|e| CliError::validation("numerics.ode", e.to_string()))?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub csv_path: PathBuf,
    pub report_path: PathBuf,
}

/// On-disk layout; `parameters` is decoded once `model` is known.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    model: ModelKind,
    parameters: Value,
    time: TimeSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    numerics: Option<Numerics>,
    output: OutputSpec,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub model: ModelParams,
    pub time: TimeSpec,
    pub numerics: Option<Numerics>,
    pub output: OutputSpec,
}

/// Model objects built from a validated scenario.
pub enum Prepared {
    Dephasing {
        model: DephasingModel,
        rho0: DensityMatrix,
    },
    Collisional {
        law: MomentumTransferLaw,
        discretized: DiscretizedCollisions,
        rho0: PositionDensityMatrix,
    },
    Gksl {
        generator: GkslGenerator,
        rho0: DensityMatrix,
    },
}

/// Parses and fully validates a scenario document.
pub fn parse_scenario(text: &[u8]) -> CliResult<Scenario> {
    let text = std::str::from_utf8(text).map_err(|e| {
        let (line, column) = position(text, e.valid_up_to());
        CliError::Parse {
            line,
            column,
            message: "invalid UTF-8".into(),
        }
    })?;
    let mut de = serde_json::Deserializer::from_str(text);
    let raw: RawScenario = serde_path_to_error::deserialize(&mut de).map_err(|e| path_error(e, ""))?;
    de.end().map_err(|e| path_error_plain(e, ""))?;
    let scenario = Scenario::from_raw(raw)?;
    scenario.prepare()?;
    Ok(scenario)
}

/// Reads, parses and validates a scenario file; returns it with the
/// directory that relative output paths resolve against.
pub fn load_scenario(path: &Path) -> CliResult<(Scenario, PathBuf)> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let scenario = parse_scenario(&bytes)?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok((scenario, base))
}

fn position(text: &[u8], offset: usize) -> (usize, usize) {
    let before = &text[..offset];
    let line = before.iter().filter(|&&b| b == b'\n').count() + 1;
    let column = offset - before.iter().rposition(|&b| b == b'\n').map_or(0, |p| p + 1) + 1;
    (line, column)
}

fn strip_position(message: String) -> String {
    match message.rfind(" at line ") {
        Some(idx) => message[..idx].to_string(),
        None => message,
    }
}

fn join_path(prefix: &str, path: &str) -> String {
    match (prefix.is_empty(), path.is_empty() || path == ".") {
        (true, true) => "<root>".to_string(),
        (true, false) => path.to_string(),
        (false, true) => prefix.to_string(),
        (false, false) => format!("{prefix}.{path}"),
    }
}

fn path_error(e: serde_path_to_error::Error<serde_json::Error>, prefix: &str) -> CliError {
    let path = e.path().to_string();
    let inner = e.into_inner();
    if inner.is_data() {
        CliError::validation(join_path(prefix, &path), strip_position(inner.to_string()))
    } else {
        path_error_plain(inner, prefix)
    }
}

fn path_error_plain(e: serde_json::Error, prefix: &str) -> CliError {
    if e.is_data() {
        return CliError::validation(join_path(prefix, ""), strip_position(e.to_string()));
    }
    CliError::Parse {
        line: e.line(),
        column: e.column(),
        message: strip_position(e.to_string()),
    }
}

fn decode<T: for<'de> Deserialize<'de>>(value: Value, prefix: &str) -> CliResult<T> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        CliError::validation(join_path(prefix, &path), strip_position(e.into_inner().to_string()))
    })
}

fn require(ok: bool, key: &str, message: &str) -> CliResult<()> {
    if ok {
        Ok(())
    } else {
        Err(CliError::validation(key, message))
    }
}

fn finite_positive(v: f64, key: &str) -> CliResult<()> {
    require(v.is_finite() && v > 0.0, key, "must be finite and > 0")
}

fn complex_matrix(rows: &[Vec<Cplx>], key: &str) -> CliResult<ComplexMatrix> {
    let rows: Vec<Vec<Complex64>> = rows.iter().map(|r| r.iter().map(|z| z.0).collect()).collect();
    ComplexMatrix::from_rows(&rows).map_err(|e| CliError::validation(key, e.to_string()))
}

fn amplitudes(state: &[Cplx]) -> Vec<Complex64> {
    state.iter().map(|z| z.0).collect()
}

impl Scenario {
    fn from_raw(raw: RawScenario) -> CliResult<Self> {
        let model = match raw.model {
            ModelKind::Dephasing => ModelParams::Dephasing(decode(raw.parameters, "parameters")?),
            ModelKind::Collisional => ModelParams::Collisional(decode(raw.parameters, "parameters")?),
            ModelKind::Gksl => ModelParams::Gksl(decode(raw.parameters, "parameters")?),
        };
        Ok(Scenario {
            model,
            time: raw.time,
            numerics: raw.numerics,
            output: raw.output,
        })
    }

    fn to_raw(&self) -> RawScenario {
        let parameters = match &self.model {
            ModelParams::Dephasing(p) => serde_json::to_value(p),
            ModelParams::Collisional(p) => serde_json::to_value(p),
            ModelParams::Gksl(p) => serde_json::to_value(p),
        }
        .expect("parameter blocks serialize to JSON");
        RawScenario {
            model: self.model.kind(),
            parameters,
            time: self.time.clone(),
            numerics: self.numerics.clone(),
            output: self.output.clone(),
        }
    }

    /// Canonical JSON form (aliases replaced by canonical key names).
    pub fn to_value(&self) -> Value {
        serde_json::to_value(self.to_raw()).expect("scenario serializes to JSON")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("scenario serializes to JSON")
    }

    /// Decodes and validates a JSON value in scenario layout.
    pub fn from_value(value: Value) -> CliResult<Self> {
        let raw: RawScenario = decode(value, "")?;
        let scenario = Scenario::from_raw(raw)?;
        scenario.prepare()?;
        Ok(scenario)
    }

    pub fn numerics(&self) -> Numerics {
        self.numerics.clone().unwrap_or_default()
    }

    /// Checks every constraint and builds the model objects.
    pub fn prepare(&self) -> CliResult<Prepared> {
        finite_positive(self.time.t_max, "time.t_max")?;
        require(self.time.n_points >= 2, "time.n_points", "must be ≥ 2")?;
        let numerics = self.numerics();
        let quadrature = numerics.quadrature_spec()?;
        numerics.ode_spec()?;

        match &self.model {
            ModelParams::Dephasing(p) => {
                require(p.omega0.is_finite(), "parameters.omega0", "must be finite")?;
                let sp = &p.spectral;
                require(
                    sp.coupling.is_finite() && sp.coupling >= 0.0,
                    "parameters.spectral.coupling",
                    "must be ≥ 0",
                )?;
                finite_positive(sp.exponent, "parameters.spectral.exponent")?;
                finite_positive(sp.cutoff, "parameters.spectral.cutoff")?;
                if let BetaValue::Finite(b) = p.beta {
                    finite_positive(b, "parameters.beta")?;
                }
                let spectral = SpectralDensity::ohmic(sp.coupling, sp.exponent, sp.cutoff)
                    .map_err(|e| CliError::validation("parameters.spectral", e.to_string()))?;
                let beta = p
                    .beta
                    .to_beta()
                    .map_err(|e| CliError::validation("parameters.beta", e.to_string()))?;
                let model = DephasingModel::new(p.omega0, spectral, beta)
                    .and_then(|m| m.with_quadrature(quadrature))
                    .map_err(|e| CliError::validation("parameters", e.to_string()))?;
                let rho0 = match &p.initial_state {
                    None => DensityMatrix::plus(),
                    Some(state) => {
                        require(state.len() == 2, "parameters.initial_state", "must have 2 amplitudes")?;
                        DensityMatrix::pure(&amplitudes(state))
                            .map_err(|e| CliError::validation("parameters.initial_state", e.to_string()))?
                    }
                };
                Ok(Prepared::Dephasing { model, rho0 })
            }
            ModelParams::Collisional(p) => {
                finite_positive(p.rate, "parameters.rate")?;
                let law = match p.law {
                    LawParams::Gaussian { sigma } => {
                        finite_positive(sigma, "parameters.law.sigma")?;
                        MomentumTransferLaw::gaussian(p.rate, sigma)
                    }
                    LawParams::TwoPoint { q0 } => {
                        finite_positive(q0, "parameters.law.q0")?;
                        MomentumTransferLaw::two_point(p.rate, q0)
                    }
                }
                .map_err(|e| CliError::validation("parameters.law", e.to_string()))?;
                require(p.grid.len() >= 2, "parameters.grid", "must have at least 2 points")?;
                require(
                    p.grid.iter().all(|x| x.is_finite()) && p.grid.windows(2).all(|w| w[1] > w[0]),
                    "parameters.grid",
                    "must be finite and strictly ascending",
                )?;
                let n_q = p.n_q.unwrap_or(DEFAULT_N_Q);
                let discretized = build_discretized_generator(&law, &p.grid, n_q)
                    .map_err(|e| CliError::validation("parameters.n_q", e.to_string()))?;
                let rho0 = match &p.initial_state {
                    None => PositionDensityMatrix::uniform_superposition(p.grid.clone()),
                    Some(state) => PositionDensityMatrix::pure(p.grid.clone(), &amplitudes(state)),
                }
                .map_err(|e| CliError::validation("parameters.initial_state", e.to_string()))?;
                Ok(Prepared::Collisional { law, discretized, rho0 })
            }
            ModelParams::Gksl(p) => {
                let h = complex_matrix(&p.hamiltonian, "parameters.hamiltonian")?;
                require(h.dim() >= 2, "parameters.hamiltonian", "dimension must be ≥ 2")?;
                let ops = p
                    .lindblad_ops
                    .iter()
                    .enumerate()
                    .map(|(k, op)| complex_matrix(op, &format!("parameters.lindblad_ops[{k}]")))
                    .collect::<CliResult<Vec<_>>>()?;
                h.ensure_hermitian(1e-10 * h.max_abs().max(1.0))
                    .map_err(|e| CliError::validation("parameters.hamiltonian", e.to_string()))?;
                for (k, op) in ops.iter().enumerate() {
                    require(
                        op.dim() == h.dim(),
                        &format!("parameters.lindblad_ops[{k}]"),
                        "dimension must match the Hamiltonian",
                    )?;
                }
                let a = if p.kossakowski.is_empty() && ops.is_empty() {
                    ComplexMatrix::zeros(0)
                } else {
                    complex_matrix(&p.kossakowski, "parameters.kossakowski")?
                };
                let generator = GkslGenerator::new(h, ops, a)
                    .map_err(|e| CliError::validation("parameters.kossakowski", e.to_string()))?;
                let d = generator.dim();
                let rho0 = match &p.initial_state {
                    None => DensityMatrix::pure(&vec![Complex64::new(1.0, 0.0); d]),
                    Some(state) => {
                        require(
                            state.len() == d,
                            "parameters.initial_state",
                            "length must match the Hamiltonian dimension",
                        )?;
                        DensityMatrix::pure(&amplitudes(state))
                    }
                }
                .map_err(|e| CliError::validation("parameters.initial_state", e.to_string()))?;
                Ok(Prepared::Gksl { generator, rho0 })
            }
        }
    }

    pub fn resolve_outputs(&self, base: &Path) -> (PathBuf, PathBuf) {
        (base.join(&self.output.csv_path), base.join(&self.output.report_path))
    }
}

/// Canonical spelling of a sweep path: aliases replaced, rooted at the
/// parameter block unless it names `time` or `numerics`.
pub fn canonical_param_path(path: &str) -> CliResult<Vec<String>> {
    let mut segments: Vec<String> = path
        .split('.')
        .map(|s| match s {
            "lambda" => "coupling".to_string(),
            "s" => "exponent".to_string(),
            "omega_c" => "cutoff".to_string(),
            other => other.to_string(),
        })
        .collect();
    if segments.iter().any(String::is_empty) {
        return Err(CliError::Usage(format!("malformed parameter path '{path}'")));
    }
    if !matches!(segments[0].as_str(), "parameters" | "time" | "numerics") {
        segments.insert(0, "parameters".to_string());
    }
    Ok(segments)
}

impl Scenario {
    /// Copy of the scenario with one numeric entry replaced. The target must
    /// already be present and numeric (or the `"inf"` sentinel).
    pub fn with_param(&self, path: &str, value: f64) -> CliResult<Scenario> {
        let segments = canonical_param_path(path)?;
        let dotted = segments.join(".");
        let mut root = self.to_value();
        let mut slot = &mut root;
        for seg in &segments {
            slot = slot
                .get_mut(seg.as_str())
                .ok_or_else(|| CliError::Usage(format!("unknown sweep parameter '{dotted}'")))?;
        }
        let replacement = if value.is_infinite() && value > 0.0 && dotted == "parameters.beta" {
            Value::String("inf".into())
        } else if slot.is_u64() {
            if !(value >= 0.0 && value.fract() == 0.0 && value <= u64::MAX as f64) {
                return Err(CliError::validation(dotted, "must be a nonnegative integer"));
            }
            Value::from(value as u64)
        } else if slot.is_number() || slot.as_str() == Some("inf") {
            serde_json::Number::from_f64(value)
                .map(Value::Number)
                .ok_or_else(|| CliError::validation(dotted.clone(), "must be finite"))?
        } else {
            return Err(CliError::Usage(format!("sweep parameter '{dotted}' is not numeric")));
        };
        *slot = replacement;
        Scenario::from_value(root)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DEPHASING: &str = r#"{
        "model": "dephasing",
        "parameters": {
            "omega0": 0.0,
            "beta": "inf",
            "spectral": { "lambda": 1.0, "s": 1.0, "omega_c": 1.0 }
        },
        "time": { "t_max": 5.0, "n_points": 100 },
        "output": { "csv_path": "out.csv", "report_path": "out.json" }
    }"#;

    fn with(text: &str, from: &str, to: &str) -> Vec<u8> {
        assert!(text.contains(from), "{from}");
        text.replacen(from, to, 1).into_bytes()
    }

    #[test]
    fn minimal_dephasing_parses() {
        let s = parse_scenario(DEPHASING.as_bytes()).unwrap();
        let ModelParams::Dephasing(p) = &s.model else { panic!() };
        assert_eq!(p.beta, BetaValue::Infinite);
        assert_eq!(p.spectral.coupling, 1.0);
        assert_eq!(s.time.grid().len(), 100);
        assert_eq!(*s.time.grid().last().unwrap(), 5.0);
    }

    #[test]
    fn round_trip_is_identity() {
        let s = parse_scenario(DEPHASING.as_bytes()).unwrap();
        let again = parse_scenario(s.to_json_pretty().as_bytes()).unwrap();
        assert_eq!(s, again);
        assert!(s.to_json_pretty().contains("\"coupling\""));
        assert!(s.to_json_pretty().contains("\"inf\""));
    }

    #[test]
    fn negative_coupling_names_the_key() {
        let err = parse_scenario(&with(DEPHASING, "\"lambda\": 1.0", "\"lambda\": -1.0")).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert_eq!(
            err.to_string(),
            "validation error: parameters.spectral.coupling: must be ≥ 0"
        );
    }

    #[test]
    fn unknown_key_is_listed() {
        let err = parse_scenario(&with(DEPHASING, "\"lambda\": 1.0", "\"lambda_\": 1.0")).unwrap_err();
        let msg = err.to_string();
        assert!(matches!(err, CliError::Validation { .. }));
        assert!(msg.contains("lambda_"), "{msg}");

        let err = parse_scenario(&with(DEPHASING, "\"time\"", "\"extra\": 1, \"time\"")).unwrap_err();
        assert!(err.to_string().contains("extra"), "{err}");
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_scenario(&with(DEPHASING, "\"omega0\": 0.0,", "\"omega0\": 0.0,,")).unwrap_err();
        match err {
            CliError::Parse { line, column, .. } => {
                assert_eq!(line, 4);
                assert!(column > 1);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_scenario(b"{\"model\":"), Err(CliError::Parse { .. })));
        assert!(matches!(
            parse_scenario(b"\xff"),
            Err(CliError::Parse { line: 1, column: 1, .. })
        ));
    }

    #[test]
    fn beta_sentinel_is_strict() {
        let err = parse_scenario(&with(DEPHASING, "\"inf\"", "\"infinity\"")).unwrap_err();
        assert!(err.to_string().contains("parameters.beta"), "{err}");
        assert!(parse_scenario(&with(DEPHASING, "\"inf\"", "2.5")).is_ok());
        assert!(parse_scenario(&with(DEPHASING, "\"inf\"", "0")).is_err());
    }

    #[test]
    fn time_constraints() {
        let err = parse_scenario(&with(DEPHASING, "\"n_points\": 100", "\"n_points\": 1")).unwrap_err();
        assert!(err.to_string().contains("time.n_points"));
        let err = parse_scenario(&with(DEPHASING, "\"t_max\": 5.0", "\"t_max\": 0")).unwrap_err();
        assert!(err.to_string().contains("time.t_max"));
    }

    #[test]
    fn numerics_overrides_are_validated() {
        let ok = with(
            DEPHASING,
            "\"output\"",
            "\"numerics\": {\"ode\": {\"abs_tol\": 1e-10}}, \"output\"",
        );
        let s = parse_scenario(&ok).unwrap();
        assert_eq!(s.numerics().ode_spec().unwrap().abs_tol, 1e-10);
        let bad = with(
            DEPHASING,
            "\"output\"",
            "\"numerics\": {\"quadrature\": {\"abs_tol\": 1e-20}}, \"output\"",
        );
        assert!(parse_scenario(&bad)
            .unwrap_err()
            .to_string()
            .contains("numerics.quadrature"));
    }

    #[test]
    fn sweep_paths_canonicalize() {
        assert_eq!(
            canonical_param_path("spectral.s").unwrap(),
            ["parameters", "spectral", "exponent"]
        );
        assert_eq!(canonical_param_path("time.t_max").unwrap(), ["time", "t_max"]);
        let s = parse_scenario(DEPHASING.as_bytes()).unwrap();
        let t = s.with_param("spectral.s", 2.0).unwrap();
        let ModelParams::Dephasing(p) = &t.model else { panic!() };
        assert_eq!(p.spectral.exponent, 2.0);
        let t = s
            .with_param("beta", 0.5)
            .unwrap()
            .with_param("beta", f64::INFINITY)
            .unwrap();
        let ModelParams::Dephasing(p) = &t.model else { panic!() };
        assert_eq!(p.beta, BetaValue::Infinite);
        assert!(s.with_param("spectral.nope", 1.0).is_err());
        assert!(s.with_param("time.n_points", 2.5).is_err());
        assert!(matches!(
            s.with_param("spectral.lambda", -1.0),
            Err(CliError::Validation { .. })
        ));
    }

    #[test]
    fn gksl_non_psd_kossakowski_is_refused() {
        let text = r#"{
            "model": "gksl",
            "parameters": {
                "hamiltonian": [[1, 0], [0, -1]],
                "lindblad_ops": [[[0, 1], [0, 0]], [[0, 0], [1, 0]]],
                "kossakowski": [[1, 0], [0, -1]]
            },
            "time": { "t_max": 1.0, "n_points": 3 },
            "output": { "csv_path": "g.csv", "report_path": "g.json" }
        }"#;
        let err = parse_scenario(text.as_bytes()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("kossakowski"), "{err}");
    }

    #[test]
    fn collisional_law_is_tagged() {
        let text = r#"{
            "model": "collisional",
            "parameters": {
                "rate": 1.0,
                "law": { "kind": "two_point", "q0": 1.5 },
                "grid": [0.0, 1.0, 2.0],
                "n_q": 2
            },
            "time": { "t_max": 1.0, "n_points": 3 },
            "output": { "csv_path": "c.csv", "report_path": "c.json" }
        }"#;
        let s = parse_scenario(text.as_bytes()).unwrap();
        assert_eq!(parse_scenario(s.to_json_pretty().as_bytes()).unwrap(), s);
        let bad = text.replace("\"q0\": 1.5", "\"q0\": 1.5, \"sigma\": 1");
        assert!(parse_scenario(bad.as_bytes()).is_err());
        let bad = text.replace("[0.0, 1.0, 2.0]", "[0.0, 2.0, 1.0]");
        assert!(parse_scenario(bad.as_bytes())
            .unwrap_err()
            .to_string()
            .contains("parameters.grid"));
    }
}
