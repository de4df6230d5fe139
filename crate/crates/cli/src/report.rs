use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Largest tolerated drift or cross-check residual.
pub const INVARIANT_TOL: f64 = 1e-6;

/// Choi eigenvalues below this fail a complete-positivity check.
pub const CP_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChoiCheck {
    pub t: f64,
    pub min_eigenvalue: f64,
    pub completely_positive: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub model: String,
    pub trace_drift_max: f64,
    pub hermiticity_drift_max: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_choi_eigenvalue: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub choi_checks: Vec<ChoiCheck>,
    pub cross_check_residuals: BTreeMap<String, f64>,
    pub violations: Vec<String>,
    pub seed: Option<u64>,
}

impl InvariantReport {
    pub fn new(model: impl Into<String>, seed: Option<u64>) -> Self {
        InvariantReport {
            model: model.into(),
            trace_drift_max: 0.0,
            hermiticity_drift_max: 0.0,
            min_choi_eigenvalue: None,
            choi_checks: Vec::new(),
            cross_check_residuals: BTreeMap::new(),
            violations: Vec::new(),
            seed,
        }
    }

    pub fn residual(&mut self, name: &str, value: f64) {
        self.cross_check_residuals.insert(name.to_string(), value);
    }

    /// Records a violation for every drift or residual above
    /// [`INVARIANT_TOL`] (or not finite) and every failed CP check.
    pub fn finalize(&mut self) {
        let mut check = |name: &str, v: f64| {
            if !(v.is_finite() && v <= INVARIANT_TOL) {
                self.violations
                    .push(format!("{name} = {v:e} exceeds {INVARIANT_TOL:e}"));
            }
        };
        check("trace_drift_max", self.trace_drift_max);
        check("hermiticity_drift_max", self.hermiticity_drift_max);
        for (name, &v) in &self.cross_check_residuals {
            check(name, v);
        }
        for c in &self.choi_checks {
            if !c.completely_positive {
                self.violations.push(format!(
                    "choi matrix at t = {} has eigenvalue {:e} below -{CP_TOL:e}",
                    c.t, c.min_eigenvalue
                ));
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes to JSON");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn violations_are_collected() {
        let mut r = InvariantReport::new("gksl", Some(3));
        r.trace_drift_max = 1e-12;
        r.residual("small", 1e-9);
        r.residual("large", 1e-3);
        r.residual("nan", f64::NAN);
        r.finalize();
        assert_eq!(r.violations.len(), 2);
        assert!(!r.passed());
    }

    #[test]
    fn json_shape() {
        let mut r = InvariantReport::new("dephasing", None);
        r.residual("gamma_two_forms", 1e-10);
        r.finalize();
        let v: serde_json::Value = serde_json::from_str(&r.to_json_pretty()).unwrap();
        assert_eq!(v["seed"], serde_json::Value::Null);
        assert!(v.get("min_choi_eigenvalue").is_none());
        assert_eq!(v["cross_check_residuals"]["gamma_two_forms"], 1e-10);
        assert_eq!(serde_json::from_value::<InvariantReport>(v).unwrap(), r);
    }
}
