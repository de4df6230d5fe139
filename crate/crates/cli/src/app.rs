use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use decohere::Execution;
use serde::Serialize;
use serde_json::Value;

use crate::error::{CliError, CliResult};
use crate::report::InvariantReport;
use crate::run::{check_cp, run_scenario};
use crate::scenario::{canonical_param_path, load_scenario, Scenario};

pub const SEED_VAR: &str = "DECOHERE_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "decohere",
    version,
    about = "Run decoherence scenarios and certify their invariants"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a scenario, writing its CSV time series and invariant report.
    Run { scenario: PathBuf },
    /// Check complete positivity of the scenario's dynamical map.
    CheckCp {
        scenario: PathBuf,
        /// Comma-separated times.
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        times: Vec<f64>,
        /// Also write the report here (it is always printed).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run the scenario once per value of one numeric parameter.
    Sweep {
        scenario: PathBuf,
        /// Dotted path, e.g. `spectral.s` or `time.t_max`.
        #[arg(long)]
        param: String,
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        values: Vec<f64>,
    },
}

/// What a command produced, for the exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Passed,
    Violated,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Passed => 0,
            Outcome::Violated => 1,
        }
    }
}

pub fn seed_from_env() -> CliResult<Option<u64>> {
    match std::env::var(SEED_VAR) {
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(CliError::Usage(format!("{SEED_VAR}: {e}"))),
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("{SEED_VAR} must be an unsigned integer, got '{s}'"))),
    }
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    let err = |source| CliError::Write {
        path: path.to_path_buf(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(err)?;
    }
    std::fs::write(path, contents).map_err(err)
}

fn outcome(report: &InvariantReport) -> Outcome {
    if report.passed() {
        Outcome::Passed
    } else {
        for v in &report.violations {
            eprintln!("violation: {v}");
        }
        Outcome::Violated
    }
}

pub fn execute(cli: Cli) -> CliResult<Outcome> {
    let seed = seed_from_env()?;
    match cli.command {
        Command::Run { scenario } => {
            let (s, base) = load_scenario(&scenario)?;
            let (csv, report_path) = s.resolve_outputs(&base);
            let out = run_scenario(&s, Execution::default(), seed)?;
            write_file(&csv, &out.table.to_csv())?;
            write_file(&report_path, &out.report.to_json_pretty())?;
            println!("wrote {} and {}", csv.display(), report_path.display());
            Ok(outcome(&out.report))
        }
        Command::CheckCp {
            scenario,
            times,
            report,
        } => {
            let (s, _) = load_scenario(&scenario)?;
            let r = check_cp(&s, &times, Execution::default(), seed)?;
            let json = r.to_json_pretty();
            print!("{json}");
            if let Some(path) = report {
                write_file(&path, &json)?;
            }
            Ok(outcome(&r))
        }
        Command::Sweep {
            scenario,
            param,
            values,
        } => sweep(&scenario, &param, &values, seed),
    }
}

#[derive(Debug, Serialize)]
struct ManifestEntry {
    value: Value,
    csv_path: Option<PathBuf>,
    report_path: Option<PathBuf>,
    passed: bool,
    violations: Vec<String>,
    error: Option<String>,
}

#[derive(Debug, Serialize)]
struct Manifest {
    scenario: PathBuf,
    parameter: String,
    entries: Vec<ManifestEntry>,
}

fn suffixed(path: &Path, tag: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let name = match path.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{stem}_{tag}.{ext}"),
        None => format!("{stem}_{tag}"),
    };
    path.with_file_name(name)
}

fn sweep(path: &Path, param: &str, values: &[f64], seed: Option<u64>) -> CliResult<Outcome> {
    let (base_scenario, base) = load_scenario(path)?;
    let canonical = canonical_param_path(param)?.join(".");
    let tag_root = canonical.trim_start_matches("parameters.").replace('.', "-");

    // every instance is validated before any of them runs
    let instances: Vec<(usize, Scenario)> = values
        .iter()
        .enumerate()
        .map(|(i, &v)| base_scenario.with_param(param, v).map(|s| (i, s)))
        .collect::<CliResult<_>>()?;

    let entries = Execution::Parallel.map(&instances, |(i, s)| {
        let tag = format!("{tag_root}_{i}");
        let (csv, report) = s.resolve_outputs(&base);
        let (csv, report) = (suffixed(&csv, &tag), suffixed(&report, &tag));
        let value = s
            .to_value()
            .pointer(&format!("/{}", canonical.replace('.', "/")))
            .cloned()
            .unwrap_or(Value::Null);
        let result = run_scenario(s, Execution::Sequential, seed).and_then(|out| {
            write_file(&csv, &out.table.to_csv())?;
            write_file(&report, &out.report.to_json_pretty())?;
            Ok(out.report)
        });
        match result {
            Ok(r) => ManifestEntry {
                value,
                csv_path: Some(csv),
                report_path: Some(report),
                passed: r.passed(),
                violations: r.violations,
                error: None,
            },
            Err(e) => ManifestEntry {
                value,
                csv_path: None,
                report_path: None,
                passed: false,
                violations: Vec::new(),
                error: Some(e.to_string()),
            },
        }
    });

    let (csv0, _) = base_scenario.resolve_outputs(&base);
    let manifest_path = suffixed(&csv0.with_extension("json"), &format!("{tag_root}_sweep"));
    let ok = entries.iter().all(|e| e.passed);
    let manifest = Manifest {
        scenario: path.to_path_buf(),
        parameter: canonical,
        entries,
    };
    let mut json = serde_json::to_string_pretty(&manifest).expect("manifest serializes to JSON");
    json.push('\n');
    write_file(&manifest_path, &json)?;
    println!("wrote {}", manifest_path.display());
    for e in manifest.entries.iter().filter(|e| !e.passed) {
        eprintln!(
            "{} = {}: {}",
            manifest.parameter,
            e.value,
            e.error.clone().unwrap_or_else(|| e.violations.join("; "))
        );
    }
    Ok(if ok { Outcome::Passed } else { Outcome::Violated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn list_arguments_parse() {
        let cli = Cli::try_parse_from(["decohere", "check-cp", "s.json", "--times", "0.1,1,10"]).unwrap();
        match cli.command {
            Command::CheckCp { times, .. } => assert_eq!(times, [0.1, 1.0, 10.0]),
            other => panic!("{other:?}"),
        }
        let cli = Cli::try_parse_from([
            "decohere",
            "sweep",
            "s.json",
            "--param",
            "spectral.s",
            "--values",
            "0.5,1,2",
        ])
        .unwrap();
        assert!(matches!(cli.command, Command::Sweep { ref values, .. } if values.len() == 3));
        assert!(Cli::try_parse_from(["decohere", "check-cp", "s.json"]).is_err());
    }

    #[test]
    fn suffixes() {
        assert_eq!(suffixed(Path::new("out/a.csv"), "s_0"), PathBuf::from("out/a_s_0.csv"));
        assert_eq!(suffixed(Path::new("a"), "x"), PathBuf::from("a_x"));
    }
}
