//! Library surface of the command-line tool, split out so the integration
//! and acceptance tests can drive the same code paths as the binary.

// Trend gates are written as `!(a > b)` so a NaN comparison fails the gate
// instead of slipping past it.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod csvout;
pub mod gates;
pub mod svg;
pub mod sweep;

use config::{Mode, RunSpec};
use gates::GateResult;
use serde::Serialize;
use std::path::PathBuf;

/// Exit codes of the binary.
pub mod exit_code {
    pub const OK: i32 = 0;
    pub const CONFIG: i32 = 2;
    pub const INFEASIBLE_ONLY: i32 = 3;
    pub const GATE_FAILURE: i32 = 4;
    pub const IO: i32 = 5;
}

/// CLI-level overrides applied on top of the configuration file.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub modes: Option<Vec<String>>,
    pub literal_second_hop: bool,
}

pub fn apply_overrides(spec: &mut RunSpec, ov: &Overrides) -> Result<(), config::ConfigError> {
    if let Some(out) = &ov.out {
        spec.outputs.csv = Some(out.clone());
    }
    if let Some(svg) = &ov.svg {
        spec.outputs.svg = Some(svg.clone());
    }
    spec.mc = sweep::apply_mc_overrides(&spec.mc, ov.trials, ov.seed);
    if let Some(modes) = &ov.modes {
        let parsed = modes
            .iter()
            .map(|m| m.parse::<Mode>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(config::ConfigError)?;
        if parsed.is_empty() {
            return Err(config::ConfigError("at least one mode required".into()));
        }
        spec.modes = parsed;
    }
    if ov.literal_second_hop {
        spec.scenario.literal_second_hop = true;
    }
    Ok(())
}

/// Executes a `run`: evaluate the grid, write outputs, print a summary.
/// Returns the process exit code.
pub fn run(spec: &RunSpec) -> i32 {
    let rows = match sweep::evaluate(spec) {
        Ok(rows) => rows,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code::CONFIG;
        }
    };
    if let Some(path) = &spec.outputs.csv {
        if let Err(e) = csvout::write_csv(path, &rows) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return exit_code::IO;
        }
        println!("wrote {} rows to {}", rows.len(), path.display());
    }
    if let Some(path) = &spec.outputs.svg {
        let title = spec
            .sweep
            .as_ref()
            .map(|s| format!("outage probability vs {}", s.variable.label()))
            .unwrap_or_else(|| "outage probability".to_string());
        if let Err(e) = svg::write_svg(path, &rows, &title) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return exit_code::IO;
        }
        println!("wrote chart to {}", path.display());
    }
    if spec.outputs.csv.is_none() {
        // Smoke-run convenience: the table goes to stdout.
        print!("{}", csvout::to_csv(&rows));
    }
    summarize(&rows);
    if rows.iter().all(|r| !r.feasible) {
        eprintln!("warning: every grid point is infeasible");
        return exit_code::INFEASIBLE_ONLY;
    }
    exit_code::OK
}

fn summarize(rows: &[sweep::Row]) {
    let feasible = rows.iter().filter(|r| r.feasible).count();
    let infeasible = rows.len() - feasible;
    let mut line = format!(
        "{} rows ({feasible} feasible, {infeasible} infeasible)",
        rows.len()
    );
    let values: Vec<f64> = rows.iter().filter_map(|r| r.op_value).collect();
    if !values.is_empty() {
        let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        line.push_str(&format!("; OP range [{lo:.3e}, {hi:.3e}]"));
    }
    println!("{line}");
}

/// Machine-readable validation report.
#[derive(Debug, Serialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub gates: Vec<GateResult>,
}

/// Executes `validate`: run every gate on the configured scenario, print
/// one status line per gate to stderr and the JSON report to stdout.
pub fn validate(spec: &RunSpec) -> i32 {
    if spec.mc.trials < 10_000 {
        eprintln!(
            "warning: {} trials make the confidence-interval gates statistically meaningless; use at least 10000",
            spec.mc.trials
        );
    }
    let gates = gates::run_all(&spec.scenario, &spec.mc);
    for gate in &gates {
        eprintln!(
            "criterion {:>2} [{}] {} — {}",
            gate.id,
            gate.status_label(),
            gate.name,
            gate.detail
        );
    }
    let passed = gates.iter().all(|g| !g.blocking_failure());
    let report = ValidationReport { passed, gates };
    match serde_json::to_string_pretty(&report) {
        Ok(json) => println!("{json}"),
        Err(e) => {
            eprintln!("error: cannot serialize report: {e}");
            return exit_code::IO;
        }
    }
    if passed {
        exit_code::OK
    } else {
        exit_code::GATE_FAILURE
    }
}
