//! Grid expansion and evaluation: applies the sweep variable to the base
//! scenario, evaluates every requested mode at every grid point for every
//! user, and collects one row per (grid point, user, mode).

use crate::config::{Mode, RunSpec, Sweep, SweepVar};
use rayon::prelude::*;
use uavfas_core::montecarlo::simulate_op;
use uavfas_core::rsma::{
    noma_outage_mc, outage_probability, outage_probability_asymptotic,
};
use uavfas_core::{Error as CoreError, FadingParams, McConfig, OpEstimate, RsmaScenario};

/// One CSV-row worth of results.
#[derive(Debug, Clone)]
pub struct Row {
    pub sweep_var: &'static str,
    pub sweep_value: f64,
    /// 1-based user index.
    pub user_index: usize,
    pub mode: Mode,
    pub op_value: Option<f64>,
    pub std_error: Option<f64>,
    pub feasible: bool,
    pub seed: u64,
}

/// Failure while evaluating a grid, tagged with the offending point.
#[derive(Debug)]
pub struct SweepError {
    pub message: String,
}

impl std::fmt::Display for SweepError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for SweepError {}

/// Applies one sweep value to the base scenario.
pub fn apply_sweep(
    base: &RsmaScenario,
    var: SweepVar,
    value: f64,
) -> Result<RsmaScenario, CoreError> {
    match var {
        SweepVar::PowerDbm => Ok(base.with_power_dbm(value)),
        SweepVar::AlphaC => base.with_alpha_c(value),
        SweepVar::NPorts => {
            let n = value as usize;
            if value.fract() != 0.0 || n == 0 {
                return Err(CoreError::InvalidParameter(format!(
                    "n_ports sweep value must be a positive integer, got {value}"
                )));
            }
            let (n1, n2) = near_square_factors(n);
            let mut next = base.clone();
            for u in &mut next.users {
                u.fas.n1 = n1;
                u.fas.n2 = n2;
                u.fas.validate()?;
            }
            Ok(next)
        }
        SweepVar::Aperture => {
            if !(value > 0.0) {
                return Err(CoreError::InvalidParameter(format!(
                    "aperture sweep value must be positive, got {value}"
                )));
            }
            let w = value.sqrt();
            let mut next = base.clone();
            for u in &mut next.users {
                u.fas.w1 = w;
                u.fas.w2 = w;
                u.fas.validate()?;
            }
            Ok(next)
        }
        SweepVar::MUser => {
            let mut next = base.clone();
            for u in &mut next.users {
                u.fading = FadingParams::new(value, u.fading.omega)?;
            }
            Ok(next)
        }
        SweepVar::ThresholdCommon => {
            if !(value > 0.0) {
                return Err(CoreError::InvalidParameter(format!(
                    "threshold sweep value must be positive, got {value}"
                )));
            }
            let mut next = base.clone();
            for u in &mut next.users {
                u.thresholds.common = value;
            }
            Ok(next)
        }
    }
}

/// Splits `n` into the most-square `n1 × n2` grid with `n1 ≤ n2`.
fn near_square_factors(n: usize) -> (usize, usize) {
    let mut best = (1, n);
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            best = (d, n / d);
        }
        d += 1;
    }
    best
}

/// Evaluates the whole grid. Grid points run concurrently; rows come back
/// in grid order. Infeasible points are flagged rather than aborting; any
/// other error carries the grid point that produced it.
pub fn evaluate(spec: &RunSpec) -> Result<Vec<Row>, SweepError> {
    let (var_label, var, values): (&'static str, Option<SweepVar>, Vec<f64>) = match &spec.sweep {
        Some(Sweep { variable, values }) => (variable.label(), Some(*variable), values.clone()),
        None => ("none", None, vec![0.0]),
    };

    let per_point: Vec<Result<Vec<Row>, SweepError>> = values
        .par_iter()
        .map(|&value| {
            let scenario = match var {
                Some(v) => apply_sweep(&spec.scenario, v, value).map_err(|e| SweepError {
                    message: format!("{var_label}={value}: {e}"),
                })?,
                None => spec.scenario.clone(),
            };
            evaluate_point(spec, &scenario, var_label, value)
        })
        .collect();

    let mut rows = Vec::new();
    for point in per_point {
        rows.extend(point?);
    }
    Ok(rows)
}

fn evaluate_point(
    spec: &RunSpec,
    scenario: &RsmaScenario,
    var_label: &'static str,
    value: f64,
) -> Result<Vec<Row>, SweepError> {
    let mut rows = Vec::new();
    for k in 0..scenario.num_users() {
        for &mode in &spec.modes {
            let result: Result<OpEstimate, CoreError> = match mode {
                Mode::Exact => outage_probability(k, scenario),
                Mode::Asymptotic => outage_probability_asymptotic(k, scenario),
                Mode::MonteCarlo => simulate_op(k, scenario, &spec.mc),
                Mode::Noma => noma_outage_mc(k, scenario, spec.mc.trials, spec.mc.seed),
            };
            let row = match result {
                Ok(est) => Row {
                    sweep_var: var_label,
                    sweep_value: value,
                    user_index: k + 1,
                    mode,
                    op_value: Some(est.value),
                    std_error: est.std_error,
                    feasible: true,
                    seed: spec.mc.seed,
                },
                Err(CoreError::Infeasible(_)) => Row {
                    sweep_var: var_label,
                    sweep_value: value,
                    user_index: k + 1,
                    mode,
                    op_value: None,
                    std_error: None,
                    feasible: false,
                    seed: spec.mc.seed,
                },
                Err(e) => {
                    return Err(SweepError {
                        message: format!(
                            "{var_label}={value}, user {}, mode {}: {e}",
                            k + 1,
                            mode.label()
                        ),
                    })
                }
            };
            rows.push(row);
        }
    }
    Ok(rows)
}

/// Scenario Monte Carlo config with CLI overrides applied.
pub fn apply_mc_overrides(mc: &McConfig, trials: Option<u64>, seed: Option<u64>) -> McConfig {
    McConfig {
        trials: trials.unwrap_or(mc.trials),
        seed: seed.unwrap_or(mc.seed),
        ..*mc
    }
}
