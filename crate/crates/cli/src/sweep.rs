//! Grid sweeps over one parameter axis.

use std::fmt;
use std::str::FromStr;

use optoelectro::entanglement::{eof_pair, rng::derive_seed, tripartite_optimize, tripartite_witness};
use optoelectro::moments::output_covariance;
use optoelectro::scattering::transmission;
use optoelectro::stability::{is_stable_eig, is_stable_rh};
use optoelectro::{Pair, SystemParams};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{Table, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Phi,
    GA,
    Omega,
    NTh,
    GammaM,
    GC,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::Phi => "phi",
            Axis::GA => "g_a",
            Axis::Omega => "omega",
            Axis::NTh => "n_th",
            Axis::GammaM => "gamma_m",
            Axis::GC => "g_c",
        }
    }

    /// Operating point and probe frequency at axis value `x`.
    fn apply(self, cfg: &RunConfig, x: f64) -> (SystemParams, f64) {
        let mut p = cfg.params;
        let mut omega = cfg.omega;
        match self {
            Axis::Phi => p = p.with_phi(x),
            Axis::GA => p.g_a = x,
            Axis::Omega => omega = x,
            Axis::NTh => p.n_th = x,
            Axis::GammaM => p.gamma_m = x,
            Axis::GC => p.g_c = x,
        }
        (p, omega)
    }
}

impl FromStr for Axis {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "phi" => Axis::Phi,
            "g_a" => Axis::GA,
            "omega" => Axis::Omega,
            "n_th" => Axis::NTh,
            "gamma_m" => Axis::GammaM,
            "g_c" => Axis::GC,
            other => {
                return Err(CliError::Validation(vec![format!(
                    "axis: unknown axis `{other}` (expected phi, g_a, omega, n_th, gamma_m or g_c)"
                )]))
            }
        })
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Inclusive linear grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub axis: Axis,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl SweepSpec {
    pub fn new(axis: Axis, start: f64, stop: f64, steps: usize) -> Result<Self, CliError> {
        let mut errors = Vec::new();
        if steps < 2 {
            errors.push(format!("steps: must be >= 2 (got {steps})"));
        }
        if !(start.is_finite() && stop.is_finite()) {
            errors.push("start/stop: must be finite".to_string());
        } else if start == stop {
            errors.push("start/stop: must differ".to_string());
        }
        if errors.is_empty() {
            Ok(Self { axis, start, stop, steps })
        } else {
            Err(CliError::Validation(errors))
        }
    }

    pub fn values(&self) -> Vec<f64> {
        let n = (self.steps - 1) as f64;
        (0..self.steps).map(|i| self.start + (self.stop - self.start) * (i as f64 / n)).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "axis": self.axis.name(), "start": self.start, "stop": self.stop, "steps": self.steps })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observable {
    Transmission,
    Eof,
    Witness,
    Stability,
}

impl Observable {
    pub const ALL: [Observable; 4] = [Observable::Transmission, Observable::Eof, Observable::Witness, Observable::Stability];

    pub fn columns(self) -> Vec<String> {
        match self {
            Observable::Transmission => {
                (1..=4).flat_map(|i| (1..=4).map(move |j| format!("t_{i}{j}"))).collect()
            }
            Observable::Eof => Pair::ALL.iter().map(|p| format!("e_f_{p}")).collect(),
            Observable::Witness => [
                "de_min",
                "de_max",
                "de_mean",
                "de_fraction_negative",
                "de_witnessed",
                "de_all_negative",
                "de_refined",
            ]
            .map(String::from)
            .to_vec(),
            Observable::Stability => ["max_re_lambda", "rh_failing"].map(String::from).to_vec(),
        }
    }
}

impl FromStr for Observable {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        Ok(match s.trim() {
            "transmission" => Observable::Transmission,
            "eof" => Observable::Eof,
            "witness" => Observable::Witness,
            "stability" => Observable::Stability,
            other => {
                return Err(CliError::Validation(vec![format!(
                    "observables: unknown observable `{other}` (expected transmission, eof, witness or stability)"
                )]))
            }
        })
    }
}

/// Evaluates the requested observables at one operating point. The first
/// value is the stability verdict; observables of unstable points are empty.
pub fn evaluate_point(
    p: &SystemParams,
    omega: f64,
    observables: &[Observable],
    samples: usize,
    seed: u64,
) -> Result<Vec<Value>, CliError> {
    let rh = is_stable_rh(p);
    let mut row = vec![Value::Flag(rh.stable)];
    for obs in observables {
        let width = obs.columns().len();
        if !rh.stable && *obs != Observable::Stability {
            row.extend(std::iter::repeat_n(Value::Empty, width));
            continue;
        }
        match obs {
            Observable::Transmission => {
                let t = transmission(p, omega)?;
                row.extend((0..4).flat_map(|i| (0..4).map(move |j| (i, j))).map(|(i, j)| Value::Num(t.probability(i, j))));
            }
            Observable::Eof => {
                for pair in Pair::ALL {
                    row.push(Value::Num(eof_pair(p, omega, pair)?.e_f));
                }
            }
            Observable::Witness => {
                let v = output_covariance(p, omega)?;
                let w = tripartite_witness(&v, samples, seed)?;
                let refined = tripartite_optimize(&v, &w);
                row.extend([
                    Value::Num(w.min),
                    Value::Num(w.max),
                    Value::Num(w.mean),
                    Value::Num(w.fraction_negative),
                    Value::Flag(w.witnessed),
                    Value::Flag(w.all_negative),
                    Value::Num(refined.delta_e),
                ]);
            }
            Observable::Stability => {
                let max_re = is_stable_eig(p).map(|e| Value::Num(e.max_re)).unwrap_or(Value::Empty);
                let failing = rh.failing.map(|f| Value::Text(f.to_string())).unwrap_or(Value::Empty);
                row.extend([max_re, failing]);
            }
        }
    }
    Ok(row)
}

pub struct SweepOutput {
    pub table: Table,
    pub warnings: Vec<String>,
}

/// Evaluates every grid point (in parallel) and returns rows in axis order.
/// The witness seed of point `i` is derived from `(cfg.seed, i)`, so output
/// does not depend on scheduling.
pub fn run_sweep(cfg: &RunConfig, spec: &SweepSpec, observables: &[Observable]) -> Result<SweepOutput, CliError> {
    let values = spec.values();
    let mut errors = Vec::new();
    for &x in &values {
        let (p, omega) = spec.axis.apply(cfg, x);
        if let Err(e) = p.validated() {
            errors.push(format!("{}: grid value {x} gives {e}", spec.axis));
        }
        if !omega.is_finite() {
            errors.push("omega: must be finite".into());
        }
    }
    if !errors.is_empty() {
        errors.dedup();
        return Err(CliError::Validation(errors));
    }

    let rows: Vec<Vec<Value>> = values
        .par_iter()
        .enumerate()
        .map(|(i, &x)| {
            let (p, omega) = spec.axis.apply(cfg, x);
            let mut row = vec![Value::Num(x)];
            row.extend(evaluate_point(&p, omega, observables, cfg.samples, derive_seed(cfg.seed, i as u64))?);
            Ok(row)
        })
        .collect::<Result<_, CliError>>()?;

    let mut columns = vec![spec.axis.name().to_string(), "stable".to_string()];
    columns.extend(observables.iter().flat_map(|o| o.columns()));
    let mut warnings = Vec::new();
    if rows.iter().all(|r| r[1] == Value::Flag(false)) {
        warnings.push(format!("every point of the {} sweep is unstable", spec.axis));
    }
    Ok(SweepOutput { table: Table { columns, rows }, warnings })
}
