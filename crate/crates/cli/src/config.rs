//! Run configuration: a flat `key = value` file (TOML syntax).
//!
//! Keys are the [`SystemParams`] field names plus `omega`, `samples` and
//! `seed`. Rates and frequencies are in MHz (i.e. `/2π`); `phi` is in
//! radians and may be written as an expression in `pi`, e.g. `phi = "-pi/2"`.
//! Missing keys keep the reference-configuration defaults.

use optoelectro::entanglement::DEFAULT_SAMPLES;
use optoelectro::model::normalize_phase;
use optoelectro::SystemParams;
use std::f64::consts::PI;
use toml::{Table, Value};

use crate::error::CliError;

pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub params: SystemParams,
    /// Probe frequency `ω_n/2π` in MHz.
    pub omega: f64,
    pub samples: usize,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { params: SystemParams::reference(), omega: 0.0, samples: DEFAULT_SAMPLES, seed: DEFAULT_SEED }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Parsed {
    pub config: RunConfig,
    /// Non-fatal adjustments, e.g. phase normalization.
    pub notices: Vec<String>,
}

/// Evaluates a product/quotient of numbers and `pi`, e.g. `3*pi/2`, `-pi/4`, `2pi`.
pub fn eval_expr(text: &str) -> Option<f64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_ascii_lowercase();
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, s.strip_prefix('+').unwrap_or(&s)),
    };
    if body.is_empty() {
        return None;
    }
    let mut parts = body.split('/');
    let product = |p: &str| -> Option<f64> {
        p.split('*').try_fold(1.0, |acc, f| {
            let v = match f.strip_suffix("pi").or_else(|| f.strip_suffix('π')) {
                Some("") => PI,
                Some(num) => num.parse::<f64>().ok()? * PI,
                None => f.parse::<f64>().ok()?,
            };
            Some(acc * v)
        })
    };
    let mut value = product(parts.next()?)?;
    for d in parts {
        value /= product(d)?;
    }
    Some(sign * value).filter(|v| v.is_finite())
}

fn as_number(value: &Value) -> Option<f64> {
    match value {
        Value::Float(f) => Some(*f),
        Value::Integer(i) => Some(*i as f64),
        Value::String(s) => eval_expr(s),
        _ => None,
    }
}

fn as_count(value: &Value) -> Option<u64> {
    match value {
        Value::Integer(i) => u64::try_from(*i).ok(),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
}

/// Parses and validates a configuration, reporting every violation at once.
pub fn validate_config(text: &str) -> Result<Parsed, CliError> {
    let table: Table = text.parse().map_err(|e: toml::de::Error| CliError::Parse(e.message().to_string()))?;
    let mut cfg = RunConfig::default();
    let mut errors = Vec::new();
    let mut notices = Vec::new();

    for (key, value) in &table {
        match key.as_str() {
            "samples" | "seed" => match as_count(value) {
                Some(n) if key == "seed" => cfg.seed = n,
                Some(0) => errors.push("samples: must be at least 1".to_string()),
                Some(n) => cfg.samples = n as usize,
                None => errors.push(format!("{key}: expected a non-negative integer, got {value}")),
            },
            _ => {
                let Some(slot) = field_mut(&mut cfg, key) else {
                    errors.push(format!("{key}: unknown key"));
                    continue;
                };
                match as_number(value) {
                    Some(x) => *slot = x,
                    None => errors.push(format!("{key}: expected a finite number or pi expression, got {value}")),
                }
            }
        }
    }

    let p = &cfg.params;
    for (field, v) in [("kappa_a", p.kappa_a), ("kappa_c", p.kappa_c), ("kappa_d", p.kappa_d)] {
        if !(v > 0.0) {
            errors.push(format!("{field}: must be > 0 (got {v})"));
        }
    }
    for (field, v) in [
        ("gamma_m", p.gamma_m),
        ("g_a", p.g_a),
        ("g_c", p.g_c),
        ("g_x", p.g_x),
        ("g_d_mag", p.g_d_mag),
        ("n_th", p.n_th),
    ] {
        if !(v >= 0.0) {
            errors.push(format!("{field}: must be >= 0 (got {v})"));
        }
    }
    if !errors.is_empty() {
        return Err(CliError::Validation(errors));
    }
    let phi = normalize_phase(cfg.params.phi);
    if phi != cfg.params.phi {
        notices.push(format!("phi = {} normalized to {} (range (-pi, pi])", cfg.params.phi, phi));
    }
    cfg.params = cfg.params.validated().map_err(|e| CliError::Validation(vec![e.to_string()]))?;
    Ok(Parsed { config: cfg, notices })
}

fn field_mut<'a>(cfg: &'a mut RunConfig, key: &str) -> Option<&'a mut f64> {
    let p = &mut cfg.params;
    Some(match key {
        "kappa_a" => &mut p.kappa_a,
        "kappa_c" => &mut p.kappa_c,
        "kappa_d" => &mut p.kappa_d,
        "gamma_m" => &mut p.gamma_m,
        "g_a" => &mut p.g_a,
        "g_c" => &mut p.g_c,
        "g_x" => &mut p.g_x,
        "g_d_mag" => &mut p.g_d_mag,
        "phi" => &mut p.phi,
        "n_th" => &mut p.n_th,
        "omega" => &mut cfg.omega,
        _ => return None,
    })
}

impl RunConfig {
    /// Serializes every key; parsing the result reproduces `self` exactly.
    pub fn to_toml(&self) -> String {
        let mut t = Table::new();
        for (k, v) in self.params.named_fields() {
            t.insert(k.into(), Value::Float(v));
        }
        t.insert("omega".into(), Value::Float(self.omega));
        t.insert("samples".into(), Value::Integer(self.samples as i64));
        let seed = i64::try_from(self.seed).map(Value::Integer).unwrap_or_else(|_| Value::String(self.seed.to_string()));
        t.insert("seed".into(), seed);
        toml::to_string(&t).expect("flat table of scalars serializes")
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut m = serde_json::Map::new();
        for (k, v) in self.params.named_fields() {
            m.insert(k.into(), v.into());
        }
        m.insert("omega".into(), self.omega.into());
        m.insert("samples".into(), self.samples.into());
        m.insert("seed".into(), self.seed.into());
        serde_json::Value::Object(m)
    }
}
