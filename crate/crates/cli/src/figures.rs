//! Presets regenerating the data behind each published figure. All of them
//! start from the reference operating point (κ_a = 2, κ_c = κ_d = 3,
//! γ_m = 0.01, G_a = 1.5, G_c = 2 MHz, impedance matched, φ = π/2).

use std::f64::consts::{FRAC_PI_2, PI};
use std::fs;
use std::path::{Path, PathBuf};

use optoelectro::model::sweet_spot;
use optoelectro::{Branch, SystemParams};
use serde_json::json;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{Table, Value};
use crate::sweep::{run_sweep, Axis, Observable, SweepSpec};

pub const FIGURES: std::ops::RangeInclusive<u8> = 2..=8;

/// Coupling values `G_c` drawn as separate curves in the gain sweep.
pub const FIG4_G_C: [f64; 3] = [1.5, 2.0, 2.5];
/// Mechanical damping rates `γ_m` of the thermal-robustness curves.
pub const FIG6_GAMMA_M: [f64; 3] = [1e-2, 1e-3, 1e-4];
pub const FIG8_GAMMA_M: [f64; 2] = [1e-2, 1e-4];

#[derive(Debug, Clone)]
pub struct Dataset {
    pub name: String,
    pub table: Table,
    pub parameters: serde_json::Value,
}

impl Dataset {
    /// Writes `<name>.csv` and the `<name>.json` sidecar into `dir`.
    pub fn write(&self, dir: &Path) -> Result<[PathBuf; 2], CliError> {
        fs::create_dir_all(dir)?;
        let csv = dir.join(format!("{}.csv", self.name));
        let sidecar = dir.join(format!("{}.json", self.name));
        self.table.write_csv(fs::File::create(&csv)?)?;
        let text = serde_json::to_string_pretty(&self.table.to_json(self.parameters.clone())).expect("json");
        fs::write(&sidecar, text + "\n")?;
        Ok([csv, sidecar])
    }
}

fn sweep_dataset(
    name: &str,
    figure: u8,
    cfg: &RunConfig,
    spec: SweepSpec,
    observables: &[Observable],
    columns: &[&str],
) -> Result<(Table, serde_json::Value), CliError> {
    let out = run_sweep(cfg, &spec, observables)?;
    let params = json!({ "figure": figure, "dataset": name, "config": cfg.to_json(), "sweep": spec.to_json() });
    Ok((out.table.select(columns), params))
}

fn phi_over_pi(table: &mut Table) {
    table.insert_column(1, "phi_over_pi", |r| Value::Num(r[0].as_f64().unwrap_or(f64::NAN) / PI));
}

fn prepend_constant(table: &mut Table, name: &str, value: f64) {
    table.insert_column(0, name, |_| Value::Num(value));
}

pub fn reproduce_figure(n: u8, seed: u64) -> Result<Vec<Dataset>, CliError> {
    let base = RunConfig { seed, ..RunConfig::default() };
    let mut out = Vec::new();
    match n {
        2 | 5 => {
            let t_cols = Observable::Transmission.columns();
            let (obs, cols): (Observable, Vec<&str>) = if n == 2 {
                let mut c = vec!["omega", "stable"];
                c.extend(t_cols.iter().map(String::as_str));
                (Observable::Transmission, c)
            } else {
                (Observable::Eof, vec!["omega", "stable", "e_f_ac", "e_f_ad"])
            };
            for (panel, branch) in [("a", Branch::Plus), ("b", Branch::Minus)] {
                let cfg = RunConfig { params: sweet_spot(&base.params, branch), ..base };
                let spec = SweepSpec::new(Axis::Omega, -6.0, 6.0, 241)?;
                let name = format!("fig{n}{panel}");
                let (table, parameters) = sweep_dataset(&name, n, &cfg, spec, &[obs], &cols)?;
                out.push(Dataset { name, table, parameters });
            }
        }
        3 | 7 => {
            let spec = SweepSpec::new(Axis::Phi, -PI, PI, if n == 3 { 201 } else { 101 })?;
            let (obs, cols): (Observable, &[&str]) = if n == 3 {
                (Observable::Eof, &["phi", "stable", "e_f_ac", "e_f_ad", "e_f_cd"])
            } else {
                (Observable::Witness, &WITNESS_COLUMNS_PHI)
            };
            let name = format!("fig{n}");
            let (mut table, parameters) = sweep_dataset(&name, n, &base, spec, &[obs], cols)?;
            phi_over_pi(&mut table);
            out.push(Dataset { name, table, parameters });
        }
        4 => {
            let mut tables = Vec::new();
            let mut series = Vec::new();
            for g_c in FIG4_G_C {
                let params = sweet_spot(&SystemParams { g_c, ..base.params }, Branch::Plus);
                let cfg = RunConfig { params, ..base };
                let spec = SweepSpec::new(Axis::GA, 0.0, 2.5, 101)?;
                let (mut t, p) = sweep_dataset("fig4", 4, &cfg, spec, &[Observable::Eof], &["g_a", "stable", "e_f_ac"])?;
                prepend_constant(&mut t, "g_c", g_c);
                tables.push(t);
                series.push(p);
            }
            out.push(Dataset { name: "fig4".into(), table: Table::concat(tables), parameters: json!({ "figure": 4, "series": series }) });
        }
        6 | 8 => {
            let (gammas, phi, steps, obs, cols): (&[f64], f64, usize, Observable, &[&str]) = if n == 6 {
                (&FIG6_GAMMA_M, FRAC_PI_2, 81, Observable::Eof, &["n_th", "stable", "e_f_ac"])
            } else {
                (&FIG8_GAMMA_M, 0.0, 41, Observable::Witness, &WITNESS_COLUMNS_NTH)
            };
            let mut tables = Vec::new();
            let mut series = Vec::new();
            for &gamma_m in gammas {
                let params = SystemParams { gamma_m, ..base.params }.with_phi(phi);
                let cfg = RunConfig { params, ..base };
                let spec = SweepSpec::new(Axis::NTh, 0.0, 400.0, steps)?;
                let (mut t, p) = sweep_dataset(&format!("fig{n}"), n, &cfg, spec, &[obs], cols)?;
                prepend_constant(&mut t, "gamma_m", gamma_m);
                tables.push(t);
                series.push(p);
            }
            out.push(Dataset { name: format!("fig{n}"), table: Table::concat(tables), parameters: json!({ "figure": n, "series": series }) });
        }
        _ => {
            return Err(CliError::Validation(vec![format!("figure: no preset for figure {n} (expected 2 to 8)")]));
        }
    }
    Ok(out)
}

const WITNESS_COLUMNS_PHI: [&str; 9] = [
    "phi",
    "stable",
    "de_min",
    "de_max",
    "de_mean",
    "de_fraction_negative",
    "de_witnessed",
    "de_all_negative",
    "de_refined",
];

const WITNESS_COLUMNS_NTH: [&str; 9] = [
    "n_th",
    "stable",
    "de_min",
    "de_max",
    "de_mean",
    "de_fraction_negative",
    "de_witnessed",
    "de_all_negative",
    "de_refined",
];
