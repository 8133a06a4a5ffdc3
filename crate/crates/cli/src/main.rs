use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use optoelectro::stability::approx_condition;
use optoelectro_cli::config::{eval_expr, validate_config, RunConfig};
use optoelectro_cli::figures::reproduce_figure;
use optoelectro_cli::sweep::{evaluate_point, run_sweep, Axis, Observable, SweepSpec};
use optoelectro_cli::{CliError, Table, Value};
use serde_json::json;

#[derive(Parser)]
#[command(name = "optoelectro", version, about = "Scattering, entanglement and stability of a three-cavity optoelectromechanical interface")]
struct Cli {
    /// Flat `key = value` configuration (SystemParams fields, omega, samples, seed; MHz units).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Witness seed; overrides the config file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file (directory for reproduce-fig). Defaults to stdout / current directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn number(s: &str) -> Result<f64, String> {
    eval_expr(s).ok_or_else(|| format!("`{s}` is not a number or pi expression"))
}

#[derive(Subcommand)]
enum Command {
    /// Transmission probabilities |T_ij|^2 at one frequency.
    Transmission {
        #[arg(long, value_parser = number, allow_hyphen_values = true)]
        omega: Option<f64>,
    },
    /// Entanglement of formation for the pairs ac, ad, cd.
    Eof {
        #[arg(long, value_parser = number, allow_hyphen_values = true)]
        omega: Option<f64>,
    },
    /// Sampled tripartite witness statistics.
    Witness {
        #[arg(long, value_parser = number, allow_hyphen_values = true)]
        omega: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Routh-Hurwitz and eigenvalue stability verdicts.
    Stability,
    /// Sweep one parameter over an inclusive linear grid.
    Sweep {
        #[arg(long)]
        axis: String,
        #[arg(long, value_parser = number, allow_hyphen_values = true)]
        start: f64,
        #[arg(long, value_parser = number, allow_hyphen_values = true)]
        stop: f64,
        #[arg(long)]
        steps: usize,
        /// Comma-separated subset of transmission, eof, witness, stability.
        #[arg(long, default_value = "eof,stability")]
        observables: String,
    },
    /// Regenerate the data of a published figure (2 to 8) as CSV + JSON sidecar.
    ReproduceFig { figure: u8 },
}

fn load_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let text = match &cli.config {
        Some(path) => {
            fs::read_to_string(path).map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?
        }
        None => String::new(),
    };
    let parsed = validate_config(&text)?;
    for n in &parsed.notices {
        eprintln!("notice: {n}");
    }
    let mut cfg = parsed.config;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn single_point(cfg: &RunConfig, observables: &[Observable]) -> Result<Table, CliError> {
    let mut row = vec![Value::Num(cfg.omega)];
    row.extend(evaluate_point(&cfg.params, cfg.omega, observables, cfg.samples, cfg.seed)?);
    let mut columns = vec!["omega".to_string(), "stable".to_string()];
    columns.extend(observables.iter().flat_map(|o| o.columns()));
    Ok(Table { columns, rows: vec![row] })
}

fn emit(cli: &Cli, table: &Table, parameters: serde_json::Value) -> Result<(), CliError> {
    let mut sink: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(fs::File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    match cli.format {
        Format::Csv => table.write_csv(&mut sink)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut sink, &table.to_json(parameters)).map_err(io::Error::other)?;
            writeln!(sink)?;
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let mut cfg = load_config(cli)?;
    let with_omega = |cfg: &mut RunConfig, omega: Option<f64>| {
        if let Some(w) = omega {
            cfg.omega = w;
        }
    };
    match &cli.command {
        Command::Transmission { omega } => {
            with_omega(&mut cfg, *omega);
            emit(cli, &single_point(&cfg, &[Observable::Transmission])?, json!({ "config": cfg.to_json() }))
        }
        Command::Eof { omega } => {
            with_omega(&mut cfg, *omega);
            emit(cli, &single_point(&cfg, &[Observable::Eof])?, json!({ "config": cfg.to_json() }))
        }
        Command::Witness { omega, samples } => {
            with_omega(&mut cfg, *omega);
            if let Some(n) = samples {
                if *n == 0 {
                    return Err(CliError::Validation(vec!["samples: must be at least 1".into()]));
                }
                cfg.samples = *n;
            }
            emit(cli, &single_point(&cfg, &[Observable::Witness])?, json!({ "config": cfg.to_json() }))
        }
        Command::Stability => {
            let mut table = single_point(&cfg, &[Observable::Stability])?;
            let approx = approx_condition(&cfg.params);
            for w in &approx.warnings {
                eprintln!("notice: {w}");
            }
            table.columns.push("approx_stable".into());
            table.rows[0].push(Value::Flag(approx.stable));
            emit(cli, &table, json!({ "config": cfg.to_json() }))
        }
        Command::Sweep { axis, start, stop, steps, observables } => {
            let spec = SweepSpec::new(axis.parse::<Axis>()?, *start, *stop, *steps)?;
            let obs = observables.split(',').map(str::parse).collect::<Result<Vec<Observable>, _>>()?;
            let out = run_sweep(&cfg, &spec, &obs)?;
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            emit(cli, &out.table, json!({ "config": cfg.to_json(), "sweep": spec.to_json() }))
        }
        Command::ReproduceFig { figure } => {
            let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
            for ds in reproduce_figure(*figure, cfg.seed)? {
                for path in ds.write(&dir)? {
                    eprintln!("wrote {}", path.display());
                }
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
