use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use erpic::Exec;
use erpic_runner::config::{from_raw, parse_raw, ConfigErrors, ConfigIssue};
use erpic_runner::converge::{run_convergence, ConvergenceSpec, ReferenceCache};
use erpic_runner::preset::{emit, preset, Scale};
use erpic_runner::run::{run_simulation, write_text, RunError};
use erpic_runner::{threads_from_env, SimulationConfig};

#[derive(Parser)]
#[command(name = "erpic", version, about = "Energy-relaxed particle-in-cell solver for magnetized Vlasov-Poisson")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a simulation from a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// `key=value`, applied after the file (repeatable).
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Print or write a named preset config.
    Preset {
        name: String,
        #[arg(long, default_value = "paper")]
        scale: String,
        /// Write the config here instead of stdout.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Sweep eps and dt against an RK4 reference and write errors.csv.
    Converge {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        eps_list: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        dt_list: Vec<f64>,
        /// RK4 reference step; defaults to min(dt) / 50.
        #[arg(long)]
        dt_ref: Option<f64>,
    },
    /// Check a config file and report every problem found.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn load(path: &PathBuf, overrides: &[String]) -> Result<SimulationConfig, RunError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        ConfigErrors(vec![ConfigIssue {
            line: None,
            message: format!("cannot read {}: {e}", path.display()),
        }])
    })?;
    let mut issues = Vec::new();
    let mut raw = parse_raw(&text, &mut issues);
    for o in overrides {
        match o.split_once('=') {
            Some((k, v)) => {
                if let Err(e) = raw.set(k.trim(), v.trim()) {
                    issues.push(e);
                }
            }
            None => issues.push(ConfigIssue {
                line: None,
                message: format!("override `{o}` is not of the form key=value"),
            }),
        }
    }
    let parsed = from_raw(&raw);
    match parsed {
        Ok(c) if issues.is_empty() => Ok(c),
        Ok(_) => Err(ConfigErrors(issues).into()),
        Err(ConfigErrors(more)) => {
            issues.extend(more);
            Err(ConfigErrors(issues).into())
        }
    }
}

fn execute(command: Command, exec: Exec) -> Result<(), RunError> {
    match command {
        Command::Run { config, overrides } => {
            let cfg = load(&config, &overrides)?;
            let out = run_simulation(&cfg, exec, true)?;
            println!(
                "{} steps, H0 = {:e}, H = {:e}, output in {}",
                out.records.len(),
                out.initial_energy,
                out.state.energy,
                cfg.output.dir.display()
            );
        }
        Command::Preset { name, scale, emit: target } => {
            let scale = Scale::parse(&scale)
                .ok_or_else(|| RunError::Invalid(format!("unknown scale `{scale}` (paper or desk)")))?;
            let cfg = preset(&name, scale).map_err(|e| RunError::Invalid(e.to_string()))?;
            let text = emit(&name, scale, &cfg);
            match target {
                Some(path) => write_text(&path, &text)?,
                None => print!("{text}"),
            }
        }
        Command::Converge {
            config,
            eps_list,
            dt_list,
            dt_ref,
        } => {
            let base = load(&config, &[])?;
            let dt_ref = dt_ref.unwrap_or_else(|| dt_list.iter().copied().fold(f64::INFINITY, f64::min) / 50.0);
            let spec = ConvergenceSpec {
                base: base.clone(),
                eps_list,
                dt_list,
                dt_ref,
            };
            let table = run_convergence(&spec, exec, &mut ReferenceCache::default())?;
            let csv = table.to_csv();
            write_text(&base.output.dir.join("errors.csv"), &csv)?;
            print!("{csv}");
        }
        Command::Validate { config } => {
            let cfg = load(&config, &[])?;
            println!(
                "ok: {} regime, {} scheme, {} steps",
                cfg.regime.name(),
                cfg.scheme.name(),
                cfg.step_count()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = threads_from_env();
    if threads > 1 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("warning: could not size the thread pool: {e}");
        }
    }
    match execute(cli.command, Exec::from_threads(threads)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
