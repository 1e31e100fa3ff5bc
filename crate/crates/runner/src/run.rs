//! The simulation loop and its output files.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use erpic::diagnostics::{compute_moments, velocity_marginal, VelocityGrid};
use erpic::integrator::{regime_coefficients, ElectricModel, SimState, StepRecord, Stepper};
use erpic::mesh::{write_snapshot, Grid2D, Snapshot};
use erpic::sampling::sample_ensemble;
use erpic::Exec;

use crate::config::{ConfigErrors, SimulationConfig};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("invalid configuration:\n{0}")]
    Config(#[from] ConfigErrors),
    #[error("setup failed: {0}")]
    Setup(erpic::Error),
    #[error("step {step} failed: {source}{}", dump_note(.dump))]
    Numerical {
        step: u64,
        source: erpic::Error,
        dump: Option<PathBuf>,
    },
    #[error("reference run for eps = {eps} not converged: halving dt_ref moves the moments by {drift:.3e}, more than 1% of the smallest scheme error {min_error:.3e}")]
    ReferenceNotConverged { eps: f64, drift: f64, min_error: f64 },
    #[error("{0}")]
    Invalid(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

fn dump_note(dump: &Option<PathBuf>) -> String {
    match dump {
        Some(p) => format!(" (state dumped to {})", p.display()),
        None => String::new(),
    }
}

impl RunError {
    /// Process exit status: 2 for configuration problems, 3 for everything at run time.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) | RunError::Invalid(_) => 2,
            _ => 3,
        }
    }
}

/// Stepper and initial state for a configuration.
pub fn prepare(config: &SimulationConfig, exec: Exec) -> Result<(Stepper, SimState, Grid2D), RunError> {
    let dist = config.distribution().map_err(RunError::Setup)?;
    let grid = config.grid2d().map_err(RunError::Setup)?;
    let coeffs = regime_coefficients(config.regime, config.eps).map_err(RunError::Setup)?;
    let magnetic = config.magnetic_model();
    magnetic.validate(&dist.domain).map_err(RunError::Setup)?;
    let ensemble = sample_ensemble(&dist, config.init.particles, config.init.seed).map_err(RunError::Setup)?;
    let stepper = Stepper::new(coeffs, magnetic, ElectricModel::self_consistent(grid), exec);
    let state = stepper.init_state(ensemble).map_err(RunError::Setup)?;
    Ok((stepper, state, grid))
}

/// Result of [`run_simulation`].
#[derive(Debug)]
pub struct RunOutcome {
    pub state: SimState,
    pub records: Vec<StepRecord>,
    pub initial_energy: f64,
    /// Files written, in creation order.
    pub files: Vec<PathBuf>,
}

/// Runs a configuration; with `write` set, outputs go to `config.output.dir`.
pub fn run_simulation(config: &SimulationConfig, exec: Exec, write: bool) -> Result<RunOutcome, RunError> {
    let (stepper, mut state, grid) = prepare(config, exec)?;
    let n_steps = config.step_count();
    let h0 = state.energy;
    let mut out = if write {
        Some(Writer::create(config, &grid)?)
    } else {
        None
    };
    if let Some(w) = out.as_mut() {
        w.snapshot(&state, exec)?;
    }
    let mut pending: Vec<f64> = config.output.snapshots.iter().copied().filter(|&t| t > 0.0).collect();
    pending.sort_by(f64::total_cmp);
    pending.dedup();
    let mut records = Vec::with_capacity(n_steps as usize);
    for n in 0..n_steps {
        let rec = match stepper.step(config.scheme, &mut state, config.dt) {
            Ok(r) => r,
            Err(source) => {
                let dump = match out.as_ref() {
                    Some(w) => w.dump(&state).ok(),
                    None => None,
                };
                return Err(RunError::Numerical {
                    step: n + 1,
                    source,
                    dump,
                });
            }
        };
        if let Some(w) = out.as_mut() {
            w.record(&rec, h0)?;
            let tol = 1e-9 * config.dt;
            if pending.first().is_some_and(|&t| state.time >= t - tol) {
                while pending.first().is_some_and(|&t| state.time >= t - tol) {
                    pending.remove(0);
                }
                w.snapshot(&state, exec)?;
            }
        }
        records.push(rec);
    }
    let files = match out {
        Some(w) => w.finish(config, n_steps, h0, &state)?,
        None => Vec::new(),
    };
    Ok(RunOutcome {
        state,
        records,
        initial_energy: h0,
        files,
    })
}

struct Writer {
    dir: PathBuf,
    grid: Grid2D,
    energy: Option<BufWriter<File>>,
    moments: bool,
    marginal: bool,
    files: Vec<PathBuf>,
}

impl Writer {
    fn create(config: &SimulationConfig, grid: &Grid2D) -> Result<Self, RunError> {
        let dir = config.output.dir.clone();
        fs::create_dir_all(&dir)?;
        let mut files = Vec::new();
        let energy = if config.output.energy {
            let path = dir.join("energy.csv");
            let mut f = BufWriter::new(File::create(&path)?);
            writeln!(f, "step,time,H,relH_err,gamma,branch,discriminant")?;
            files.push(path);
            Some(f)
        } else {
            None
        };
        Ok(Self {
            dir,
            grid: *grid,
            energy,
            moments: config.output.moments,
            marginal: config.output.marginal,
            files,
        })
    }

    fn record(&mut self, r: &StepRecord, h0: f64) -> Result<(), RunError> {
        if let Some(f) = self.energy.as_mut() {
            let rel = if h0 != 0.0 { (r.energy - h0).abs() / h0.abs() } else { f64::NAN };
            writeln!(
                f,
                "{},{:e},{:e},{:e},{:e},{},{:e}",
                r.step_index,
                r.time,
                r.energy,
                rel,
                r.gamma,
                r.branch.code(),
                r.discriminant
            )?;
        }
        Ok(())
    }

    fn write_snap(&mut self, name: String, snap: &Snapshot) -> Result<(), RunError> {
        let path = self.dir.join(name);
        let mut f = BufWriter::new(File::create(&path)?);
        write_snapshot(&mut f, snap).map_err(RunError::Setup)?;
        f.flush()?;
        self.files.push(path);
        Ok(())
    }

    fn snapshot(&mut self, state: &SimState, exec: Exec) -> Result<(), RunError> {
        let m = compute_moments(&state.ensemble, &self.grid, state.time, exec).map_err(RunError::Setup)?;
        let step = state.step_index;
        self.write_snap(format!("rho_step{step:06}.csv"), &Snapshot::from_field(&m.rho, state.time))?;
        if self.moments {
            self.write_snap(format!("rhov_step{step:06}.csv"), &Snapshot::from_field(&m.rho_v, state.time))?;
        }
        if self.marginal {
            let chi = velocity_marginal(&state.ensemble, VelocityGrid::default());
            let snap = Snapshot {
                nx: chi.grid.n1,
                ny: chi.grid.n2,
                bounds: chi.grid.bounds,
                time: state.time,
                values: chi.values,
            };
            self.write_snap(format!("chi_step{step:06}.csv"), &snap)?;
        }
        Ok(())
    }

    fn dump(&self, state: &SimState) -> std::io::Result<PathBuf> {
        let path = self.dir.join("state_dump.bin");
        let mut f = BufWriter::new(File::create(&path)?);
        state
            .ensemble
            .write_binary(&mut f)
            .map_err(|e| std::io::Error::other(e.to_string()))?;
        f.flush()?;
        Ok(path)
    }

    fn finish(mut self, config: &SimulationConfig, steps: u64, h0: f64, state: &SimState) -> Result<Vec<PathBuf>, RunError> {
        if let Some(mut f) = self.energy.take() {
            f.flush()?;
        }
        let path = self.dir.join("manifest.json");
        let manifest = manifest(config, steps, h0, state);
        fs::write(&path, serde_json::to_string_pretty(&manifest).expect("json value") + "\n")?;
        self.files.push(path);
        Ok(self.files)
    }
}

fn manifest(config: &SimulationConfig, steps: u64, h0: f64, state: &SimState) -> serde_json::Value {
    let rescaled = config.regime.is_rescaled();
    serde_json::json!({
        "program": "erpic",
        "version": env!("CARGO_PKG_VERSION"),
        "seed": config.init.seed,
        "scheme": config.scheme.name(),
        "regime": config.regime.name(),
        "time_variable": if rescaled { "tau" } else { "t" },
        // physical time t = factor * clock time
        "physical_time_factor": if rescaled { config.eps } else { 1.0 },
        "steps": steps,
        "final_clock_time": state.time,
        "final_physical_time": if rescaled { config.eps * state.time } else { state.time },
        "initial_energy": h0,
        "final_energy": state.energy,
        "config": config.render(),
    })
}

/// Writes `text` to `path`, creating parent directories.
pub fn write_text(path: &Path, text: &str) -> std::io::Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, text)
}
