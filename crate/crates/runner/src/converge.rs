//! Convergence sweeps against an RK4 reference.

use std::collections::HashMap;
use std::fmt::Write as _;

use erpic::diagnostics::{compute_moments, relative_error, MomentSet};
use erpic::integrator::{regime_coefficients, Branch, Scheme, SimState, Stepper};
use erpic::Exec;

use crate::config::SimulationConfig;
use crate::run::{prepare, RunError};

/// Base configuration swept over `eps_list x dt_list`, compared with RK4 at `dt_ref`.
#[derive(Debug, Clone)]
pub struct ConvergenceSpec {
    pub base: SimulationConfig,
    pub eps_list: Vec<f64>,
    pub dt_list: Vec<f64>,
    pub dt_ref: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub eps: f64,
    pub dt: f64,
    /// `err_rho + err_rho_v` at the horizon.
    pub error: f64,
    /// `log(err_prev / err) / log(dt_prev / dt)`; `None` on the first row of each eps.
    pub order: Option<f64>,
    pub max_gamma: f64,
    /// `max_n |H_n - H_0| / |H_0|`.
    pub max_energy_error: f64,
    /// Largest `|H_{n+1} - H_n| / |H_0|` over steps on the real-root branch.
    pub max_real_root_jump: f64,
    pub non_real_root_steps: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceCheck {
    pub eps: f64,
    /// Relative moment error between RK4 at `2 dt_ref` and at `dt_ref`.
    pub drift: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
    pub references: Vec<ReferenceCheck>,
}

impl ConvergenceTable {
    /// `errors.csv` contents.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("eps,dt,err_rho_rhov,order\n");
        for r in &self.rows {
            let order = r.order.map(|o| format!("{o:.4}")).unwrap_or_default();
            let _ = writeln!(s, "{:?},{:?},{:e},{}", r.eps, r.dt, r.error, order);
        }
        s
    }

    pub fn rows_for(&self, eps: f64) -> impl Iterator<Item = &ConvergenceRow> {
        self.rows.iter().filter(move |r| r.eps == eps)
    }
}

/// Reference moments (and their halving drift) keyed by configuration.
#[derive(Debug, Default)]
pub struct ReferenceCache {
    entries: HashMap<String, (MomentSet, f64)>,
}

fn reference_key(config: &SimulationConfig, dt_ref: f64) -> String {
    let mut c = config.clone();
    c.scheme = Scheme::Rk4Ref;
    c.dt = dt_ref;
    c.output.snapshots.clear();
    c.render()
}

fn steps_for(horizon: f64, dt: f64) -> Result<u64, RunError> {
    let n = (horizon / dt).round();
    if n < 1.0 || ((n * dt - horizon).abs() > 1e-9 * horizon) {
        return Err(RunError::Invalid(format!(
            "dt = {dt} does not divide the horizon {horizon} into whole steps"
        )));
    }
    Ok(n as u64)
}

fn run_scheme(stepper: &Stepper, s0: &SimState, scheme: Scheme, dt: f64, n: u64) -> Result<(SimState, [f64; 3], usize), RunError> {
    let mut s = s0.clone();
    let h0 = s0.energy;
    let (mut max_gamma, mut max_err, mut max_jump) = (0.0f64, 0.0f64, 0.0f64);
    let mut non_real = 0;
    for k in 0..n {
        let before = s.energy;
        let rec = stepper
            .step(scheme, &mut s, dt)
            .map_err(|source| RunError::Numerical {
                step: k + 1,
                source,
                dump: None,
            })?;
        max_gamma = max_gamma.max(rec.gamma.abs());
        max_err = max_err.max((rec.energy - h0).abs() / h0.abs());
        match rec.branch {
            Branch::RealRoot => max_jump = max_jump.max((rec.energy - before).abs() / h0.abs()),
            _ => non_real += 1,
        }
    }
    Ok((s, [max_gamma, max_err, max_jump], non_real))
}

/// Runs the sweep; references are reused through `cache`.
pub fn run_convergence(
    spec: &ConvergenceSpec,
    exec: Exec,
    cache: &mut ReferenceCache,
) -> Result<ConvergenceTable, RunError> {
    if spec.dt_list.is_empty() || spec.eps_list.is_empty() {
        return Err(RunError::Invalid("eps and dt lists must be non-empty".into()));
    }
    let min_dt = spec.dt_list.iter().copied().fold(f64::INFINITY, f64::min);
    if !(spec.dt_ref > 0.0 && spec.dt_ref <= min_dt / 50.0 * (1.0 + 1e-12)) {
        return Err(RunError::Invalid(format!(
            "dt_ref = {} must be positive and at most min(dt) / 50 = {}",
            spec.dt_ref,
            min_dt / 50.0
        )));
    }
    if spec.base.scheme == Scheme::Rk4Ref {
        return Err(RunError::Invalid("the swept scheme must be RS1 or RS2".into()));
    }
    let mut rows = Vec::new();
    let mut references = Vec::new();
    for &eps in &spec.eps_list {
        let mut config = spec.base.clone();
        config.eps = eps;
        regime_coefficients(config.regime, eps).map_err(|e| RunError::Invalid(e.to_string()))?;
        let horizon = config.horizon();
        let (stepper, s0, grid) = prepare(&config, exec)?;
        let key = reference_key(&config, spec.dt_ref);
        if !cache.entries.contains_key(&key) {
            let n_ref = steps_for(horizon, spec.dt_ref)?;
            let (fine, ..) = run_scheme(&stepper, &s0, Scheme::Rk4Ref, spec.dt_ref, n_ref)?;
            let (coarse, ..) = run_scheme(&stepper, &s0, Scheme::Rk4Ref, 2.0 * spec.dt_ref, n_ref / 2)?;
            let m_fine = compute_moments(&fine.ensemble, &grid, fine.time, exec).map_err(RunError::Setup)?;
            let m_coarse = compute_moments(&coarse.ensemble, &grid, coarse.time, exec).map_err(RunError::Setup)?;
            let drift = relative_error(&m_coarse, &m_fine).map_err(RunError::Setup)?;
            cache.entries.insert(key.clone(), (m_fine, drift));
        }
        let (reference, drift) = &cache.entries[&key];
        let mut eps_rows: Vec<ConvergenceRow> = Vec::new();
        for &dt in &spec.dt_list {
            let n = steps_for(horizon, dt)?;
            let (s, [max_gamma, max_energy_error, max_real_root_jump], non_real) =
                run_scheme(&stepper, &s0, config.scheme, dt, n)?;
            let m = compute_moments(&s.ensemble, &grid, s.time, exec).map_err(RunError::Setup)?;
            let error = relative_error(&m, reference).map_err(RunError::Setup)?;
            let order = eps_rows
                .last()
                .map(|p: &ConvergenceRow| (p.error / error).ln() / (p.dt / dt).ln());
            eps_rows.push(ConvergenceRow {
                eps,
                dt,
                error,
                order,
                max_gamma,
                max_energy_error,
                max_real_root_jump,
                non_real_root_steps: non_real,
            });
        }
        let min_error = eps_rows.iter().map(|r| r.error).fold(f64::INFINITY, f64::min);
        if !(*drift <= 0.01 * min_error) {
            return Err(RunError::ReferenceNotConverged {
                eps,
                drift: *drift,
                min_error,
            });
        }
        references.push(ReferenceCheck { eps, drift: *drift });
        rows.extend(eps_rows);
    }
    Ok(ConvergenceTable { rows, references })
}
