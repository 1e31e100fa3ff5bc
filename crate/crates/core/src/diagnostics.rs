//! Observables and error norms.

use crate::ensemble::ParticleEnsemble;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::integrator::{SimState, Stepper, StepRecord};
use crate::mesh::{bspline_weights, deposit, interpolate_scalar, Grid2D, ScalarField};

/// Total energy of a state recomputed from its stored field.
pub fn total_energy(state: &SimState, stepper: &Stepper) -> Result<f64> {
    stepper.total_energy(state)
}

/// Density `rho` and kinetic-energy density `rho_v` on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSet {
    pub rho: ScalarField,
    pub rho_v: ScalarField,
    pub time: f64,
}

pub fn compute_moments(ensemble: &ParticleEnsemble, grid: &Grid2D, time: f64, exec: Exec) -> Result<MomentSet> {
    let rho = deposit(grid, &ensemble.positions, &ensemble.weights, exec)?;
    let energy_weights: Vec<f64> = ensemble
        .velocities
        .iter()
        .zip(&ensemble.weights)
        .map(|(v, w)| w * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]))
        .collect();
    let rho_v = deposit(grid, &ensemble.positions, &energy_weights, exec)?;
    Ok(MomentSet { rho, rho_v, time })
}

/// Cell-centred velocity grid: `n1 x n2` cells over `[lo1, hi1] x [lo2, hi2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocityGrid {
    pub n1: usize,
    pub n2: usize,
    pub bounds: [f64; 4],
}

impl Default for VelocityGrid {
    fn default() -> Self {
        Self {
            n1: 64,
            n2: 64,
            bounds: [-6.0, 6.0, -6.0, 6.0],
        }
    }
}

impl VelocityGrid {
    pub fn dv1(&self) -> f64 {
        (self.bounds[1] - self.bounds[0]) / self.n1 as f64
    }

    pub fn dv2(&self) -> f64 {
        (self.bounds[3] - self.bounds[2]) / self.n2 as f64
    }

    /// Velocity at the centre of cell `(i, j)`.
    pub fn center(&self, i: usize, j: usize) -> [f64; 2] {
        [
            self.bounds[0] + (i as f64 + 0.5) * self.dv1(),
            self.bounds[2] + (j as f64 + 0.5) * self.dv2(),
        ]
    }
}

/// Deposited velocity marginal `chi(v)`, values indexed `i + n1 j`.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityMarginal {
    pub grid: VelocityGrid,
    pub values: Vec<f64>,
    /// Particles whose stencil leaves the box; their mass is partly dropped.
    pub escapees: usize,
}

impl VelocityMarginal {
    /// `dv1 dv2 sum chi`.
    pub fn mass(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.dv1() * self.grid.dv2()
    }

    /// Cell with the largest value.
    pub fn argmax(&self) -> (usize, usize) {
        let k = self
            .values
            .iter()
            .enumerate()
            .fold(0, |best, (k, &v)| if v > self.values[best] { k } else { best });
        (k % self.grid.n1, k / self.grid.n1)
    }
}

/// Non-periodic stencil start and weights, or `None` if it leaves `[0, n)`.
fn open_stencil(u: f64, n: usize) -> Option<(usize, [f64; 6])> {
    let i0 = u.floor();
    let first = i0 - 2.0;
    if !(first >= 0.0 && i0 + 3.0 <= n as f64 - 1.0) {
        return None;
    }
    let w = bspline_weights(u - i0).ok()?;
    Some((first as usize, w))
}

/// Quintic deposition of particle weights in velocity space.
pub fn velocity_marginal(ensemble: &ParticleEnsemble, vgrid: VelocityGrid) -> VelocityMarginal {
    let (n1, n2) = (vgrid.n1, vgrid.n2);
    let (dv1, dv2) = (vgrid.dv1(), vgrid.dv2());
    let mut values = vec![0.0; n1 * n2];
    let mut escapees = 0;
    for (v, &w) in ensemble.velocities.iter().zip(&ensemble.weights) {
        // node coordinate of the cell centres
        let u1 = (v[0] - vgrid.bounds[0]) / dv1 - 0.5;
        let u2 = (v[1] - vgrid.bounds[2]) / dv2 - 0.5;
        match (open_stencil(u1, n1), open_stencil(u2, n2)) {
            (Some((i0, wx)), Some((j0, wy))) => {
                for (b, wyb) in wy.iter().enumerate() {
                    let row = (j0 + b) * n1;
                    for (a, wxa) in wx.iter().enumerate() {
                        values[row + i0 + a] += w * wyb * wxa;
                    }
                }
            }
            _ => escapees += 1,
        }
    }
    let inv = 1.0 / (dv1 * dv2);
    for x in &mut values {
        *x *= inv;
    }
    VelocityMarginal {
        grid: vgrid,
        values,
        escapees,
    }
}

/// `|rho - rho_ref|_inf / |rho_ref|_inf + |rho_v - rho_v_ref|_inf / |rho_v_ref|_inf`.
pub fn relative_error(num: &MomentSet, reference: &MomentSet) -> Result<f64> {
    if num.rho.grid != reference.rho.grid || num.rho_v.grid != reference.rho_v.grid {
        return Err(Error::Dimension("moment sets live on different grids".into()));
    }
    let ratio = |a: &ScalarField, b: &ScalarField, what: &str| -> Result<f64> {
        let denom = b.max_abs();
        if denom == 0.0 {
            return Err(Error::OutOfRange(format!("reference {what} vanishes")));
        }
        let diff = a.values.iter().zip(&b.values).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        Ok(diff / denom)
    };
    Ok(ratio(&num.rho, &reference.rho, "rho")? + ratio(&num.rho_v, &reference.rho_v, "rho_v")?)
}

/// `|H_n - H_0| / |H_0|` for each record.
pub fn energy_error_series(h0: f64, records: &[StepRecord]) -> Result<Vec<f64>> {
    if h0 == 0.0 || !h0.is_finite() {
        return Err(Error::OutOfRange(format!("initial energy {h0} cannot normalise errors")));
    }
    Ok(records.iter().map(|r| (r.energy - h0).abs() / h0.abs()).collect())
}

/// Azimuthal Fourier power of `field` on an annulus around `center`.
///
/// The field is sampled on `n_r` radii in `[r_min, r_max]` and `n_theta`
/// angles; entry `m` is the radially averaged `|c_m|^2` for modes `0..=max_mode`.
pub fn angular_spectrum(
    field: &ScalarField,
    center: [f64; 2],
    r_min: f64,
    r_max: f64,
    n_r: usize,
    n_theta: usize,
    max_mode: usize,
) -> Vec<f64> {
    let mut power = vec![0.0; max_mode + 1];
    for ir in 0..n_r {
        let r = r_min + (r_max - r_min) * (ir as f64 + 0.5) / n_r as f64;
        let samples: Vec<f64> = (0..n_theta)
            .map(|it| {
                let th = 2.0 * std::f64::consts::PI * it as f64 / n_theta as f64;
                interpolate_scalar(field, [center[0] + r * th.cos(), center[1] + r * th.sin()])
            })
            .collect();
        for (m, p) in power.iter_mut().enumerate() {
            let (mut re, mut im) = (0.0, 0.0);
            for (it, s) in samples.iter().enumerate() {
                let ph = 2.0 * std::f64::consts::PI * (m * it) as f64 / n_theta as f64;
                re += s * ph.cos();
                im -= s * ph.sin();
            }
            *p += (re * re + im * im) / (n_theta * n_theta) as f64 / n_r as f64;
        }
    }
    power
}
