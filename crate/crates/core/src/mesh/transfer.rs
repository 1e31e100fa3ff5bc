//! Particle/grid transfers with the quintic shape.
//!
//! Deposition and interpolation use the same stencil, so interpolation is the
//! exact adjoint of deposition (up to the `1 / (dx dy)` density scaling).

use super::bspline::{axis_stencil, STENCIL};
use super::grid::{Grid2D, ScalarField, VectorField2D};
use crate::error::{Error, Result};
use crate::exec::Exec;

#[inline(always)]
fn stencil(grid: &Grid2D, p: [f64; 2], inv_dx: f64, inv_dy: f64) -> Stencil {
    let (ix, wx) = axis_stencil((p[0] - grid.domain.x_lo) * inv_dx, grid.nx);
    let (iy, wy) = axis_stencil((p[1] - grid.domain.y_lo) * inv_dy, grid.ny);
    Stencil { ix, wx, iy, wy }
}

struct Stencil {
    ix: [usize; STENCIL],
    wx: [f64; STENCIL],
    iy: [usize; STENCIL],
    wy: [f64; STENCIL],
}

/// Density of point charges `weights[k]` at `positions[k]`:
/// `rho_ij = sum_k w_k S(x_i - x_k) S(y_j - y_k) / (dx dy)`.
pub fn deposit(
    grid: &Grid2D,
    positions: &[[f64; 2]],
    weights: &[f64],
    exec: Exec,
) -> Result<ScalarField> {
    if positions.len() != weights.len() {
        return Err(Error::Dimension(format!(
            "{} positions but {} weights",
            positions.len(),
            weights.len()
        )));
    }
    let n = grid.len();
    let nx = grid.nx;
    let inv_dx = 1.0 / grid.dx();
    let inv_dy = 1.0 / grid.dy();
    let partials = exec.map_chunks(positions, |offset, chunk| {
        let mut acc = vec![0.0; n];
        for (k, &p) in chunk.iter().enumerate() {
            let w = weights[offset + k];
            let st = stencil(grid, p, inv_dx, inv_dy);
            for (jy, &row) in st.iy.iter().enumerate() {
                let wyw = w * st.wy[jy];
                let base = row * nx;
                for (ix, &col) in st.ix.iter().enumerate() {
                    acc[base + col] += wyw * st.wx[ix];
                }
            }
        }
        acc
    });
    let inv_area = inv_dx * inv_dy;
    let mut values = vec![0.0; n];
    for part in &partials {
        for (v, p) in values.iter_mut().zip(part) {
            *v += p;
        }
    }
    for v in &mut values {
        *v *= inv_area;
    }
    Ok(ScalarField { grid: *grid, values })
}

/// Charge density of an ensemble on `grid`.
pub fn deposit_density(
    ensemble: &crate::ParticleEnsemble,
    grid: &Grid2D,
    exec: Exec,
) -> Result<ScalarField> {
    deposit(grid, &ensemble.positions, &ensemble.weights, exec)
}

/// Field value at one position (wrapped into the periodic box).
pub fn interpolate_field(e: &VectorField2D, position: [f64; 2]) -> Result<[f64; 2]> {
    if !position.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite {
            what: "interpolation point",
            index: 0,
        });
    }
    let grid = &e.grid;
    let p = grid.domain.wrap(position);
    Ok(gather(e, p, 1.0 / grid.dx(), 1.0 / grid.dy()))
}

#[inline(always)]
fn gather(e: &VectorField2D, p: [f64; 2], inv_dx: f64, inv_dy: f64) -> [f64; 2] {
    let grid = &e.grid;
    let st = stencil(grid, p, inv_dx, inv_dy);
    let mut ex = 0.0;
    let mut ey = 0.0;
    for (jy, &row) in st.iy.iter().enumerate() {
        let base = row * grid.nx;
        let mut rx = 0.0;
        let mut ry = 0.0;
        for (ix, &col) in st.ix.iter().enumerate() {
            rx += e.x[base + col] * st.wx[ix];
            ry += e.y[base + col] * st.wx[ix];
        }
        ex += rx * st.wy[jy];
        ey += ry * st.wy[jy];
    }
    [ex, ey]
}

/// Field values at many canonical positions.
pub fn interpolate_many(e: &VectorField2D, positions: &[[f64; 2]], exec: Exec) -> Vec<[f64; 2]> {
    let inv_dx = 1.0 / e.grid.dx();
    let inv_dy = 1.0 / e.grid.dy();
    let mut out = vec![[0.0; 2]; positions.len()];
    exec.for_chunks_mut(&mut out, |offset, chunk| {
        for (k, slot) in chunk.iter_mut().enumerate() {
            *slot = gather(e, positions[offset + k], inv_dx, inv_dy);
        }
    });
    out
}

/// Scalar interpolation with the same stencil.
pub fn interpolate_scalar(g: &ScalarField, position: [f64; 2]) -> f64 {
    let grid = &g.grid;
    let p = grid.domain.wrap(position);
    let st = stencil(grid, p, 1.0 / grid.dx(), 1.0 / grid.dy());
    let mut acc = 0.0;
    for (jy, &row) in st.iy.iter().enumerate() {
        let mut r = 0.0;
        for (ix, &col) in st.ix.iter().enumerate() {
            r += g.values[row * grid.nx + col] * st.wx[ix];
        }
        acc += r * st.wy[jy];
    }
    acc
}
