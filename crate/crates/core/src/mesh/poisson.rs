//! Spectral Poisson solve on the periodic box.
//!
//! Returns `E = -grad(phi)` with `lap(phi) = -(rho - mean(rho))`. The zero
//! mode of `phi` (and therefore of `E`) is dropped, and the derivative of the
//! Nyquist mode along an even axis is set to zero, so the output is real.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::grid::{Grid2D, ScalarField, VectorField2D};
use crate::error::{check_finite, Error, Result};

/// Planned transforms and wavenumbers for one grid.
#[derive(Clone)]
pub struct SpectralPoisson {
    grid: Grid2D,
    fwd_x: Arc<dyn Fft<f64>>,
    inv_x: Arc<dyn Fft<f64>>,
    fwd_y: Arc<dyn Fft<f64>>,
    inv_y: Arc<dyn Fft<f64>>,
    kx: Vec<f64>,
    ky: Vec<f64>,
    dkx: Vec<f64>,
    dky: Vec<f64>,
}

impl std::fmt::Debug for SpectralPoisson {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralPoisson").field("grid", &self.grid).finish()
    }
}

fn wavenumbers(n: usize, len: f64) -> (Vec<f64>, Vec<f64>) {
    let base = 2.0 * PI / len;
    let k: Vec<f64> = (0..n)
        .map(|i| {
            let m = if i <= n / 2 { i as f64 } else { i as f64 - n as f64 };
            base * m
        })
        .collect();
    let mut d = k.clone();
    if n % 2 == 0 {
        d[n / 2] = 0.0;
    }
    (k, d)
}

impl SpectralPoisson {
    pub fn new(grid: Grid2D) -> Self {
        let mut planner = FftPlanner::new();
        let (kx, dkx) = wavenumbers(grid.nx, grid.domain.lx());
        let (ky, dky) = wavenumbers(grid.ny, grid.domain.ly());
        Self {
            grid,
            fwd_x: planner.plan_fft_forward(grid.nx),
            inv_x: planner.plan_fft_inverse(grid.nx),
            fwd_y: planner.plan_fft_forward(grid.ny),
            inv_y: planner.plan_fft_inverse(grid.ny),
            kx,
            ky,
            dkx,
            dky,
        }
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    /// Forward 2D transform; the result is laid out `[i][j]` with `j` fastest.
    fn forward(&self, values: &[f64]) -> Vec<Complex64> {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        let mut rows: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.fwd_x.process(&mut rows);
        let mut cols = transpose(&rows, nx, ny);
        self.fwd_y.process(&mut cols);
        cols
    }

    /// Inverse of [`forward`](Self::forward), returning node values `i` fastest.
    fn inverse(&self, mut cols: Vec<Complex64>) -> Vec<f64> {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        self.inv_y.process(&mut cols);
        let mut rows = transpose(&cols, ny, nx);
        self.inv_x.process(&mut rows);
        let norm = 1.0 / (nx * ny) as f64;
        rows.iter().map(|c| c.re * norm).collect()
    }

    pub fn solve(&self, rho: &ScalarField) -> Result<VectorField2D> {
        if rho.grid != self.grid {
            return Err(Error::Dimension("density grid differs from solver grid".into()));
        }
        check_finite(&rho.values, "charge density")?;
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        let rho_hat = self.forward(&rho.values);
        let mut ex_hat = vec![Complex64::new(0.0, 0.0); nx * ny];
        let mut ey_hat = vec![Complex64::new(0.0, 0.0); nx * ny];
        for i in 0..nx {
            for j in 0..ny {
                if i == 0 && j == 0 {
                    continue;
                }
                let k = j + ny * i;
                let k2 = self.kx[i] * self.kx[i] + self.ky[j] * self.ky[j];
                let phi = rho_hat[k] / k2;
                // -i k phi
                ex_hat[k] = Complex64::new(phi.im * self.dkx[i], -phi.re * self.dkx[i]);
                ey_hat[k] = Complex64::new(phi.im * self.dky[j], -phi.re * self.dky[j]);
            }
        }
        Ok(VectorField2D {
            grid: self.grid,
            x: self.inverse(ex_hat),
            y: self.inverse(ey_hat),
        })
    }

    /// Spectral divergence of a node field.
    pub fn divergence(&self, e: &VectorField2D) -> ScalarField {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        let ex = self.forward(&e.x);
        let ey = self.forward(&e.y);
        let mut div = vec![Complex64::new(0.0, 0.0); nx * ny];
        for i in 0..nx {
            for j in 0..ny {
                let k = j + ny * i;
                let s = ex[k] * self.dkx[i] + ey[k] * self.dky[j];
                div[k] = Complex64::new(-s.im, s.re);
            }
        }
        ScalarField {
            grid: self.grid,
            values: self.inverse(div),
        }
    }

    /// `sum_k |f_k|^2` of the unnormalized transform (Parseval side of a grid sum).
    pub fn spectral_power(&self, values: &[f64]) -> f64 {
        self.forward(values).iter().map(|c| c.norm_sqr()).sum()
    }
}

fn transpose(src: &[Complex64], cols: usize, rows: usize) -> Vec<Complex64> {
    // src is rows x cols with cols fastest; output is cols x rows
    let mut out = vec![Complex64::new(0.0, 0.0); src.len()];
    for r in 0..rows {
        for c in 0..cols {
            out[r + rows * c] = src[c + cols * r];
        }
    }
    out
}

/// One-shot solve that plans the transforms on the fly.
pub fn solve_poisson(rho: &ScalarField) -> Result<VectorField2D> {
    SpectralPoisson::new(rho.grid).solve(rho)
}

/// `(lambda / 2) dx dy sum_ij |E_ij|^2`; the conserved functional's field term.
pub fn field_energy(e: &VectorField2D, lambda: f64) -> f64 {
    let sum: f64 = e
        .x
        .iter()
        .zip(&e.y)
        .map(|(a, b)| a * a + b * b)
        .sum();
    0.5 * lambda * e.grid.cell_area() * sum
}
