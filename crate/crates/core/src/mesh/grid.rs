use crate::error::{check_finite, Error, Result};

/// Smallest admissible cell count per axis; the quintic stencil spans six nodes.
pub const MIN_CELLS: usize = 8;

/// Axis-aligned periodic box `[x_lo, x_hi) x [y_lo, y_hi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
}

impl Domain {
    pub fn new(x_lo: f64, x_hi: f64, y_lo: f64, y_hi: f64) -> Result<Self> {
        let ok = [x_lo, x_hi, y_lo, y_hi].iter().all(|v| v.is_finite());
        if !ok || x_hi <= x_lo || y_hi <= y_lo {
            return Err(Error::InvalidGrid(format!(
                "degenerate box [{x_lo}, {x_hi}) x [{y_lo}, {y_hi})"
            )));
        }
        Ok(Self { x_lo, x_hi, y_lo, y_hi })
    }

    pub fn lx(&self) -> f64 {
        self.x_hi - self.x_lo
    }

    pub fn ly(&self) -> f64 {
        self.y_hi - self.y_lo
    }

    pub fn area(&self) -> f64 {
        self.lx() * self.ly()
    }

    /// Canonical periodic representative of `p`.
    #[inline]
    pub fn wrap(&self, p: [f64; 2]) -> [f64; 2] {
        [
            wrap_axis(p[0], self.x_lo, self.x_hi),
            wrap_axis(p[1], self.y_lo, self.y_hi),
        ]
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        p[0] >= self.x_lo && p[0] < self.x_hi && p[1] >= self.y_lo && p[1] < self.y_hi
    }
}

#[inline]
fn wrap_axis(x: f64, lo: f64, hi: f64) -> f64 {
    if x >= lo && x < hi {
        return x;
    }
    let len = hi - lo;
    let w = lo + (x - lo).rem_euclid(len);
    // rem_euclid can round up to exactly `len`
    if w >= hi {
        lo
    } else {
        w
    }
}

/// Periodic rectangular mesh with nodes at `x_lo + i dx`, `y_lo + j dy`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    pub nx: usize,
    pub ny: usize,
    pub domain: Domain,
}

impl Grid2D {
    pub fn new(nx: usize, ny: usize, domain: Domain) -> Result<Self> {
        if nx < MIN_CELLS || ny < MIN_CELLS {
            return Err(Error::InvalidGrid(format!(
                "{nx}x{ny} cells; each axis needs at least {MIN_CELLS}"
            )));
        }
        Ok(Self { nx, ny, domain })
    }

    pub fn dx(&self) -> f64 {
        self.domain.lx() / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        self.domain.ly() / self.ny as f64
    }

    pub fn cell_area(&self) -> f64 {
        self.dx() * self.dy()
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Flat index of node `(i, j)`, `i` fastest.
    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i + self.nx * j
    }

    pub fn node(&self, i: usize, j: usize) -> [f64; 2] {
        [
            self.domain.x_lo + i as f64 * self.dx(),
            self.domain.y_lo + j as f64 * self.dy(),
        ]
    }
}

/// Node samples of a scalar quantity.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub grid: Grid2D,
    pub values: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(grid: Grid2D) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn from_values(grid: Grid2D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Dimension(format!(
                "{} values for a {}x{} grid",
                values.len(),
                grid.nx,
                grid.ny
            )));
        }
        check_finite(&values, "scalar field")?;
        Ok(Self { grid, values })
    }

    /// Samples `f` at every node.
    pub fn from_fn(grid: Grid2D, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                let [x, y] = grid.node(i, j);
                values.push(f(x, y));
            }
        }
        Self { grid, values }
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Quadrature `dx dy sum_ij values_ij`.
    pub fn integral(&self) -> f64 {
        self.grid.cell_area() * self.values.iter().sum::<f64>()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

/// Two-component field on a shared grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField2D {
    pub grid: Grid2D,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl VectorField2D {
    pub fn zeros(grid: Grid2D) -> Self {
        Self {
            grid,
            x: vec![0.0; grid.len()],
            y: vec![0.0; grid.len()],
        }
    }

    pub fn from_fn(grid: Grid2D, f: impl Fn(f64, f64) -> [f64; 2]) -> Self {
        let mut out = Self::zeros(grid);
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                let [x, y] = grid.node(i, j);
                let e = f(x, y);
                let k = grid.index(i, j);
                out.x[k] = e[0];
                out.y[k] = e[1];
            }
        }
        out
    }
}
