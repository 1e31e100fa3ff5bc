use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::mesh::{deposit, field_energy, interpolate_many, Grid2D, SpectralPoisson, VectorField2D};

type VecFn = Arc<dyn Fn([f64; 2]) -> [f64; 2] + Send + Sync>;
type ScalarFn = Arc<dyn Fn([f64; 2]) -> f64 + Send + Sync>;

/// Source of the electric field acting on the particles.
#[derive(Clone)]
pub enum ElectricModel {
    /// Deposit, spectral Poisson solve and interpolation on a periodic grid.
    SelfConsistent(Arc<SpectralPoisson>),
    /// Prescribed `E = -grad phi`; the field energy is `lambda sum_k w_k phi(x_k)`.
    External { field: VecFn, potential: ScalarFn },
    /// `E = 0`.
    Zero,
}

impl fmt::Debug for ElectricModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElectricModel::SelfConsistent(p) => f.debug_tuple("SelfConsistent").field(p.grid()).finish(),
            ElectricModel::External { .. } => f.write_str("External"),
            ElectricModel::Zero => f.write_str("Zero"),
        }
    }
}

/// Field produced by one solve: the grid field (if any) and its energy.
#[derive(Debug, Clone)]
pub struct FieldSample {
    pub grid_field: Option<VectorField2D>,
    pub energy: f64,
}

impl ElectricModel {
    pub fn self_consistent(grid: Grid2D) -> Self {
        ElectricModel::SelfConsistent(Arc::new(SpectralPoisson::new(grid)))
    }

    pub fn external(
        field: impl Fn([f64; 2]) -> [f64; 2] + Send + Sync + 'static,
        potential: impl Fn([f64; 2]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        ElectricModel::External {
            field: Arc::new(field),
            potential: Arc::new(potential),
        }
    }

    pub fn grid(&self) -> Option<&Grid2D> {
        match self {
            ElectricModel::SelfConsistent(p) => Some(p.grid()),
            _ => None,
        }
    }

    /// Field for particles at `positions` and its `lambda`-weighted energy.
    pub fn solve(&self, positions: &[[f64; 2]], weights: &[f64], lambda: f64, exec: Exec) -> Result<FieldSample> {
        match self {
            ElectricModel::SelfConsistent(poisson) => {
                let rho = deposit(poisson.grid(), positions, weights, exec)?;
                let e = poisson.solve(&rho)?;
                let energy = field_energy(&e, lambda);
                Ok(FieldSample {
                    grid_field: Some(e),
                    energy,
                })
            }
            ElectricModel::External { potential, .. } => {
                let energy = lambda * exec.sum(positions, |k, &p| weights[k] * potential(p));
                if !energy.is_finite() {
                    return Err(Error::NonFinite {
                        what: "external potential",
                        index: 0,
                    });
                }
                Ok(FieldSample {
                    grid_field: None,
                    energy,
                })
            }
            ElectricModel::Zero => Ok(FieldSample {
                grid_field: None,
                energy: 0.0,
            }),
        }
    }

    /// Field values at `positions` for a sample returned by [`Self::solve`].
    pub fn evaluate(&self, sample: &FieldSample, positions: &[[f64; 2]], exec: Exec) -> Vec<[f64; 2]> {
        match (self, &sample.grid_field) {
            (ElectricModel::SelfConsistent(_), Some(e)) => interpolate_many(e, positions, exec),
            (ElectricModel::External { field, .. }, _) => {
                let mut out = vec![[0.0; 2]; positions.len()];
                exec.for_chunks_mut(&mut out, |offset, chunk| {
                    for (k, slot) in chunk.iter_mut().enumerate() {
                        *slot = field(positions[offset + k]);
                    }
                });
                out
            }
            _ => vec![[0.0; 2]; positions.len()],
        }
    }
}
