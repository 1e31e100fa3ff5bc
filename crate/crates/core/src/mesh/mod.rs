//! Periodic mesh, particle/grid transfers, and the spectral field solve.

mod bspline;
mod grid;
mod poisson;
mod snapshot;
mod transfer;

pub use bspline::{bspline_weights, STENCIL};
pub use grid::{Domain, Grid2D, ScalarField, VectorField2D, MIN_CELLS};
pub use poisson::{field_energy, solve_poisson, SpectralPoisson};
pub use snapshot::{read_snapshot, write_snapshot, Snapshot};
pub use transfer::{
    deposit, deposit_density, interpolate_field, interpolate_many, interpolate_scalar,
};
