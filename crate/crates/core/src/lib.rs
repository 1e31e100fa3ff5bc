//! Energy-conserving particle-in-cell stepping for the Vlasov–Poisson system
//! in a strong external magnetic field.
//!
//! The crate is organised bottom-up:
//!
//! * [`mesh`]: periodic grid, quintic particle/grid transfers, spectral Poisson solve.
//! * [`magnetic`]: external field models and the exact gyration sub-flow.
//! * [`sampling`]: seeded rejection sampling of initial ensembles.
//! * [`integrator`]: regime coefficients, the relaxed splitting steppers and an RK4 reference.
//! * [`diagnostics`]: energy, moments, velocity marginals and error norms.
//!
//! Particle loops take an [`Exec`] policy; results are bitwise identical for
//! either policy.

pub mod diagnostics;
mod ensemble;
pub mod error;
mod exec;
pub mod integrator;
pub mod magnetic;
pub mod mesh;
mod quadrature;
pub mod sampling;

pub use ensemble::ParticleEnsemble;
pub use error::{Error, Result};
pub use exec::{Exec, CHUNK};
