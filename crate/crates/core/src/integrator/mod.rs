//! Time integration: regime scaling, the relaxed splitting schemes and the
//! RK4 reference.

mod field;
mod regime;
mod relaxation;
mod state;
mod stepper;

pub use field::{ElectricModel, FieldSample};
pub use regime::{regime_coefficients, Regime, RegimeCoefficients};
pub use relaxation::{relaxation_gamma, Branch, Relaxation, A_TOL};
pub use state::{Scheme, SimState, StepRecord};
pub use stepper::{Psi2Prediction, Stepper};
