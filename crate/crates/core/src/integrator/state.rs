use super::field::FieldSample;
use super::relaxation::Branch;
use crate::ensemble::ParticleEnsemble;

/// Particles plus the field and energy they currently generate.
#[derive(Debug, Clone)]
pub struct SimState {
    pub ensemble: ParticleEnsemble,
    /// Stepper clock: `t` in the fluid regime, `tau` in the rescaled ones.
    pub time: f64,
    pub step_index: u64,
    /// Field at the stored positions.
    pub field: FieldSample,
    /// Total energy at the stored state.
    pub energy: f64,
}

/// Diagnostics of one completed step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub step_index: u64,
    pub time: f64,
    pub energy: f64,
    pub gamma: f64,
    pub branch: Branch,
    pub discriminant: f64,
}

/// Time-stepping scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Lie–Trotter: gyration over `h`, then the relaxed kick-drift.
    Rs1,
    /// Strang: half gyration, relaxed kick-drift, half gyration.
    Rs2,
    /// Classical RK4 on the coupled system (reference runs).
    Rk4Ref,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Rs1 => "RS1",
            Scheme::Rs2 => "RS2",
            Scheme::Rk4Ref => "RK4REF",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "RS1" => Some(Scheme::Rs1),
            "RS2" => Some(Scheme::Rs2),
            "RK4REF" => Some(Scheme::Rk4Ref),
            _ => None,
        }
    }
}
