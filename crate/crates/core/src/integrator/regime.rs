use crate::error::{Error, Result};

/// Scaling of the Vlasov–Poisson system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `x' = v`, `v' = b(x) v^perp / eps + E` in physical time `t`.
    Fluid,
    /// Finite Larmor radius scaling in `tau = t / eps`: `v' = b v^perp + eps E`.
    LarmorRescaled,
    /// Diffusion scaling in `tau = t / eps`: `v' = b v^perp / eps + E`.
    DiffusionRescaled,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::Fluid => "fluid",
            Regime::LarmorRescaled => "larmor",
            Regime::DiffusionRescaled => "diffusion",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "fluid" => Some(Regime::Fluid),
            "larmor" => Some(Regime::LarmorRescaled),
            "diffusion" => Some(Regime::DiffusionRescaled),
            _ => None,
        }
    }

    /// Whether the stepper's clock is the rescaled time `tau`.
    pub fn is_rescaled(self) -> bool {
        !matches!(self, Regime::Fluid)
    }
}

/// Multipliers of the gyration term, the electric kick and the field energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeCoefficients {
    pub regime: Regime,
    pub eps: f64,
    pub kappa_b: f64,
    pub kappa_e: f64,
    /// Weight of the field term in the conserved energy; always equal to `kappa_e`.
    pub lambda: f64,
    /// Stepper horizon per unit of physical final time.
    pub time_horizon_factor: f64,
}

pub fn regime_coefficients(regime: Regime, eps: f64) -> Result<RegimeCoefficients> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::OutOfRange(format!("eps must satisfy 0 < eps <= 1 (got {eps})")));
    }
    let (kappa_b, kappa_e, horizon) = match regime {
        Regime::Fluid => (1.0 / eps, 1.0, 1.0),
        Regime::LarmorRescaled => (1.0, eps, 1.0 / eps),
        Regime::DiffusionRescaled => (1.0 / eps, 1.0, 1.0 / eps),
    };
    Ok(RegimeCoefficients {
        regime,
        eps,
        kappa_b,
        kappa_e,
        lambda: kappa_e,
        time_horizon_factor: horizon,
    })
}
