//! Named experiment presets at paper or desk scale.
//!
//! Desk scale halves the grid along each axis and divides the particle count
//! by ten; every physical parameter is unchanged.

use std::f64::consts::PI;
use std::path::PathBuf;

use erpic::integrator::{Regime, Scheme};

use crate::config::{
    DistributionSpec, GridSpec, InitSpec, MagneticKind, MagneticSpec, OutputSpec, SimulationConfig,
};

pub const PRESET_NAMES: &[&str] = &["example1", "example2-diocotron", "example3-larmor", "diffusion-rect"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Paper,
    Desk,
}

impl Scale {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "paper" => Some(Scale::Paper),
            "desk" => Some(Scale::Desk),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Scale::Paper => "paper",
            Scale::Desk => "desk",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown preset `{0}` (known: example1, example2-diocotron, example3-larmor, diffusion-rect)")]
pub struct UnknownPreset(pub String);

fn two_bump_base(name: &str) -> SimulationConfig {
    SimulationConfig {
        regime: Regime::Fluid,
        eps: 0.01,
        dt: 0.1,
        t_final: 100.0,
        scheme: Scheme::Rs2,
        grid: GridSpec {
            nx: 64,
            ny: 32,
            bounds: Some([0.0, 4.0 * PI, 0.0, 2.0 * PI]),
        },
        init: InitSpec {
            distribution: DistributionSpec::TwoBump { eta: 0.05, k: 0.5 },
            particles: 102_400,
            seed: 1,
        },
        magnetic: MagneticSpec {
            model: MagneticKind::Example1,
            b0: 1.0,
            b1: 0.0,
        },
        output: OutputSpec {
            dir: PathBuf::from(format!("out/{name}")),
            snapshots: Vec::new(),
            energy: true,
            moments: true,
            marginal: true,
        },
    }
}

pub fn preset(name: &str, scale: Scale) -> Result<SimulationConfig, UnknownPreset> {
    let mut c = match name {
        "example1" => two_bump_base(name),
        "example2-diocotron" => SimulationConfig {
            dt: 0.01,
            grid: GridSpec {
                nx: 128,
                ny: 128,
                bounds: Some([-12.0, 12.0, -12.0, 12.0]),
            },
            init: InitSpec {
                distribution: DistributionSpec::Diocotron {
                    alpha: 0.2,
                    l: 5,
                    r_minus: 5.0,
                    r_plus: 8.0,
                },
                // 50 particles per cell
                particles: 819_200,
                seed: 1,
            },
            magnetic: MagneticSpec {
                model: MagneticKind::Uniform,
                b0: 1.0,
                b1: 0.0,
            },
            ..two_bump_base(name)
        },
        "example3-larmor" => SimulationConfig {
            regime: Regime::LarmorRescaled,
            eps: 0.1,
            t_final: 5.0,
            ..two_bump_base(name)
        },
        "diffusion-rect" => SimulationConfig {
            regime: Regime::DiffusionRescaled,
            eps: 0.05,
            dt: 0.01,
            t_final: 1.0,
            ..two_bump_base(name)
        },
        _ => return Err(UnknownPreset(name.to_string())),
    };
    c.output.snapshots = vec![c.horizon()];
    if scale == Scale::Desk {
        c.grid.nx /= 2;
        c.grid.ny /= 2;
        c.init.particles /= 10;
    }
    Ok(c)
}

/// Config text with a header describing the preset and its scaling rule.
pub fn emit(name: &str, scale: Scale, config: &SimulationConfig) -> String {
    let mut s = format!("# preset {name}, {} scale\n", scale.name());
    if scale == Scale::Desk {
        s.push_str("# desk scale: grid halved per axis, particles divided by 10, physics unchanged\n");
    }
    if config.regime.is_rescaled() {
        s.push_str("# dt and snapshot times are in tau = t / eps; the run covers tau in [0, t_final / eps]\n");
    }
    s.push_str(&config.render());
    s
}
