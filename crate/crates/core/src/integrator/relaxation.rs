/// Outcome of the relaxation root selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    RealRoot,
    NegativeDiscriminant,
    DegenerateA,
    /// Steps of the unrelaxed reference integrator.
    Unrelaxed,
}

impl Branch {
    /// Integer code used in `energy.csv`.
    pub fn code(self) -> i32 {
        match self {
            Branch::RealRoot => 0,
            Branch::NegativeDiscriminant => 1,
            Branch::DegenerateA => 2,
            Branch::Unrelaxed => -1,
        }
    }

    pub fn from_code(code: i32) -> Option<Self> {
        match code {
            0 => Some(Branch::RealRoot),
            1 => Some(Branch::NegativeDiscriminant),
            2 => Some(Branch::DegenerateA),
            -1 => Some(Branch::Unrelaxed),
            _ => None,
        }
    }
}

/// Relative threshold below which `A` counts as zero.
pub const A_TOL: f64 = 1e-28;

/// Result of [`relaxation_gamma`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Relaxation {
    pub gamma: f64,
    pub branch: Branch,
    pub discriminant: f64,
}

/// Relaxation parameter making `v + h gamma kappa_e E(X1)` conserve energy.
///
/// With `a = h gamma kappa_e` the energy condition reads
/// `A a^2 / 2 + C a + h_tilde = 0`. The root of smaller magnitude is picked
/// (`sgn(0) = +1`) and evaluated without cancellation as
/// `a = -2 h_tilde / (C + sgn(C) sqrt(C^2 - 2 A h_tilde))`.
///
/// `a_scale` is the size of `A` for a unit field (`sum w max(1, |E|^2_max)`);
/// `A <= A_TOL a_scale` is treated as degenerate.
pub fn relaxation_gamma(a: f64, c: f64, h_tilde: f64, h: f64, kappa_e: f64, a_scale: f64) -> Relaxation {
    let discriminant = c * c - 2.0 * a * h_tilde;
    if a <= A_TOL * a_scale.max(0.0) || a <= 0.0 {
        return Relaxation {
            gamma: 0.0,
            branch: Branch::DegenerateA,
            discriminant,
        };
    }
    if discriminant < 0.0 {
        return Relaxation {
            gamma: 0.0,
            branch: Branch::NegativeDiscriminant,
            discriminant,
        };
    }
    let sign = if c >= 0.0 { 1.0 } else { -1.0 };
    let denom = c + sign * discriminant.sqrt();
    let root = if denom == 0.0 { 0.0 } else { -2.0 * h_tilde / denom };
    Relaxation {
        gamma: root / (h * kappa_e),
        branch: Branch::RealRoot,
        discriminant,
    }
}
