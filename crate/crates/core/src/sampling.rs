//! Initial particle loading by rejection sampling.
//!
//! Proposals are uniform over the spatial box times a velocity truncation box;
//! a proposal `(x, v)` is kept when `u M < f0(x, v)` for a uniform `u` and the
//! stored envelope `M >= sup f0`. Every particle carries `Q / n_p`, with `Q`
//! the integral of `f0` computed deterministically (never from the
//! acceptance ratio).

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ensemble::ParticleEnsemble;
use crate::error::{Error, Result};
use crate::mesh::Domain;
use crate::quadrature::integrate;

/// Sampling aborts when fewer than this fraction of proposals are accepted.
pub const MIN_ACCEPTANCE: f64 = 1e-3;

/// Proposal count after which the acceptance rate is checked.
const ACCEPTANCE_PROBE: u64 = 200_000;

/// Named initial distributions.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// `(1 + sin x2 + eta cos(k x1)) (G(v - 2 e1) + G(v + 2 e1)) / (4 pi)`
    /// with unnormalized Gaussians `G(v) = exp(-|v|^2 / 2)`.
    TwoBump { eta: f64, k: f64 },
    /// Ring `(1 + alpha cos(l theta)) exp(-4 (r - r_center)^2)` on
    /// `r_minus <= r <= r_plus`, Maxwellian in velocity.
    Diocotron {
        alpha: f64,
        l: u32,
        r_minus: f64,
        r_plus: f64,
        r_center: f64,
    },
}

/// A distribution together with its spatial box and velocity truncation box.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialDistribution {
    pub shape: Shape,
    pub domain: Domain,
    /// `[v1_lo, v1_hi, v2_lo, v2_hi]`
    pub vbox: [f64; 4],
}

impl InitialDistribution {
    /// Two-bump data on `[0, 2 pi / k] x [0, 2 pi]`.
    pub fn two_bump(eta: f64, k: f64) -> Result<Self> {
        if !(k > 0.0) || !eta.is_finite() {
            return Err(Error::OutOfRange(format!("two-bump needs k > 0 (k={k}, eta={eta})")));
        }
        Ok(Self {
            shape: Shape::TwoBump { eta, k },
            domain: Domain::new(0.0, 2.0 * PI / k, 0.0, 2.0 * PI)?,
            // six standard deviations around each bump
            vbox: [-8.0, 8.0, -6.0, 6.0],
        })
    }

    /// Diocotron ring on `[-half_width, half_width]^2`.
    pub fn diocotron(alpha: f64, l: u32, r_minus: f64, r_plus: f64, half_width: f64) -> Result<Self> {
        if !(0.0 <= r_minus && r_minus < r_plus) || r_plus > half_width || alpha.abs() > 1.0 {
            return Err(Error::OutOfRange(format!(
                "diocotron needs 0 <= r- < r+ <= half width and |alpha| <= 1 \
                 (r-={r_minus}, r+={r_plus}, alpha={alpha})"
            )));
        }
        Ok(Self {
            shape: Shape::Diocotron {
                alpha,
                l,
                r_minus,
                r_plus,
                r_center: 6.5,
            },
            domain: Domain::new(-half_width, half_width, -half_width, half_width)?,
            vbox: [-6.0, 6.0, -6.0, 6.0],
        })
    }

    /// Pointwise `f0(x, v)` (may dip below zero for large `eta`).
    pub fn density(&self, x: [f64; 2], v: [f64; 2]) -> f64 {
        match self.shape {
            Shape::TwoBump { eta, k } => {
                let spatial = 1.0 + x[1].sin() + eta * (k * x[0]).cos();
                let v2 = v[1] * v[1];
                let g = (-0.5 * ((v[0] + 2.0).powi(2) + v2)).exp()
                    + (-0.5 * ((v[0] - 2.0).powi(2) + v2)).exp();
                spatial * g / (4.0 * PI)
            }
            Shape::Diocotron { .. } => {
                self.spatial_density(x) * (-0.5 * (v[0] * v[0] + v[1] * v[1])).exp() / (2.0 * PI)
            }
        }
    }

    /// Velocity-integrated density `int f0 dv`.
    pub fn spatial_density(&self, x: [f64; 2]) -> f64 {
        match self.shape {
            Shape::TwoBump { eta, k } => 1.0 + x[1].sin() + eta * (k * x[0]).cos(),
            Shape::Diocotron {
                alpha,
                l,
                r_minus,
                r_plus,
                r_center,
            } => {
                let r = x[0].hypot(x[1]);
                if r < r_minus || r > r_plus {
                    return 0.0;
                }
                let theta = x[1].atan2(x[0]);
                (1.0 + alpha * (l as f64 * theta).cos()) * (-4.0 * (r - r_center).powi(2)).exp()
            }
        }
    }

    /// Envelope `M >= sup f0` used by the rejection test.
    pub fn envelope(&self) -> f64 {
        match self.shape {
            // the two-Gaussian sum peaks just inside +-2 at 1 + e^-8 (1 + O(1e-3))
            Shape::TwoBump { eta, .. } => (2.0 + eta.abs()) * (1.0 + 2.0 * (-8.0f64).exp()) / (4.0 * PI),
            Shape::Diocotron { alpha, .. } => (1.0 + alpha.abs()) / (2.0 * PI),
        }
    }
}

/// Integral of the sampled density (the positive part of `f0`) over space and velocity.
pub fn distribution_integral(dist: &InitialDistribution) -> f64 {
    match dist.shape {
        Shape::TwoBump { eta, .. } => {
            // velocity factor is exactly 1; per x1 the x2-integral of the
            // positive part of a + sin(x2) is closed-form
            let d = dist.domain;
            let k = match dist.shape {
                Shape::TwoBump { k, .. } => k,
                _ => unreachable!(),
            };
            let per_column = |x1: f64| positive_sine_integral(1.0 + eta * (k * x1).cos());
            let ly_scale = d.ly() / (2.0 * PI);
            ly_scale * integrate(per_column, d.x_lo, d.x_hi, 256, 8)
        }
        Shape::Diocotron {
            r_minus,
            r_plus,
            r_center,
            ..
        } => {
            // the cos(l theta) term integrates to zero over the full ring
            2.0 * PI
                * integrate(
                    |r| r * (-4.0 * (r - r_center).powi(2)).exp(),
                    r_minus,
                    r_plus,
                    64,
                    10,
                )
        }
    }
}

/// `int_0^{2 pi} max(a + sin y, 0) dy`.
fn positive_sine_integral(a: f64) -> f64 {
    if a >= 1.0 {
        2.0 * PI * a
    } else if a <= -1.0 {
        0.0
    } else {
        PI * a + 2.0 * a * a.asin() + 2.0 * (1.0 - a * a).sqrt()
    }
}

/// Draws `n_p` particles from `dist` with a ChaCha8 stream seeded by `seed`.
///
/// Proposal coordinates are consumed in the order `x1, x2, v1, v2, u`.
pub fn sample_ensemble(dist: &InitialDistribution, n_p: usize, seed: u64) -> Result<ParticleEnsemble> {
    if n_p == 0 {
        return Err(Error::Sampling("particle count must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = dist.domain;
    let [v1_lo, v1_hi, v2_lo, v2_hi] = dist.vbox;
    let m = dist.envelope();
    let mut positions = Vec::with_capacity(n_p);
    let mut velocities = Vec::with_capacity(n_p);
    let mut trials: u64 = 0;
    while positions.len() < n_p {
        let x = [
            d.x_lo + d.lx() * rng.gen::<f64>(),
            d.y_lo + d.ly() * rng.gen::<f64>(),
        ];
        let v = [
            v1_lo + (v1_hi - v1_lo) * rng.gen::<f64>(),
            v2_lo + (v2_hi - v2_lo) * rng.gen::<f64>(),
        ];
        let u: f64 = rng.gen();
        trials += 1;
        let f = dist.density(x, v).max(0.0);
        if f > m {
            return Err(Error::Sampling(format!(
                "envelope {m} violated: f0({x:?}, {v:?}) = {f}"
            )));
        }
        if u * m < f {
            positions.push(d.wrap(x));
            velocities.push(v);
        }
        if trials % ACCEPTANCE_PROBE == 0 {
            let rate = positions.len() as f64 / trials as f64;
            if rate < MIN_ACCEPTANCE {
                return Err(Error::Sampling(format!(
                    "acceptance rate {rate:.2e} below {MIN_ACCEPTANCE:e}; check the envelope"
                )));
            }
        }
    }
    let q = distribution_integral(dist);
    let w = q / n_p as f64;
    Ok(ParticleEnsemble::new_2d(d, positions, velocities, vec![w; n_p])?.with_total_mass(q))
}
