//! External magnetic field `B(x) = B0 + eps B1(x)` and the exact gyration flow.
//!
//! Planar runs carry only the out-of-plane component `b(x)`. The rotation
//! sub-flow `dv/dt = kappa_B b(x) v_perp` with `v_perp = (v2, -v1)` and `x`
//! frozen is solved exactly by a plane rotation; in 3D the same flow
//! `dv/dt = v x B(x)` is the matrix exponential of the skew matrix of `B`,
//! evaluated with the Rodrigues formula.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::mesh::Domain;

type ScalarFn = Arc<dyn Fn([f64; 2]) -> Option<f64> + Send + Sync>;
type VectorFn = Arc<dyn Fn([f64; 2]) -> Option<[f64; 3]> + Send + Sync>;

/// Spatial perturbation `b1(x)` of a planar field.
#[derive(Clone)]
pub enum Perturbation2D {
    Zero,
    /// `1 + sin(x1) sin(x2) / 2`
    SinSin,
    Constant(f64),
    /// Returns `None` outside its domain of definition.
    Custom(ScalarFn),
}

/// Spatial perturbation `B1(x)` of a 3D field.
#[derive(Clone)]
pub enum Perturbation3D {
    Zero,
    Constant([f64; 3]),
    Custom(VectorFn),
}

#[derive(Clone)]
pub enum MagneticModel {
    Scalar2D { b0: f64, b1: Perturbation2D },
    Vector3D { b0: [f64; 3], b1: Perturbation3D },
}

impl fmt::Debug for MagneticModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MagneticModel::Scalar2D { b0, b1 } => {
                let p = match b1 {
                    Perturbation2D::Zero => "zero".to_string(),
                    Perturbation2D::SinSin => "sin-sin".to_string(),
                    Perturbation2D::Constant(c) => format!("const {c}"),
                    Perturbation2D::Custom(_) => "custom".to_string(),
                };
                write!(f, "Scalar2D(b0={b0}, b1={p})")
            }
            MagneticModel::Vector3D { b0, .. } => write!(f, "Vector3D(b0={b0:?})"),
        }
    }
}

/// Field value returned by [`eval_field`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldValue {
    Scalar(f64),
    Vector([f64; 3]),
}

impl MagneticModel {
    /// Field of the first fluid-scaling experiment: `b = 1 + eps (1 + sin x1 sin x2 / 2)`.
    pub fn example1() -> Self {
        MagneticModel::Scalar2D {
            b0: 1.0,
            b1: Perturbation2D::SinSin,
        }
    }

    pub fn uniform(b0: f64) -> Self {
        MagneticModel::Scalar2D {
            b0,
            b1: Perturbation2D::Zero,
        }
    }

    pub fn is_planar(&self) -> bool {
        matches!(self, MagneticModel::Scalar2D { .. })
    }

    /// `b0 + eps b1(x)` of a planar model.
    #[inline]
    pub fn scalar(&self, x: [f64; 2], eps: f64) -> Result<f64> {
        let MagneticModel::Scalar2D { b0, b1 } = self else {
            return Err(Error::Dimension("planar field requested from a 3D model".into()));
        };
        let pert = match b1 {
            Perturbation2D::Zero => return Ok(*b0),
            Perturbation2D::SinSin => 1.0 + 0.5 * x[0].sin() * x[1].sin(),
            Perturbation2D::Constant(c) => *c,
            Perturbation2D::Custom(f) => f(x).ok_or(Error::FieldDomain { x: x[0], y: x[1] })?,
        };
        Ok(b0 + eps * pert)
    }

    /// `B0 + eps B1(x)` of a 3D model.
    pub fn vector(&self, x: [f64; 2], eps: f64) -> Result<[f64; 3]> {
        let MagneticModel::Vector3D { b0, b1 } = self else {
            return Err(Error::Dimension("3D field requested from a planar model".into()));
        };
        let pert = match b1 {
            Perturbation3D::Zero => [0.0; 3],
            Perturbation3D::Constant(c) => *c,
            Perturbation3D::Custom(f) => f(x).ok_or(Error::FieldDomain { x: x[0], y: x[1] })?,
        };
        Ok([b0[0] + eps * pert[0], b0[1] + eps * pert[1], b0[2] + eps * pert[2]])
    }

    /// Checks that the perturbation is defined and finite on a sample lattice of `domain`.
    pub fn validate(&self, domain: &Domain) -> Result<()> {
        const N: usize = 64;
        for j in 0..N {
            for i in 0..N {
                let x = [
                    domain.x_lo + domain.lx() * (i as f64 + 0.5) / N as f64,
                    domain.y_lo + domain.ly() * (j as f64 + 0.5) / N as f64,
                ];
                let ok = match eval_field(self, x, 1.0)? {
                    FieldValue::Scalar(b) => b.is_finite(),
                    FieldValue::Vector(b) => b.iter().all(|c| c.is_finite()),
                };
                if !ok {
                    return Err(Error::FieldDomain { x: x[0], y: x[1] });
                }
            }
        }
        Ok(())
    }
}

pub fn eval_field(model: &MagneticModel, x: [f64; 2], eps: f64) -> Result<FieldValue> {
    match model {
        MagneticModel::Scalar2D { .. } => model.scalar(x, eps).map(FieldValue::Scalar),
        MagneticModel::Vector3D { .. } => model.vector(x, eps).map(FieldValue::Vector),
    }
}

/// Skew-symmetric matrix `B^` with `B^ v = v x B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkewMatrix3(pub [[f64; 3]; 3]);

impl SkewMatrix3 {
    pub fn apply(&self, v: [f64; 3]) -> [f64; 3] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
        ]
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        let mut t = [[0.0; 3]; 3];
        for (i, row) in t.iter_mut().enumerate() {
            for (j, c) in row.iter_mut().enumerate() {
                *c = m[j][i];
            }
        }
        SkewMatrix3(t)
    }
}

pub fn skew_matrix(b: [f64; 3]) -> SkewMatrix3 {
    SkewMatrix3([
        [0.0, b[2], -b[1]],
        [-b[2], 0.0, b[0]],
        [b[1], -b[0], 0.0],
    ])
}

#[inline]
pub fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// `exp(s B^) v` by the Rodrigues formula; identity when `|B| = 0`.
pub fn rodrigues(b: [f64; 3], s: f64, v: [f64; 3]) -> [f64; 3] {
    let norm = (b[0] * b[0] + b[1] * b[1] + b[2] * b[2]).sqrt();
    if norm == 0.0 {
        return v;
    }
    let axis = [b[0] / norm, b[1] / norm, b[2] / norm];
    let (sin, cos) = (s * norm).sin_cos();
    let vxb = cross(v, axis);
    let along = (1.0 - cos) * (axis[0] * v[0] + axis[1] * v[1] + axis[2] * v[2]);
    [
        cos * v[0] + sin * vxb[0] + along * axis[0],
        cos * v[1] + sin * vxb[1] + along * axis[1],
        cos * v[2] + sin * vxb[2] + along * axis[2],
    ]
}

/// Plane rotation `exp(theta J) v` with `J = [[0, 1], [-1, 0]]`.
#[inline]
pub fn rotate_plane(theta: f64, v: [f64; 2]) -> [f64; 2] {
    let (sin, cos) = theta.sin_cos();
    [cos * v[0] + sin * v[1], -sin * v[0] + cos * v[1]]
}

/// Exact gyration of `v` over a sub-step with `x` frozen.
///
/// `theta_scale` is `kappa_B h`. Planar models rotate the first two
/// components by `theta_scale b(x)`; 3D models apply `exp(theta_scale B^(x))`.
pub fn rotate_velocity(
    model: &MagneticModel,
    x: [f64; 2],
    v: [f64; 3],
    theta_scale: f64,
    eps: f64,
) -> Result<[f64; 3]> {
    if !theta_scale.is_finite() || !v.iter().chain(&x).all(|c| c.is_finite()) {
        return Err(Error::NonFinite {
            what: "rotation input",
            index: 0,
        });
    }
    match model {
        MagneticModel::Scalar2D { .. } => {
            let b = model.scalar(x, eps)?;
            let r = rotate_plane(theta_scale * b, [v[0], v[1]]);
            Ok([r[0], r[1], v[2]])
        }
        MagneticModel::Vector3D { .. } => Ok(rodrigues(model.vector(x, eps)?, theta_scale, v)),
    }
}
