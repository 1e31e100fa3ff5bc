//! Macroparticle storage and its binary dump format.

use std::io::{Read, Write};

use crate::error::{check_finite, Error, Result};
use crate::exec::Exec;
use crate::mesh::Domain;

const MAGIC_2V: &[u8; 8] = b"ERPICEN2";
const MAGIC_3V: &[u8; 8] = b"ERPICEN3";

/// Weighted macroparticles: planar positions, 2- or 3-component velocities.
///
/// Positions are kept in the canonical periodic representative of `domain`.
/// For planar runs (`vdim == 2`) the third velocity component is zero and is
/// never touched.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleEnsemble {
    pub domain: Domain,
    pub positions: Vec<[f64; 2]>,
    pub velocities: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
    vdim: usize,
    total_mass: f64,
}

impl ParticleEnsemble {
    pub fn new_2d(
        domain: Domain,
        positions: Vec<[f64; 2]>,
        velocities: Vec<[f64; 2]>,
        weights: Vec<f64>,
    ) -> Result<Self> {
        let v3 = velocities.iter().map(|v| [v[0], v[1], 0.0]).collect();
        Self::build(domain, positions, v3, weights, 2)
    }

    pub fn new_3d(
        domain: Domain,
        positions: Vec<[f64; 2]>,
        velocities: Vec<[f64; 3]>,
        weights: Vec<f64>,
    ) -> Result<Self> {
        Self::build(domain, positions, velocities, weights, 3)
    }

    fn build(
        domain: Domain,
        positions: Vec<[f64; 2]>,
        velocities: Vec<[f64; 3]>,
        weights: Vec<f64>,
        vdim: usize,
    ) -> Result<Self> {
        let n = positions.len();
        if velocities.len() != n || weights.len() != n {
            return Err(Error::Dimension(format!(
                "{n} positions, {} velocities, {} weights",
                velocities.len(),
                weights.len()
            )));
        }
        check_finite(positions.as_flattened(), "positions")?;
        check_finite(velocities.as_flattened(), "velocities")?;
        check_finite(&weights, "weights")?;
        if let Some(&w0) = weights.first() {
            if w0 <= 0.0 {
                return Err(Error::OutOfRange(format!("weight {w0} must be positive")));
            }
            if weights.iter().any(|&w| w != w0) {
                return Err(Error::OutOfRange("weights must be uniform".into()));
            }
        }
        let positions = positions.into_iter().map(|p| domain.wrap(p)).collect();
        let total_mass = weights.iter().sum();
        Ok(Self {
            domain,
            positions,
            velocities,
            weights,
            vdim,
            total_mass,
        })
    }

    /// Overrides the recorded mass estimate (the sampler records its `Q`).
    pub(crate) fn with_total_mass(mut self, q: f64) -> Self {
        self.total_mass = q;
        self
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn vdim(&self) -> usize {
        self.vdim
    }

    /// Integral of the initial distribution recorded when the ensemble was made.
    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    /// `0.5 sum_k w_k |v_k|^2`.
    pub fn kinetic_energy(&self, exec: Exec) -> f64 {
        0.5 * kinetic_sum(&self.velocities, &self.weights, exec)
    }

    /// Appends another ensemble on the same box with the same velocity dimension.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.vdim != other.vdim || self.domain != other.domain {
            return Err(Error::Dimension("incompatible ensembles".into()));
        }
        let mut out = self.clone();
        out.positions.extend_from_slice(&other.positions);
        out.velocities.extend_from_slice(&other.velocities);
        out.weights.extend_from_slice(&other.weights);
        Self::build(out.domain, out.positions, out.velocities, out.weights, out.vdim)
    }

    pub fn write_binary<W: Write>(&self, out: &mut W) -> Result<()> {
        out.write_all(if self.vdim == 3 { MAGIC_3V } else { MAGIC_2V })?;
        out.write_all(&(self.len() as u64).to_le_bytes())?;
        for p in &self.positions {
            for c in p {
                out.write_all(&c.to_le_bytes())?;
            }
        }
        for v in &self.velocities {
            for c in &v[..self.vdim] {
                out.write_all(&c.to_le_bytes())?;
            }
        }
        for w in &self.weights {
            out.write_all(&w.to_le_bytes())?;
        }
        Ok(())
    }

    /// Reads a dump; the periodic box is not part of the format.
    pub fn read_binary<R: Read>(input: &mut R, domain: Domain) -> Result<Self> {
        let mut magic = [0u8; 8];
        input.read_exact(&mut magic)?;
        let vdim = match &magic {
            m if m == MAGIC_2V => 2,
            m if m == MAGIC_3V => 3,
            _ => return Err(Error::Format("unknown magic".into())),
        };
        let mut word = [0u8; 8];
        input.read_exact(&mut word)?;
        let n = usize::try_from(u64::from_le_bytes(word))
            .map_err(|_| Error::Format("count overflows".into()))?;
        let mut next = || -> Result<f64> {
            input.read_exact(&mut word)?;
            Ok(f64::from_le_bytes(word))
        };
        let mut positions = Vec::with_capacity(n);
        for _ in 0..n {
            positions.push([next()?, next()?]);
        }
        let mut velocities = Vec::with_capacity(n);
        for _ in 0..n {
            let mut v = [0.0; 3];
            for c in v.iter_mut().take(vdim) {
                *c = next()?;
            }
            velocities.push(v);
        }
        let mut weights = Vec::with_capacity(n);
        for _ in 0..n {
            weights.push(next()?);
        }
        Self::build(domain, positions, velocities, weights, vdim)
    }
}

pub(crate) fn kinetic_sum(velocities: &[[f64; 3]], weights: &[f64], exec: Exec) -> f64 {
    exec.sum(velocities, |k, v| weights[k] * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]))
}
