//! Splitting steppers and the RK4 reference integrator.

use super::field::{ElectricModel, FieldSample};
use super::regime::RegimeCoefficients;
use super::relaxation::{relaxation_gamma, Branch, Relaxation};
use super::state::{Scheme, SimState, StepRecord};
use crate::ensemble::{kinetic_sum, ParticleEnsemble};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::magnetic::{cross, rotate_velocity, MagneticModel};
use crate::mesh::field_energy;

/// Unrelaxed kick-drift update and the data needed to relax it.
#[derive(Debug, Clone)]
pub struct Psi2Prediction {
    /// Half-drift positions `x + h v / 2` (wrapped).
    pub x1: Vec<[f64; 2]>,
    /// `x + h v + h^2 kappa_e E(X1) / 2` (wrapped).
    pub x_new: Vec<[f64; 2]>,
    /// `v + h kappa_e E(X1)`.
    pub v_tilde: Vec<[f64; 3]>,
    pub e_x1: Vec<[f64; 2]>,
    /// Field generated by `x_new`.
    pub field_new: FieldSample,
}

/// Everything a step needs besides the state.
#[derive(Debug, Clone)]
pub struct Stepper {
    pub coeffs: RegimeCoefficients,
    pub magnetic: MagneticModel,
    pub electric: ElectricModel,
    pub exec: Exec,
}

fn map_indexed<T, F>(exec: Exec, n: usize, f: F) -> Vec<T>
where
    T: Default + Clone + Send,
    F: Fn(usize) -> T + Sync + Send,
{
    let mut out = vec![T::default(); n];
    exec.for_chunks_mut(&mut out, |offset, chunk| {
        for (k, slot) in chunk.iter_mut().enumerate() {
            *slot = f(offset + k);
        }
    });
    out
}

fn check_step(h: f64) -> Result<()> {
    if h.is_finite() && h >= 0.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!("step size must be finite and non-negative (got {h})")))
    }
}

impl Stepper {
    pub fn new(coeffs: RegimeCoefficients, magnetic: MagneticModel, electric: ElectricModel, exec: Exec) -> Self {
        Self {
            coeffs,
            magnetic,
            electric,
            exec,
        }
    }

    /// State at time 0 with its field and energy.
    pub fn init_state(&self, ensemble: ParticleEnsemble) -> Result<SimState> {
        let field = self.solve(&ensemble.positions, &ensemble.weights)?;
        let energy = 0.5 * kinetic_sum(&ensemble.velocities, &ensemble.weights, self.exec) + field.energy;
        Ok(SimState {
            ensemble,
            time: 0.0,
            step_index: 0,
            field,
            energy,
        })
    }

    fn solve(&self, positions: &[[f64; 2]], weights: &[f64]) -> Result<FieldSample> {
        self.electric.solve(positions, weights, self.coeffs.lambda, self.exec)
    }

    /// `0.5 sum w |v|^2` plus the field energy of the stored field.
    pub fn total_energy(&self, state: &SimState) -> Result<f64> {
        let ens = &state.ensemble;
        let kinetic = 0.5 * kinetic_sum(&ens.velocities, &ens.weights, self.exec);
        let field = match &state.field.grid_field {
            Some(e) => field_energy(e, self.coeffs.lambda),
            None => self.solve(&ens.positions, &ens.weights)?.energy,
        };
        Ok(kinetic + field)
    }

    /// Exact gyration over `h` with positions frozen.
    pub fn psi1_step(&self, state: &mut SimState, h: f64) -> Result<()> {
        check_step(h)?;
        if h == 0.0 {
            return Ok(());
        }
        let theta = self.coeffs.kappa_b * h;
        let eps = self.coeffs.eps;
        let ens = &mut state.ensemble;
        let positions = &ens.positions;
        let rotated = self.exec.map_chunks(&ens.velocities, |offset, chunk| {
            chunk
                .iter()
                .enumerate()
                .map(|(i, &v)| rotate_velocity(&self.magnetic, positions[offset + i], v, theta, eps))
                .collect::<Result<Vec<_>>>()
        });
        let mut k = 0;
        for part in rotated {
            for v in part? {
                ens.velocities[k] = v;
                k += 1;
            }
        }
        state.energy = 0.5 * kinetic_sum(&ens.velocities, &ens.weights, self.exec) + state.field.energy;
        Ok(())
    }

    /// Unrelaxed kick-drift-kick predictor (two field solves).
    pub fn psi2_predict(&self, state: &SimState, h: f64) -> Result<Psi2Prediction> {
        check_step(h)?;
        let ens = &state.ensemble;
        let dom = ens.domain;
        let (x, v) = (&ens.positions, &ens.velocities);
        let n = ens.len();
        let ke = self.coeffs.kappa_e;
        let x1 = map_indexed(self.exec, n, |k| {
            dom.wrap([x[k][0] + 0.5 * h * v[k][0], x[k][1] + 0.5 * h * v[k][1]])
        });
        let field_x1 = self.solve(&x1, &ens.weights)?;
        let e_x1 = self.electric.evaluate(&field_x1, &x1, self.exec);
        let half_h2 = 0.5 * h * h * ke;
        let x_new = map_indexed(self.exec, n, |k| {
            dom.wrap([
                x[k][0] + h * v[k][0] + half_h2 * e_x1[k][0],
                x[k][1] + h * v[k][1] + half_h2 * e_x1[k][1],
            ])
        });
        let v_tilde = map_indexed(self.exec, n, |k| {
            [v[k][0] + h * ke * e_x1[k][0], v[k][1] + h * ke * e_x1[k][1], v[k][2]]
        });
        let field_new = self.solve(&x_new, &ens.weights)?;
        Ok(Psi2Prediction {
            x1,
            x_new,
            v_tilde,
            e_x1,
            field_new,
        })
    }

    /// Relaxed Störmer–Verlet step; advances the clock by `h`.
    pub fn psi2_step(&self, state: &mut SimState, h: f64) -> Result<StepRecord> {
        check_step(h)?;
        if h == 0.0 {
            return Ok(self.record(state, 0.0, Branch::RealRoot, 0.0));
        }
        let p = self.psi2_predict(state, h)?;
        let w = &state.ensemble.weights;
        let exec = self.exec;
        let h_tilde = 0.5 * kinetic_sum(&p.v_tilde, w, exec) + p.field_new.energy - state.energy;
        let a = exec.sum(&p.e_x1, |k, e| w[k] * (e[0] * e[0] + e[1] * e[1]));
        let c = exec.sum(&p.e_x1, |k, e| w[k] * (e[0] * p.v_tilde[k][0] + e[1] * p.v_tilde[k][1]));
        let e_max = p.e_x1.iter().fold(0.0f64, |m, e| m.max(e[0] * e[0] + e[1] * e[1]));
        let a_scale = w.iter().sum::<f64>() * e_max.max(1.0);
        let Relaxation {
            gamma,
            branch,
            discriminant,
        } = relaxation_gamma(a, c, h_tilde, h, self.coeffs.kappa_e, a_scale);
        let kick = h * gamma * self.coeffs.kappa_e;
        let mut v_new = p.v_tilde;
        if kick != 0.0 {
            let e_x1 = &p.e_x1;
            exec.for_chunks_mut(&mut v_new, |offset, chunk| {
                for (i, v) in chunk.iter_mut().enumerate() {
                    let e = e_x1[offset + i];
                    v[0] += kick * e[0];
                    v[1] += kick * e[1];
                }
            });
        }
        let ens = &mut state.ensemble;
        ens.positions = p.x_new;
        ens.velocities = v_new;
        state.field = p.field_new;
        state.energy = 0.5 * kinetic_sum(&ens.velocities, &ens.weights, exec) + state.field.energy;
        state.time += h;
        state.step_index += 1;
        Ok(self.record(state, gamma, branch, discriminant))
    }

    fn record(&self, state: &SimState, gamma: f64, branch: Branch, discriminant: f64) -> StepRecord {
        StepRecord {
            step_index: state.step_index,
            time: state.time,
            energy: state.energy,
            gamma,
            branch,
            discriminant,
        }
    }

    /// Lie–Trotter composition: gyration over `h`, then the relaxed kick-drift.
    pub fn step_rs1(&self, state: &mut SimState, h: f64) -> Result<StepRecord> {
        self.psi1_step(state, h)?;
        self.psi2_step(state, h)
    }

    /// Strang composition: half gyration, relaxed kick-drift, half gyration.
    pub fn step_rs2(&self, state: &mut SimState, h: f64) -> Result<StepRecord> {
        self.psi1_step(state, 0.5 * h)?;
        let rec = self.psi2_step(state, h)?;
        self.psi1_step(state, 0.5 * h)?;
        Ok(StepRecord {
            energy: state.energy,
            ..rec
        })
    }

    pub fn step(&self, scheme: Scheme, state: &mut SimState, h: f64) -> Result<StepRecord> {
        match scheme {
            Scheme::Rs1 => self.step_rs1(state, h),
            Scheme::Rs2 => self.step_rs2(state, h),
            Scheme::Rk4Ref => self.rk4_step(state, h),
        }
    }

    /// `dv/dt = kappa_B v x B(x) + kappa_E E(x)` for all particles.
    fn acceleration(
        &self,
        positions: &[[f64; 2]],
        velocities: &[[f64; 3]],
        weights: &[f64],
        field: Option<&FieldSample>,
    ) -> Result<Vec<[f64; 3]>> {
        let solved;
        let field = match field {
            Some(f) => f,
            None => {
                solved = self.solve(positions, weights)?;
                &solved
            }
        };
        let e = self.electric.evaluate(field, positions, self.exec);
        let (kb, ke, eps) = (self.coeffs.kappa_b, self.coeffs.kappa_e, self.coeffs.eps);
        let parts = self.exec.map_chunks(velocities, |offset, chunk| {
            chunk
                .iter()
                .enumerate()
                .map(|(i, &v)| {
                    let k = offset + i;
                    let rot = match self.magnetic {
                        MagneticModel::Scalar2D { .. } => {
                            let b = self.magnetic.scalar(positions[k], eps)?;
                            [b * v[1], -b * v[0], 0.0]
                        }
                        MagneticModel::Vector3D { .. } => cross(v, self.magnetic.vector(positions[k], eps)?),
                    };
                    Ok([kb * rot[0] + ke * e[k][0], kb * rot[1] + ke * e[k][1], kb * rot[2]])
                })
                .collect::<Result<Vec<_>>>()
        });
        let mut out = Vec::with_capacity(velocities.len());
        for part in parts {
            out.extend(part?);
        }
        Ok(out)
    }

    /// One classical RK4 step with the field re-solved at every stage.
    pub fn rk4_step(&self, state: &mut SimState, h: f64) -> Result<StepRecord> {
        check_step(h)?;
        if h == 0.0 {
            return Ok(self.record(state, 0.0, Branch::Unrelaxed, 0.0));
        }
        let ens = &state.ensemble;
        let dom = ens.domain;
        let w = &ens.weights;
        let (x0, v0) = (&ens.positions, &ens.velocities);
        let n = ens.len();
        let exec = self.exec;
        let stage_x = |kx: &[[f64; 3]], c: f64| -> Vec<[f64; 2]> {
            map_indexed(exec, n, |k| dom.wrap([x0[k][0] + c * kx[k][0], x0[k][1] + c * kx[k][1]]))
        };
        let stage_v = |kv: &[[f64; 3]], c: f64| -> Vec<[f64; 3]> {
            map_indexed(exec, n, |k| {
                [v0[k][0] + c * kv[k][0], v0[k][1] + c * kv[k][1], v0[k][2] + c * kv[k][2]]
            })
        };
        // position slopes are the stage velocities
        let a1 = self.acceleration(x0, v0, w, Some(&state.field))?;
        let (x2, v2) = (stage_x(v0, 0.5 * h), stage_v(&a1, 0.5 * h));
        let a2 = self.acceleration(&x2, &v2, w, None)?;
        let (x3, v3) = (stage_x(&v2, 0.5 * h), stage_v(&a2, 0.5 * h));
        let a3 = self.acceleration(&x3, &v3, w, None)?;
        let (x4, v4) = (stage_x(&v3, h), stage_v(&a3, h));
        let a4 = self.acceleration(&x4, &v4, w, None)?;
        let h6 = h / 6.0;
        let x_new = map_indexed(exec, n, |k| {
            let dx = |d: usize| v0[k][d] + 2.0 * v2[k][d] + 2.0 * v3[k][d] + v4[k][d];
            dom.wrap([x0[k][0] + h6 * dx(0), x0[k][1] + h6 * dx(1)])
        });
        let v_new = map_indexed(exec, n, |k| {
            let dv = |d: usize| a1[k][d] + 2.0 * a2[k][d] + 2.0 * a3[k][d] + a4[k][d];
            [v0[k][0] + h6 * dv(0), v0[k][1] + h6 * dv(1), v0[k][2] + h6 * dv(2)]
        });
        let field = self.solve(&x_new, w)?;
        let ens = &mut state.ensemble;
        ens.positions = x_new;
        ens.velocities = v_new;
        state.field = field;
        state.energy = 0.5 * kinetic_sum(&ens.velocities, &ens.weights, exec) + state.field.energy;
        state.time += h;
        state.step_index += 1;
        Ok(self.record(state, 0.0, Branch::Unrelaxed, 0.0))
    }

    /// `n_steps` RK4 steps of size `h_ref`.
    pub fn rk4_reference(&self, state: &mut SimState, h_ref: f64, n_steps: u64) -> Result<()> {
        for _ in 0..n_steps {
            self.rk4_step(state, h_ref)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrator::regime::{regime_coefficients, Regime};
    use crate::mesh::{Domain, Grid2D};

    /// Box large enough that single-particle orbits never wrap.
    fn wide_domain() -> Domain {
        Domain::new(-1e3, 1e3, -1e3, 1e3).unwrap()
    }

    fn single(x: [f64; 2], v: [f64; 2]) -> ParticleEnsemble {
        ParticleEnsemble::new_2d(wide_domain(), vec![x], vec![v], vec![1.0]).unwrap()
    }

    fn zero_field_stepper(eps: f64) -> Stepper {
        Stepper::new(
            regime_coefficients(Regime::Fluid, eps).unwrap(),
            MagneticModel::uniform(1.0),
            ElectricModel::Zero,
            Exec::Sequential,
        )
    }

    /// Exact cyclotron orbit for `v' = omega v_perp` from `(x0, v0)`.
    fn cyclotron(x0: [f64; 2], v0: [f64; 2], omega: f64, t: f64) -> [f64; 2] {
        let (s, c) = (omega * t).sin_cos();
        [
            x0[0] + (s * v0[0] + (1.0 - c) * v0[1]) / omega,
            x0[1] + (-(1.0 - c) * v0[0] + s * v0[1]) / omega,
        ]
    }

    fn toy_state(st: &Stepper) -> SimState {
        let d = Domain::new(0.0, 2.0 * std::f64::consts::PI, 0.0, 2.0 * std::f64::consts::PI).unwrap();
        let pos = vec![[0.3, 1.1], [2.5, 4.0], [5.9, 0.2], [3.3, 3.3]];
        let vel = vec![[0.4, -0.2], [-1.0, 0.5], [0.1, 0.9], [0.7, 0.7]];
        st.init_state(ParticleEnsemble::new_2d(d, pos, vel, vec![0.25; 4]).unwrap()).unwrap()
    }

    fn toy_stepper() -> Stepper {
        let d = Domain::new(0.0, 2.0 * std::f64::consts::PI, 0.0, 2.0 * std::f64::consts::PI).unwrap();
        Stepper::new(
            regime_coefficients(Regime::Fluid, 0.5).unwrap(),
            MagneticModel::example1(),
            ElectricModel::self_consistent(Grid2D::new(16, 16, d).unwrap()),
            Exec::Sequential,
        )
    }

    #[test]
    fn psi1_zero_step_is_identity() {
        let st = toy_stepper();
        let mut s = toy_state(&st);
        let before = s.clone();
        st.psi1_step(&mut s, 0.0).unwrap();
        assert_eq!(s.ensemble, before.ensemble);
        assert_eq!(s.energy, before.energy);
    }

    #[test]
    fn psi1_keeps_positions_and_energy() {
        let st = toy_stepper();
        let mut s = toy_state(&st);
        let before = s.clone();
        st.psi1_step(&mut s, 0.37).unwrap();
        assert_eq!(s.ensemble.positions, before.ensemble.positions);
        assert!((s.energy - before.energy).abs() <= 1e-13 * before.energy);
        assert!((st.total_energy(&s).unwrap() - before.energy).abs() <= 1e-13 * before.energy);
    }

    #[test]
    fn psi1_half_steps_compose() {
        let st = zero_field_stepper(0.1);
        let mut a = st.init_state(single([0.0, 0.0], [1.0, 0.5])).unwrap();
        let mut b = a.clone();
        st.psi1_step(&mut a, 0.2).unwrap();
        st.psi1_step(&mut b, 0.1).unwrap();
        st.psi1_step(&mut b, 0.1).unwrap();
        for d in 0..2 {
            assert!((a.ensemble.velocities[0][d] - b.ensemble.velocities[0][d]).abs() < 1e-14);
        }
    }

    #[test]
    fn free_streaming_without_field() {
        let st = zero_field_stepper(0.1);
        let s = st.init_state(single([1.0, 2.0], [0.5, -0.25])).unwrap();
        let p = st.psi2_predict(&s, 0.2).unwrap();
        assert_eq!(p.x_new[0], [1.1, 1.95]);
        assert_eq!(p.v_tilde[0], [0.5, -0.25, 0.0]);
        assert_eq!(p.x1[0], [1.05, 1.975]);
    }

    #[test]
    fn resting_particles_feel_only_the_kick() {
        let st = toy_stepper();
        let mut s = toy_state(&st);
        for v in &mut s.ensemble.velocities {
            *v = [0.0; 3];
        }
        let h = 0.3;
        let p = st.psi2_predict(&s, h).unwrap();
        for k in 0..4 {
            assert_eq!(p.x1[k], s.ensemble.positions[k]);
            let want = s.ensemble.domain.wrap([
                s.ensemble.positions[k][0] + 0.5 * h * h * p.e_x1[k][0],
                s.ensemble.positions[k][1] + 0.5 * h * h * p.e_x1[k][1],
            ]);
            assert_eq!(p.x_new[k], want);
        }
    }

    #[test]
    fn relaxed_step_conserves_energy() {
        let st = toy_stepper();
        let mut s = toy_state(&st);
        let h0 = s.energy;
        for _ in 0..50 {
            let rec = st.step_rs2(&mut s, 0.1).unwrap();
            if rec.branch == Branch::RealRoot {
                assert!((rec.energy - h0).abs() <= 1e-11 * h0, "{rec:?}");
            }
        }
        assert!((st.total_energy(&s).unwrap() - s.energy).abs() <= 1e-14 * h0);
    }

    #[test]
    fn zero_step_schemes_are_identity() {
        let st = toy_stepper();
        let s0 = toy_state(&st);
        for scheme in [Scheme::Rs1, Scheme::Rs2, Scheme::Rk4Ref] {
            let mut s = s0.clone();
            st.step(scheme, &mut s, 0.0).unwrap();
            assert_eq!(s.ensemble, s0.ensemble);
            assert_eq!(s.time, 0.0);
        }
    }

    #[test]
    fn negative_step_rejected() {
        let st = toy_stepper();
        let mut s = toy_state(&st);
        assert!(st.step_rs1(&mut s, -0.1).is_err());
        assert!(st.step_rs2(&mut s, f64::NAN).is_err());
    }

    #[test]
    fn uniform_density_streams_freely() {
        let d = Domain::new(0.0, 1.0, 0.0, 1.0).unwrap();
        let grid = Grid2D::new(8, 8, d).unwrap();
        let st = Stepper::new(
            regime_coefficients(Regime::Fluid, 1.0).unwrap(),
            MagneticModel::uniform(0.0),
            ElectricModel::self_consistent(grid),
            Exec::Sequential,
        );
        // a lattice translating rigidly keeps a uniform density
        let pos: Vec<[f64; 2]> = (0..64).map(|i| grid.node(i % 8, i / 8)).collect();
        let ens = ParticleEnsemble::new_2d(d, pos, vec![[0.125, 0.0]; 64], vec![1.0 / 64.0; 64]).unwrap();
        let mut s = st.init_state(ens).unwrap();
        let h0 = s.energy;
        let rec = st.psi2_step(&mut s, 1.0).unwrap();
        assert_eq!(rec.branch, Branch::DegenerateA);
        assert_eq!(rec.gamma, 0.0);
        assert!((rec.energy - h0).abs() <= 1e-15 * h0);
        assert!((s.ensemble.positions[0][0] - 0.125).abs() < 1e-15);
    }

    #[test]
    fn rk4_reproduces_cyclotron_orbit() {
        let st = zero_field_stepper(1.0);
        let (x0, v0) = ([0.5, -0.25], [1.0, 0.5]);
        let mut s = st.init_state(single(x0, v0)).unwrap();
        let h = 1e-4;
        let n = (2.0 * std::f64::consts::PI / h).round() as u64;
        st.rk4_reference(&mut s, h, n).unwrap();
        let want = cyclotron(x0, v0, 1.0, n as f64 * h);
        let got = s.ensemble.positions[0];
        assert!((got[0] - want[0]).abs() < 1e-10 && (got[1] - want[1]).abs() < 1e-10, "{got:?} vs {want:?}");
    }

    #[test]
    fn rk4_halving_converges() {
        let st = zero_field_stepper(0.5);
        let (x0, v0) = ([0.5, -0.25], [1.0, 0.5]);
        let mut a = st.init_state(single(x0, v0)).unwrap();
        let mut b = a.clone();
        st.rk4_reference(&mut a, 1e-3, 1000).unwrap();
        st.rk4_reference(&mut b, 5e-4, 2000).unwrap();
        let (pa, pb) = (a.ensemble.positions[0], b.ensemble.positions[0]);
        let scale = pa[0].hypot(pa[1]);
        assert!((pa[0] - pb[0]).hypot(pa[1] - pb[1]) <= 1e-12 * scale);
    }

    /// `exp(M t) y` for a 4x4 matrix by scaling and squaring a Taylor series.
    fn expm_apply(m: [[f64; 4]; 4], t: f64, y: [f64; 4]) -> [f64; 4] {
        let mul = |a: &[[f64; 4]; 4], b: &[[f64; 4]; 4]| {
            let mut c = [[0.0; 4]; 4];
            for i in 0..4 {
                for j in 0..4 {
                    for k in 0..4 {
                        c[i][j] += a[i][k] * b[k][j];
                    }
                }
            }
            c
        };
        let squarings = 10;
        let s = t / f64::from(1u32 << squarings);
        let mut e = [[0.0; 4]; 4];
        let mut term = [[0.0; 4]; 4];
        for i in 0..4 {
            e[i][i] = 1.0;
            term[i][i] = 1.0;
        }
        let ms = m.map(|row| row.map(|x| x * s));
        for k in 1..30 {
            term = mul(&term, &ms).map(|row| row.map(|x| x / k as f64));
            for i in 0..4 {
                for j in 0..4 {
                    e[i][j] += term[i][j];
                }
            }
        }
        for _ in 0..squarings {
            e = mul(&e, &e);
        }
        let mut out = [0.0; 4];
        for i in 0..4 {
            for j in 0..4 {
                out[i] += e[i][j] * y[j];
            }
        }
        out
    }

    #[test]
    fn rk4_matches_linear_system() {
        let k = 2.0;
        let eps = 0.5;
        let st = Stepper::new(
            regime_coefficients(Regime::Fluid, eps).unwrap(),
            MagneticModel::uniform(1.0),
            ElectricModel::external(move |x| [-k * x[0], -k * x[1]], move |x| 0.5 * k * (x[0] * x[0] + x[1] * x[1])),
            Exec::Sequential,
        );
        let (x0, v0) = ([0.3, -0.2], [0.5, 1.0]);
        let mut s = st.init_state(single(x0, v0)).unwrap();
        st.rk4_reference(&mut s, 1e-3, 1000).unwrap();
        // y = (x1, x2, v1, v2): x' = v, v' = (v2, -v1)/eps - k x
        let wb = 1.0 / eps;
        let m = [
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [-k, 0.0, 0.0, wb],
            [0.0, -k, -wb, 0.0],
        ];
        let y = expm_apply(m, 1.0, [x0[0], x0[1], v0[0], v0[1]]);
        let p = s.ensemble.positions[0];
        let v = s.ensemble.velocities[0];
        for (got, want) in [p[0], p[1], v[0], v[1]].iter().zip(y) {
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }
        // the external potential enters the conserved energy
        assert!((s.energy - st.init_state(single(x0, v0)).unwrap().energy).abs() < 1e-10);
    }

    #[test]
    fn rs1_cyclotron_error_is_first_order_uniformly() {
        let (x0, v0) = ([0.0, 0.0], [1.0, 0.5]);
        let t_end = 1.0;
        let mut constants = Vec::new();
        for eps in [1.0, 1.0 / 16.0, 1.0 / 256.0] {
            let st = zero_field_stepper(eps);
            let mut c = 0.0f64;
            // steps kept away from omega h = 2 pi m, where the gyro phase resonates
            for h in [0.125f64, 0.0625, 0.03125] {
                let mut s = st.init_state(single(x0, v0)).unwrap();
                let n = (t_end / h).round() as usize;
                let mut err = 0.0f64;
                for _ in 0..n {
                    st.step_rs1(&mut s, h).unwrap();
                    let want = cyclotron(x0, v0, 1.0 / eps, s.time);
                    let p = s.ensemble.positions[0];
                    err = err.max((p[0] - want[0]).hypot(p[1] - want[1]));
                }
                c = c.max(err / h);
            }
            constants.push(c);
        }
        let lo = constants.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = constants.iter().cloned().fold(0.0, f64::max);
        assert!(hi <= 10.0 && hi / lo <= 10.0, "{constants:?}");
    }
}
