//! Desk-scale acceptance suite. Prints one PASS/FAIL line per criterion.
//!
//! Pass names (`c1`..`c8`, `diocotron`) as arguments to run a subset.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use erpic::diagnostics::{angular_spectrum, compute_moments};
use erpic::integrator::{regime_coefficients, relaxation_gamma, Branch, ElectricModel, Regime, Scheme, Stepper};
use erpic::magnetic::{rotate_velocity, MagneticModel, Perturbation3D};
use erpic::mesh::{bspline_weights, deposit, interpolate_scalar, Domain, Grid2D, ScalarField, SpectralPoisson};
use erpic::{Exec, ParticleEnsemble};
use erpic_runner::config::SimulationConfig;
use erpic_runner::converge::{run_convergence, ConvergenceRow, ConvergenceSpec, ConvergenceTable, ReferenceCache};
use erpic_runner::preset::{preset, Scale};
use erpic_runner::run::run_simulation;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EXEC: Exec = Exec::Sequential;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

/// A criterion with a runtime budget. `known_gap` marks a criterion whose
/// failure is analysed in the project notes and does not set the exit status.
struct Criterion {
    name: &'static str,
    title: &'static str,
    budget: Duration,
    known_gap: bool,
    run: fn(&mut Context) -> Outcome,
}

#[derive(Default)]
struct Context {
    cache: ReferenceCache,
}

fn desk_example1() -> SimulationConfig {
    let mut c = preset("example1", Scale::Desk).expect("preset");
    c.output.snapshots.clear();
    c
}

fn fmt_orders(rows: &[&ConvergenceRow]) -> String {
    rows.iter()
        .map(|r| match r.order {
            Some(o) => format!("{:.3e}({o:.2})", r.error),
            None => format!("{:.3e}", r.error),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn print_table(table: &ConvergenceTable) {
    for eps in table.references.iter().map(|r| r.eps) {
        let rows: Vec<_> = table.rows_for(eps).collect();
        println!("      eps={eps:<8} {}", fmt_orders(&rows));
    }
    for r in &table.references {
        println!("      eps={:<8} reference drift {:.2e}", r.eps, r.drift);
    }
}

/// Strictly decreasing errors with at most one violation.
fn monotone(rows: &[&ConvergenceRow]) -> bool {
    rows.windows(2).filter(|w| w[1].error >= w[0].error).count() <= 1
}

fn energy_ok(rows: &[&ConvergenceRow], h_jump: f64, h_max: f64) -> bool {
    rows.iter().all(|r| r.max_real_root_jump <= h_jump && r.max_energy_error <= h_max)
}

fn c1_conservation(_: &mut Context) -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for scheme in [Scheme::Rs1, Scheme::Rs2] {
        let mut c = desk_example1();
        c.scheme = scheme;
        c.t_final = 20.0;
        let out = match run_simulation(&c, EXEC, false) {
            Ok(o) => o,
            Err(e) => return Outcome::new(false, format!("{}: {e}", scheme.name())),
        };
        let h0 = out.initial_energy;
        let mut prev = h0;
        let (mut worst_jump, mut worst_rel, mut real) = (0.0f64, 0.0f64, 0usize);
        for r in &out.records {
            if r.branch == Branch::RealRoot {
                real += 1;
                worst_jump = worst_jump.max((r.energy - prev).abs() / h0.abs());
            }
            worst_rel = worst_rel.max((r.energy - h0).abs() / h0.abs());
            prev = r.energy;
        }
        let ok = out.records.len() == 200 && worst_jump <= 1e-11 && worst_rel <= 1e-5;
        pass &= ok;
        lines.push(format!(
            "{}: {} steps, {real} real-root, max jump {worst_jump:.1e} (<= 1e-11), max rel err {worst_rel:.1e} (<= 1e-5)",
            scheme.name(),
            out.records.len()
        ));
    }
    Outcome::new(pass, lines.join("; "))
}

fn c2_psi1_invariance(_: &mut Context) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let grid = Grid2D::new(8, 8, Domain::new(0.0, 4.0 * PI, 0.0, 2.0 * PI).unwrap()).unwrap();
    let (mut worst, mut moved) = (0.0f64, 0usize);
    for _ in 0..10_000 {
        let n = rng.gen_range(1..12);
        let pos: Vec<[f64; 2]> = (0..n)
            .map(|_| [rng.gen_range(0.0..4.0 * PI), rng.gen_range(0.0..2.0 * PI)])
            .collect();
        let vel: Vec<[f64; 2]> = (0..n).map(|_| [rng.gen_range(-6.0..6.0), rng.gen_range(-6.0..6.0)]).collect();
        let ens = ParticleEnsemble::new_2d(grid.domain, pos, vel, vec![rng.gen_range(0.01..2.0); n]).unwrap();
        let regime = [Regime::Fluid, Regime::LarmorRescaled, Regime::DiffusionRescaled][rng.gen_range(0..3)];
        let eps = rng.gen_range(0.001..1.0);
        let stepper = Stepper::new(
            regime_coefficients(regime, eps).unwrap(),
            MagneticModel::example1(),
            ElectricModel::self_consistent(grid),
            EXEC,
        );
        let mut s = stepper.init_state(ens).unwrap();
        let before = s.clone();
        stepper.psi1_step(&mut s, rng.gen_range(0.0..1.0)).unwrap();
        let recomputed = stepper.total_energy(&s).unwrap();
        worst = worst.max((recomputed - before.energy).abs() / before.energy.abs());
        let same = s
            .ensemble
            .positions
            .iter()
            .zip(&before.ensemble.positions)
            .all(|(a, b)| a[0].to_bits() == b[0].to_bits() && a[1].to_bits() == b[1].to_bits());
        if !same {
            moved += 1;
        }
    }
    Outcome::new(
        worst <= 1e-13 && moved == 0,
        format!("10000 states: max rel energy change {worst:.1e} (<= 1e-13), states with moved positions {moved}"),
    )
}

fn c3_rs1_order(ctx: &mut Context) -> Outcome {
    let mut base = desk_example1();
    base.scheme = Scheme::Rs1;
    base.t_final = 1.0;
    let eps_list = vec![1.0, 0.25, 1.0 / 16.0, 1.0 / 64.0];
    let dt_list = vec![1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0];
    let spec = ConvergenceSpec {
        base,
        eps_list: eps_list.clone(),
        dt_list: dt_list.clone(),
        dt_ref: 1e-4,
    };
    let table = match run_convergence(&spec, EXEC, &mut ctx.cache) {
        Ok(t) => t,
        Err(e) => return Outcome::new(false, e.to_string()),
    };
    print_table(&table);
    let mut pass = true;
    let mut notes = Vec::new();
    for &eps in &eps_list {
        let rows: Vec<_> = table.rows_for(eps).collect();
        let orders: Vec<f64> = rows.iter().filter(|r| r.error < 0.1).filter_map(|r| r.order).collect();
        let ok = !orders.is_empty() && orders.iter().all(|o| (0.7..=1.3).contains(o)) && monotone(&rows);
        if !ok {
            notes.push(format!("eps={eps}: orders {orders:?}"));
        }
        pass &= ok;
    }
    let mut spread: f64 = 0.0;
    for &dt in &dt_list {
        let errs: Vec<f64> = table.rows.iter().filter(|r| r.dt == dt).map(|r| r.error).collect();
        let (lo, hi) = errs.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &e| (l.min(e), h.max(e)));
        spread = spread.max(hi / lo);
    }
    pass &= spread < 3.0;
    Outcome::new(
        pass,
        format!("orders in [0.7, 1.3] where err < 0.1; max spread across eps at fixed dt {spread:.2} (< 3) {}", notes.join("; ")),
    )
}

fn c4_rs2_order(ctx: &mut Context) -> Outcome {
    let mut base = desk_example1();
    base.scheme = Scheme::Rs2;
    base.t_final = 1.0;
    let eps_list = vec![1.0 / 16.0, 1.0 / 64.0];
    let spec = ConvergenceSpec {
        base,
        eps_list: eps_list.clone(),
        dt_list: vec![1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0],
        dt_ref: 1e-4,
    };
    let table = match run_convergence(&spec, EXEC, &mut ctx.cache) {
        Ok(t) => t,
        Err(e) => return Outcome::new(false, e.to_string()),
    };
    print_table(&table);
    let mut pass = true;
    let mut used = Vec::new();
    for &eps in &eps_list {
        let rows: Vec<_> = table.rows_for(eps).collect();
        // a row is asymptotic when its coarser step satisfies h^2 / eps <= 0.1
        for w in rows.windows(2) {
            if w[0].dt * w[0].dt / eps <= 0.1 {
                let o = w[1].order.unwrap();
                pass &= (1.7..=2.3).contains(&o);
                used.push(format!("eps={eps} dt={}: {o:.2}", w[1].dt));
            }
        }
        pass &= monotone(&rows);
    }
    pass &= !used.is_empty();
    Outcome::new(pass, format!("asymptotic orders in [1.7, 2.3]: {}", used.join(", ")))
}

fn c5_gamma_scaling(_: &mut Context) -> Outcome {
    let mut maxima = Vec::new();
    let mut medians = Vec::new();
    for dt in [0.1, 0.05, 0.025] {
        let mut c = desk_example1();
        c.scheme = Scheme::Rs2;
        c.t_final = 20.0;
        c.dt = dt;
        let out = match run_simulation(&c, EXEC, false) {
            Ok(o) => o,
            Err(e) => return Outcome::new(false, e.to_string()),
        };
        let mut g: Vec<f64> = out.records.iter().map(|r| r.gamma.abs()).collect();
        g.sort_by(f64::total_cmp);
        maxima.push(*g.last().unwrap());
        medians.push(g[g.len() / 2]);
    }
    let ratio = |v: &[f64]| [v[0] / v[1], v[1] / v[2]];
    let r = ratio(&maxima);
    let m = ratio(&medians);
    println!(
        "      max|gamma| {:.3e} {:.3e} {:.3e}; median|gamma| {:.3e} {:.3e} {:.3e} (median ratios {:.2}, {:.2})",
        maxima[0], maxima[1], maxima[2], medians[0], medians[1], medians[2], m[0], m[1]
    );
    Outcome::new(
        r.iter().all(|x| (2.5..=6.0).contains(x)),
        format!("max|gamma| ratios {:.2}, {:.2} (each in [2.5, 6])", r[0], r[1]),
    )
}

fn slope(rows: &[&ConvergenceRow]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows.iter().filter(|r| r.error < 0.1).map(|r| (r.dt.ln(), r.error.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

fn c6_regimes(ctx: &mut Context) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (scheme, band) in [(Scheme::Rs1, 0.7..=1.3), (Scheme::Rs2, 1.7..=2.3)] {
        let mut base = desk_example1();
        base.regime = Regime::LarmorRescaled;
        base.scheme = scheme;
        base.t_final = 1.0;
        let spec = ConvergenceSpec {
            base,
            eps_list: vec![0.5, 0.125],
            dt_list: vec![0.25, 0.125, 0.0625, 0.03125, 0.015625],
            dt_ref: 1.0 / 3200.0,
        };
        let table = match run_convergence(&spec, EXEC, &mut ctx.cache) {
            Ok(t) => t,
            Err(e) => return Outcome::new(false, e.to_string()),
        };
        println!("      larmor {}", scheme.name());
        print_table(&table);
        for eps in [0.5, 0.125] {
            let rows: Vec<_> = table.rows_for(eps).collect();
            let s = slope(&rows);
            let ok = s.is_some_and(|s| band.contains(&s)) && energy_ok(&rows, 1e-11, 1e-5);
            pass &= ok;
            let worst = rows.iter().map(|r| r.max_energy_error).fold(0.0, f64::max);
            parts.push(format!(
                "larmor {} eps={eps}: slope {:.2}, max rel energy err {worst:.1e}",
                scheme.name(),
                s.unwrap_or(f64::NAN)
            ));
        }
    }
    for scheme in [Scheme::Rs1, Scheme::Rs2] {
        let mut base = desk_example1();
        base.regime = Regime::DiffusionRescaled;
        base.scheme = scheme;
        base.t_final = 0.1;
        let spec = ConvergenceSpec {
            base,
            eps_list: vec![0.1, 0.05],
            dt_list: vec![0.25, 0.125, 0.0625, 0.03125],
            dt_ref: 1.0 / 1600.0,
        };
        let table = match run_convergence(&spec, EXEC, &mut ctx.cache) {
            Ok(t) => t,
            Err(e) => return Outcome::new(false, e.to_string()),
        };
        println!("      diffusion {}", scheme.name());
        print_table(&table);
        let first = |eps: f64| table.rows_for(eps).next().unwrap().error;
        let (e1, e2) = (first(0.1), first(0.05));
        pass &= e2 >= e1;
        parts.push(format!("diffusion {} at dtau=0.25: err(eps=0.1) {e1:.3} <= err(eps=0.05) {e2:.3}", scheme.name()));
    }
    Outcome::new(pass, parts.join("; "))
}

fn c7_oracles(_: &mut Context) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut notes = Vec::new();
    let mut pass = true;
    let mut check = |ok: bool, note: String| {
        pass &= ok;
        notes.push(note);
    };

    let pou = (0..10_000)
        .map(|_| (bspline_weights(rng.gen_range(0.0..1.0)).unwrap().iter().sum::<f64>() - 1.0).abs())
        .fold(0.0, f64::max);
    check(pou <= 1e-14, format!("partition of unity {pou:.1e}"));

    let grid = Grid2D::new(32, 16, Domain::new(0.0, 4.0 * PI, 0.0, 2.0 * PI).unwrap()).unwrap();
    let (mut charge, mut adjoint) = (0.0f64, 0.0f64);
    for _ in 0..200 {
        let n = rng.gen_range(1..500);
        let pos: Vec<[f64; 2]> = (0..n)
            .map(|_| [rng.gen_range(0.0..4.0 * PI), rng.gen_range(0.0..2.0 * PI)])
            .collect();
        let w = vec![rng.gen_range(0.01..1.0); n];
        let rho = deposit(&grid, &pos, &w, EXEC).unwrap();
        let total: f64 = w.iter().sum();
        charge = charge.max((rho.integral() - total).abs() / total);
        let (a, b) = (rng.gen_range(0.5..3.0), rng.gen_range(-1.0..1.0));
        let g = ScalarField::from_fn(grid, |x, y| (a * x).sin() * (y + b).cos() + b);
        let lhs: f64 = pos.iter().zip(&w).map(|(&p, wk)| wk * interpolate_scalar(&g, p)).sum();
        let rhs = grid.cell_area() * g.values.iter().zip(&rho.values).map(|(x, y)| x * y).sum::<f64>();
        adjoint = adjoint.max((lhs - rhs).abs() / (total * g.max_abs()));
    }
    check(charge <= 1e-12, format!("charge {charge:.1e}"));
    check(adjoint <= 1e-12, format!("adjointness {adjoint:.1e}"));

    let solver = SpectralPoisson::new(grid);
    let mut poisson = 0.0f64;
    for _ in 0..50 {
        let (m, n) = (rng.gen_range(1..8) as f64, rng.gen_range(-6..7) as f64);
        let (kx, ky) = (0.5 * m, n);
        let amp = rng.gen_range(-2.0..2.0);
        let rho = ScalarField::from_fn(grid, |x, y| 1.0 + amp * (kx * x + ky * y).cos());
        let e = solver.solve(&rho).unwrap();
        let k2 = kx * kx + ky * ky;
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                let [x, y] = grid.node(i, j);
                let s = amp * (kx * x + ky * y).sin() / k2;
                let idx = grid.index(i, j);
                poisson = poisson.max((e.x[idx] - kx * s).abs()).max((e.y[idx] - ky * s).abs());
            }
        }
    }
    check(poisson <= 1e-12, format!("poisson {poisson:.1e}"));

    // exact rotation about a tilted axis
    let mut rodrigues = 0.0f64;
    for _ in 0..1000 {
        let b: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(0.5..2.0)];
        let v: [f64; 3] = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
        let t = rng.gen_range(0.0..5.0);
        let model = MagneticModel::Vector3D {
            b0: b,
            b1: Perturbation3D::Zero,
        };
        let got = rotate_velocity(&model, [0.0, 0.0], v, t, 1.0).unwrap();
        let nb = (b[0] * b[0] + b[1] * b[1] + b[2] * b[2]).sqrt();
        let u = [b[0] / nb, b[1] / nb, b[2] / nb];
        let par = v[0] * u[0] + v[1] * u[1] + v[2] * u[2];
        let perp = [v[0] - par * u[0], v[1] - par * u[1], v[2] - par * u[2]];
        let cross = [
            perp[1] * u[2] - perp[2] * u[1],
            perp[2] * u[0] - perp[0] * u[2],
            perp[0] * u[1] - perp[1] * u[0],
        ];
        let (sn, cs) = (nb * t).sin_cos();
        for c in 0..3 {
            rodrigues = rodrigues.max((got[c] - (par * u[c] + cs * perp[c] + sn * cross[c])).abs());
        }
    }
    check(rodrigues <= 1e-12, format!("rodrigues {rodrigues:.1e}"));

    // one cyclotron period under RK4 against the circular orbit
    let dom = Domain::new(-1e3, 1e3, -1e3, 1e3).unwrap();
    let ens = ParticleEnsemble::new_2d(dom, vec![[0.0, 0.0]], vec![[1.0, 0.0]], vec![1.0]).unwrap();
    let stepper = Stepper::new(
        regime_coefficients(Regime::Fluid, 1.0).unwrap(),
        MagneticModel::uniform(1.0),
        ElectricModel::Zero,
        EXEC,
    );
    let mut s = stepper.init_state(ens).unwrap();
    let n = (2.0 * PI / 1e-4).round() as u64;
    let h = 2.0 * PI / n as f64;
    stepper.rk4_reference(&mut s, h, n).unwrap();
    let p = s.ensemble.positions[0];
    let orbit = p[0].hypot(p[1]);
    check(orbit <= 1e-10, format!("rk4 cyclotron {orbit:.1e}"));

    let mut residual = 0.0f64;
    for _ in 0..10_000 {
        let a = rng.gen_range(1e-3..10.0);
        let c = rng.gen_range(-10.0..10.0);
        let ht = rng.gen_range(-1.0..1.0);
        let (h, ke) = (rng.gen_range(1e-3..0.5), rng.gen_range(0.01..1.0));
        let r = relaxation_gamma(a, c, ht, h, ke, a);
        if r.branch == Branch::RealRoot {
            let x = h * ke * r.gamma;
            let q = 0.5 * a * x * x + c * x + ht;
            let scale = (0.5 * a * x * x).abs().max((c * x).abs()).max(ht.abs());
            residual = residual.max(q.abs() / scale);
        }
    }
    check(residual <= 1e-12, format!("relaxation residual {residual:.1e}"));
    Outcome::new(pass, notes.join(", "))
}

fn c8_determinism(_: &mut Context) -> Outcome {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let mut listings = Vec::new();
    for d in &dirs {
        let mut c = desk_example1();
        c.t_final = 2.0;
        c.output.dir = d.path().join("out");
        c.output.snapshots = vec![1.0, 2.0];
        match run_simulation(&c, EXEC, true) {
            Ok(o) => listings.push(o.files),
            Err(e) => return Outcome::new(false, e.to_string()),
        }
    }
    let mut compared = 0;
    let mut differing = Vec::new();
    for (a, b) in listings[0].iter().zip(&listings[1]) {
        let name = a.file_name().unwrap().to_string_lossy().to_string();
        if name == "manifest.json" {
            continue;
        }
        compared += 1;
        if std::fs::read(a).unwrap() != std::fs::read(b).unwrap() {
            differing.push(name);
        }
    }
    Outcome::new(
        differing.is_empty() && compared >= 4 && listings[0].len() == listings[1].len(),
        format!("{compared} output files compared, differing: {differing:?}"),
    )
}

fn diocotron_modes(_: &mut Context) -> Outcome {
    let mut c = preset("example2-diocotron", Scale::Desk).expect("preset");
    c.t_final = 40.0;
    c.output.snapshots.clear();
    let out = match run_simulation(&c, EXEC, false) {
        Ok(o) => o,
        Err(e) => return Outcome::new(false, e.to_string()),
    };
    let grid = c.grid2d().unwrap();
    let m = compute_moments(&out.state.ensemble, &grid, out.state.time, EXEC).unwrap();
    let power = angular_spectrum(&m.rho, [0.0, 0.0], 4.0, 9.0, 24, 128, 16);
    let peak = (1..power.len()).max_by(|&a, &b| power[a].total_cmp(&power[b])).unwrap();
    let top: Vec<String> = (1..=8).map(|k| format!("{k}:{:.1e}", power[k])).collect();
    Outcome::new(
        peak == 5,
        format!("t = {:.1}, off-zero angular peak at mode {peak} (want 5); power {}", out.state.time, top.join(" ")),
    )
}

fn main() {
    let criteria = [
        Criterion {
            name: "c1",
            title: "exact energy conservation",
            budget: Duration::from_secs(120),
            known_gap: false,
            run: c1_conservation,
        },
        Criterion {
            name: "c2",
            title: "rotation substep invariance",
            budget: Duration::from_secs(60),
            known_gap: false,
            run: c2_psi1_invariance,
        },
        Criterion {
            name: "c3",
            title: "RS1 uniform first order",
            budget: Duration::from_secs(600),
            known_gap: false,
            run: c3_rs1_order,
        },
        Criterion {
            name: "c4",
            title: "RS2 second order",
            budget: Duration::from_secs(600),
            known_gap: false,
            run: c4_rs2_order,
        },
        Criterion {
            name: "c5",
            title: "relaxation parameter O(h^2)",
            budget: Duration::from_secs(120),
            known_gap: true,
            run: c5_gamma_scaling,
        },
        Criterion {
            name: "c6",
            title: "Larmor and diffusion regimes",
            budget: Duration::from_secs(600),
            known_gap: false,
            run: c6_regimes,
        },
        Criterion {
            name: "c7",
            title: "oracle equivalences",
            budget: Duration::from_secs(60),
            known_gap: false,
            run: c7_oracles,
        },
        Criterion {
            name: "c8",
            title: "determinism",
            budget: Duration::from_secs(120),
            known_gap: false,
            run: c8_determinism,
        },
        Criterion {
            name: "diocotron",
            title: "diocotron l=5 multiplicity",
            budget: Duration::from_secs(600),
            known_gap: false,
            run: diocotron_modes,
        },
    ];
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut ctx = Context::default();
    let (mut passed, mut failed, mut gaps) = (0, 0, 0);
    for c in &criteria {
        if !filters.is_empty() && !filters.iter().any(|f| f == c.name) {
            continue;
        }
        let start = Instant::now();
        let outcome = (c.run)(&mut ctx);
        let took = start.elapsed();
        let in_budget = took <= c.budget;
        let pass = outcome.pass && in_budget;
        let status = if pass { "PASS" } else { "FAIL" };
        let budget_note = if in_budget {
            String::new()
        } else {
            format!(" over budget {:.0} s", c.budget.as_secs_f64())
        };
        println!(
            "{status} {} {}: {} [{:.1} s{budget_note}]",
            c.name,
            c.title,
            outcome.detail,
            took.as_secs_f64()
        );
        match (pass, c.known_gap) {
            (true, _) => passed += 1,
            (false, true) => {
                gaps += 1;
                println!("     {} is a documented gap and does not set the exit status", c.name);
            }
            (false, false) => failed += 1,
        }
    }
    println!("acceptance: {passed} passed, {failed} failed, {gaps} documented gap(s)");
    if failed > 0 {
        std::process::exit(1);
    }
}
