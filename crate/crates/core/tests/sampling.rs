use std::f64::consts::PI;

use erpic::sampling::{distribution_integral, sample_ensemble, InitialDistribution};

#[test]
fn same_seed_same_ensemble() {
    let d = InitialDistribution::two_bump(0.05, 0.5).unwrap();
    let a = sample_ensemble(&d, 3000, 11).unwrap();
    let b = sample_ensemble(&d, 3000, 11).unwrap();
    assert_eq!(a.positions, b.positions);
    assert_eq!(a.velocities, b.velocities);
    assert_eq!(a.weights, b.weights);
    let c = sample_ensemble(&d, 3000, 12).unwrap();
    assert_ne!(a.positions, c.positions);
}

#[test]
fn weights_are_uniform_and_sum_to_the_integral() {
    let d = InitialDistribution::two_bump(0.05, 0.5).unwrap();
    let e = sample_ensemble(&d, 5000, 2).unwrap();
    let w0 = e.weights[0];
    assert!(w0 > 0.0);
    assert!(e.weights.iter().all(|&w| w == w0));
    let q = distribution_integral(&d);
    assert!((e.total_mass() - q).abs() <= 1e-12 * q);
    assert!(e.positions.iter().all(|&p| d.domain.contains(p)));
}

#[test]
fn symmetric_bumps_have_zero_mean_velocity() {
    let d = InitialDistribution::two_bump(0.0, 0.5).unwrap();
    let n = 50_000;
    let e = sample_ensemble(&d, n, 5).unwrap();
    let v1: Vec<f64> = e.velocities.iter().map(|v| v[0]).collect();
    let mean = v1.iter().sum::<f64>() / n as f64;
    let var = v1.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    assert!(mean.abs() <= 4.0 * (var / n as f64).sqrt(), "mean {mean}, var {var}");
}

#[test]
fn kinetic_moment_matches_the_mixture() {
    // each bump has E|v|^2 = |(2, 0)|^2 + 2 = 6
    let d = InitialDistribution::two_bump(0.05, 0.5).unwrap();
    let n = 100_000;
    let e = sample_ensemble(&d, n, 9).unwrap();
    let sq: Vec<f64> = e.velocities.iter().map(|v| v[0] * v[0] + v[1] * v[1]).collect();
    let mean = sq.iter().sum::<f64>() / n as f64;
    let var = sq.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let se = (var / n as f64).sqrt();
    assert!((mean - 6.0).abs() <= 5.0 * se, "mean {mean}, se {se}");
}

/// `int_0^{2 pi} max(a + sin y, 0) dy` by the midpoint rule.
fn column_mass(a: f64) -> f64 {
    let m = 4000;
    let h = 2.0 * PI / m as f64;
    (0..m).map(|j| (a + ((j as f64 + 0.5) * h).sin()).max(0.0) * h).sum()
}

#[test]
fn spatial_histogram_passes_chi_square() {
    let (eta, k) = (0.05, 0.5);
    let d = InitialDistribution::two_bump(eta, k).unwrap();
    let n = 100_000;
    let e = sample_ensemble(&d, n, 21).unwrap();
    let bins = 32;
    let lx = d.domain.lx();
    let mut counts = vec![0usize; bins];
    for p in &e.positions {
        let b = ((p[0] - d.domain.x_lo) / lx * bins as f64) as usize;
        counts[b.min(bins - 1)] += 1;
    }
    // expected mass per bin, integrated with 40 sub-points per bin
    let sub = 40;
    let mass: Vec<f64> = (0..bins)
        .map(|b| {
            (0..sub)
                .map(|s| {
                    let x1 = (b as f64 + (s as f64 + 0.5) / sub as f64) * lx / bins as f64;
                    column_mass(1.0 + eta * (k * x1).cos())
                })
                .sum::<f64>()
        })
        .collect();
    let total: f64 = mass.iter().sum();
    let chi2: f64 = counts
        .iter()
        .zip(&mass)
        .map(|(&c, &m)| {
            let expected = n as f64 * m / total;
            (c as f64 - expected).powi(2) / expected
        })
        .sum();
    // 99th percentile of chi-square with 31 degrees of freedom
    assert!(chi2 < 52.19, "chi2 = {chi2}");
    // and the modulation is visible: first bins (cos > 0) outweigh the middle ones
    let first: usize = counts[..4].iter().sum();
    let middle: usize = counts[14..18].iter().sum();
    assert!(first > middle);
}

#[test]
fn two_bump_integral_is_close_to_eight_pi_squared() {
    // the smooth density integrates to 8 pi^2; sampling keeps only its positive
    // part, which adds the small mass where 1 + eta cos(k x1) + sin(x2) < 0
    let d = InitialDistribution::two_bump(0.05, 0.5).unwrap();
    let q = distribution_integral(&d);
    let target = 8.0 * PI * PI;
    let n1 = 2000;
    let h1 = d.domain.lx() / n1 as f64;
    let brute: f64 = (0..n1)
        .map(|i| column_mass(1.0 + 0.05 * (0.5 * (i as f64 + 0.5) * h1).cos()) * h1)
        .sum();
    assert!((q - brute).abs() < 1e-6 * q, "{q} vs {brute}");
    assert!(q > target && (q - target) / target < 5e-3, "{q}");

}

#[test]
fn ring_integral_matches_radial_quadrature() {
    let d = InitialDistribution::diocotron(0.0, 5, 5.0, 8.0, 12.0).unwrap();
    let q = distribution_integral(&d);
    // fine midpoint rule in r
    let m = 200_000;
    let h = 3.0 / m as f64;
    let radial: f64 = (0..m)
        .map(|i| {
            let r = 5.0 + (i as f64 + 0.5) * h;
            r * (-4.0 * (r - 6.5f64).powi(2)).exp() * h
        })
        .sum();
    assert!((q - 2.0 * PI * radial).abs() < 1e-8 * q, "{q}");
    // the angular modulation does not change the mass
    let modulated = InitialDistribution::diocotron(0.2, 5, 5.0, 8.0, 12.0).unwrap();
    assert!((distribution_integral(&modulated) - q).abs() < 1e-12 * q);
}

#[test]
fn ring_samples_stay_in_the_annulus() {
    let d = InitialDistribution::diocotron(0.2, 5, 5.0, 8.0, 12.0).unwrap();
    let e = sample_ensemble(&d, 4000, 3).unwrap();
    for p in &e.positions {
        let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
        assert!((5.0..=8.0).contains(&r), "r = {r}");
    }
}
