use std::f64::consts::PI;

use num_complex::Complex64;
use twistlab::special::{gamma, ln_gamma, ln_sin_pi, mellin_barnes_closed_form, mellin_barnes_numeric};

fn grid() -> Vec<Complex64> {
    // 50 points off the integers
    (0..50)
        .map(|k| {
            let re = -4.63 + 0.211 * k as f64;
            let im = -3.0 + 0.123 * k as f64;
            Complex64::new(re, im)
        })
        .collect()
}

#[test]
fn reflection() {
    let one = Complex64::new(1.0, 0.0);
    for z in grid() {
        let prod = ln_gamma(z).unwrap() * ln_gamma(one - z).unwrap() * ln_sin_pi(z);
        let v = prod.to_complex() / PI;
        assert!((v - one).norm() < 1e-12, "z = {z}: {v}");
    }
}

#[test]
fn duplication() {
    for z in grid() {
        let lhs = ln_gamma(z).unwrap() * ln_gamma(z + 0.5).unwrap();
        let rhs_log = Complex64::new(0.5 * PI.ln(), 0.0) + (one_c() - z * 2.0) * 2f64.ln();
        let rhs = ln_gamma(z * 2.0).unwrap() * twistlab::special::LogComplex::exp(rhs_log);
        let ratio = (lhs / rhs).to_complex();
        assert!((ratio - one_c()).norm() < 1e-12, "z = {z}: {ratio}");
    }
}

fn one_c() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

#[test]
fn recurrence() {
    for z in grid() {
        let lhs = gamma(z + 1.0).unwrap();
        let rhs = z * gamma(z).unwrap();
        assert!((lhs - rhs).norm() < 1e-13 * lhs.norm(), "z = {z}");
    }
}

#[test]
fn mellin_barnes_grid() {
    let mut count = 0;
    for i in 0..4 {
        for j in 0..5 {
            let xi = Complex64::new(0.8 + 0.6 * i as f64, -1.0 + 0.5 * j as f64);
            let z = Complex64::from_polar(0.2 + 0.35 * j as f64, -1.5 + 0.9 * i as f64);
            let c = 0.45 * xi.re;
            let num = mellin_barnes_numeric(xi, z, c).unwrap();
            let closed = mellin_barnes_closed_form(xi, z).unwrap();
            assert!((num - closed).norm() < 1e-8, "xi = {xi}, z = {z}: {num} vs {closed}");
            count += 1;
        }
    }
    assert_eq!(count, 20);
}
