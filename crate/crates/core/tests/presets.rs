use twistlab::qseries::{build_preset, isqrt, EtaQuotient, PRESET_NAMES};
use twistlab::Error;

const M: u64 = 1_000_000;

fn chi12(v: u64) -> i128 {
    match v % 12 {
        1 | 11 => 1,
        5 | 7 => -1,
        _ => 0,
    }
}

#[test]
fn eta24_engine_matches_closed_form() {
    let form = build_preset("ETA24").unwrap();
    let engine = form.quotient.expansion(M as usize).unwrap();
    for n in 0..=M {
        let v = isqrt(n);
        let want = if v * v == n { chi12(v) } else { 0 };
        assert_eq!(engine.coefficient(n as usize), want, "n = {n}");
        assert_eq!(form.c(n).unwrap(), want, "n = {n}");
    }
}

#[test]
fn eta8_cubed_engine_matches_closed_form() {
    let form = build_preset("ETA8_CUBED").unwrap();
    let engine = form.quotient.expansion(M as usize).unwrap();
    for n in 0..=M {
        let v = isqrt(n);
        let want = if v * v == n && v % 2 == 1 {
            if (v - 1) / 2 % 2 == 0 { v as i128 } else { -(v as i128) }
        } else {
            0
        };
        assert_eq!(engine.coefficient(n as usize), want, "n = {n}");
        assert_eq!(form.c(n).unwrap(), want, "n = {n}");
    }
}

#[test]
fn fifth_power_support_and_bound() {
    let form = build_preset("ETA24_FIFTH").unwrap();
    assert_eq!((form.k, form.level), (5, 576));
    // first coefficients of eta(z)^5: 1, -5, 5, 10, -15, -6
    let first: Vec<i128> = (0..6).map(|j| form.c(5 + 24 * j).unwrap()).collect();
    assert_eq!(first, vec![1, -5, 5, 10, -15, -6]);
    let terms = form.terms(200_000).unwrap();
    for &(n, c) in &terms {
        assert_eq!(n % 24, 5);
        assert!(c.unsigned_abs() as f64 <= form.bound.at(n));
    }
    assert_eq!(form.c(6).unwrap(), 0);
}

#[test]
fn normalization_inverts_exactly() {
    for name in PRESET_NAMES {
        let form = build_preset(name).unwrap();
        for (n, c) in form.terms(5000).unwrap() {
            let back = form.a(n).unwrap() * (n as f64).powf(form.normalization_shift());
            assert!((back - c as f64).abs() < 1e-9 * (c as f64).abs(), "{name} n = {n}");
        }
    }
}

#[test]
fn root_number_and_dual_phase() {
    let form = build_preset("ETA24").unwrap();
    let w = num_complex::Complex64::from_polar(1.0, -std::f64::consts::PI / 4.0);
    assert!((form.omega - w).norm() < 1e-15);
    for name in PRESET_NAMES {
        let f = build_preset(name).unwrap();
        assert!((f.dual_phase.norm() - 1.0).abs() < 1e-15);
        assert_eq!(f.c_star(49).unwrap(), f.dual_phase * f.c(49).unwrap() as f64);
    }
}

#[test]
fn registry_errors() {
    assert!(matches!(build_preset("NOPE"), Err(Error::UnknownPreset(_))));
    assert!(matches!(build_preset("ETA8_FIFTH"), Err(Error::InvalidForm(_))));
    assert!(EtaQuotient::new(vec![(8, 5)]).is_err());
}

#[test]
fn csv_dump() {
    let form = build_preset("ETA8_CUBED").unwrap();
    let mut buf = Vec::new();
    form.write_csv(9, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,c(n),a(n)");
    assert_eq!(lines.len(), 10);
    assert!(lines[9].starts_with("9,-3,"));
}
