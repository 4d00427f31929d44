use std::f64::consts::PI;

use num_complex::Complex64;
use twistlab::qseries::{build_preset, PRESET_NAMES};
use twistlab::twist::{
    a_ladder, s_ell, Alpha, Rational, SeriesMode, Side, SignedRoot, TwistContext,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ctx(name: &str, p: i128, q: i128) -> TwistContext {
    let form = build_preset(name).unwrap();
    let level = form.level;
    TwistContext::new(form, Alpha::rational(Rational::new(p, q), level).unwrap()).unwrap()
}

fn ctx_n_alpha(name: &str, n: i128) -> TwistContext {
    let form = build_preset(name).unwrap();
    let level = form.level;
    TwistContext::new(form, Alpha::from_n_alpha(Rational::from_integer(n), level).unwrap()).unwrap()
}

/// One spectral and one non-spectral alpha per preset.
fn cases() -> Vec<TwistContext> {
    vec![
        ctx("ETA24", 1, 12),
        ctx("ETA24", 3, 10),
        ctx("ETA8_CUBED", 1, 4),
        ctx("ETA8_CUBED", 1, 3),
        ctx_n_alpha("ETA24_FIFTH", 5),
        ctx("ETA24_FIFTH", 1, 12),
    ]
}

fn circle_average(f: impl Fn(Complex64) -> Complex64, center: Complex64, radius: f64, points: usize) -> Complex64 {
    let mut total = c(0.0, 0.0);
    for j in 0..points {
        let w = Complex64::from_polar(radius, 2.0 * PI * (j as f64 + 0.5) / points as f64);
        total += w * f(center + w);
    }
    total / points as f64
}

#[test]
fn ladder_matches_brute_force_expansion() {
    // both sides have degree h*, so agreement at h* + 2 integers is equality
    for h_star in 0..=6i128 {
        let a = a_ladder(h_star as u32);
        assert_eq!(a.len(), h_star as usize + 1);
        assert_eq!(a[0], Rational::from_integer(1));
        for x in 0..=h_star + 1 {
            let lhs: i128 = (1..=h_star).map(|j| x + 2 * j - 1).product();
            let rhs: Rational = a
                .iter()
                .enumerate()
                .map(|(l, al)| al * (0..h_star - l as i128).map(|v| x + v).product::<i128>())
                .sum();
            assert_eq!(rhs, Rational::from_integer(lhs), "h* = {h_star}, X = {x}");
        }
    }
    let r = Rational::from_integer;
    assert_eq!(a_ladder(1), vec![r(1), r(1)]);
    assert_eq!(a_ladder(2), vec![r(1), r(3), r(3)]);
}

#[test]
fn context_constants() {
    let t = ctx("ETA24", 1, 12);
    assert_eq!(s_ell(0), 0.75);
    assert_eq!((t.h, t.h_star), (0, 0));
    assert_eq!(t.mu, -0.25);
    assert_eq!(t.mu_star, 0.25);
    assert_eq!((t.degree(), t.conductor()), (2, 576));
    assert_eq!(t.nu_alpha, 1.0);
    assert!(t.in_spectrum);
    assert!(!ctx("ETA24", 3, 10).in_spectrum);
    // n_alpha = 4 but chi_12(2) = 0
    assert!(!ctx("ETA24", 1, 6).in_spectrum);
    let cubed = ctx("ETA8_CUBED", 1, 4);
    assert_eq!((cubed.h, cubed.h_star), (1, 0));
    assert_eq!(cubed.mu, 0.25);
}

#[test]
fn z_x_at_the_spectral_index() {
    let t = ctx("ETA24", 1, 12);
    for x in [2.0, 50.0, 400.0] {
        let z = t.z_x(1, x);
        assert!((z.re - 1.0).abs() < 1e-15);
        assert!((z.im + t.half_q() / x).abs() < 1e-15);
        for n in [1, 5, 49, 10_000] {
            assert!(t.z_x(n, x).im < 0.0);
            assert!((1.0 - t.z_x(n, x)).im > 0.0);
        }
    }
}

#[test]
fn c_star_cases() {
    let t = ctx("ETA24", 1, 12);
    let one = SignedRoot { n: 1, negative: false };
    let want = -Complex64::from_polar(1.0, -PI / 4.0) * t.form.a_star(1).unwrap();
    assert!((t.c_star(one, 0).unwrap() - want).norm() < 1e-15);
    // nu = -nu_alpha is excluded
    assert!(t.c_star(SignedRoot { n: 1, negative: true }, 0).is_err());

    // alpha = 3/10: nu_alpha = 3.6, so -sqrt(n) lies in the middle range for n < 12.96
    let u = ctx("ETA24", 3, 10);
    for n in [1u64, 25, 49, 121, 169] {
        for negative in [false, true] {
            let nu = SignedRoot { n, negative };
            let cs = u.c_star(nu, 0).unwrap();
            assert!((cs.norm() - u.form.a_star(n).unwrap().norm()).abs() < 1e-14);
        }
    }
    assert!(u.is_plus_side(SignedRoot { n: 1, negative: true }).unwrap());
    assert!(!u.is_plus_side(SignedRoot { n: 25, negative: true }).unwrap());
    let mid = u.c_star_phase(SignedRoot { n: 1, negative: true }, 0).unwrap();
    assert!((mid - Complex64::from_polar(1.0, PI * (0.5 + 0.25))).norm() < 1e-15);
}

#[test]
fn direct_and_stratified_series_agree() {
    let s = c(1.6, 2.0);
    for t in cases() {
        for l in 0..=t.h_star {
            for side in [Side::Plus, Side::Minus] {
                let d = t.f_pm(s, l, side, SeriesMode::Direct).unwrap();
                let st = t.f_pm(s, l, side, SeriesMode::Stratified).unwrap();
                let r = (d.value - st.value).norm() / d.value.norm().max(1.0);
                assert!(r < 1e-8, "{} {:?}: {} vs {} ({r:e})", t.alpha, side, d.value, st.value);
            }
        }
    }
}

#[test]
fn stratified_series_is_finite_left_of_the_abscissa() {
    let s = c(-1.0, 1.0);
    for t in cases() {
        for side in [Side::Plus, Side::Minus] {
            let v = t.f_pm(s, 0, side, SeriesMode::Stratified).unwrap();
            assert!(v.value.is_finite());
            assert!(v.error < 1e-6 * v.value.norm().max(1.0), "{} {:?}: error {:e}", t.alpha, side, v.error);
        }
    }
}

#[test]
fn small_n_alpha_has_no_middle_terms() {
    // alpha = 1/20: n_alpha = 0.36, so every negative nu lies below -nu_alpha
    let t = ctx("ETA24", 1, 20);
    let s = c(1.7, 1.0);
    let got = t.f_pm(s, 0, Side::Plus, SeriesMode::Direct).unwrap();
    let mut want = c(0.0, 0.0);
    for v in 1..200_000u64 {
        let a = t.form.a_star(v * v).unwrap();
        if a.norm() == 0.0 {
            continue;
        }
        let nv = v as f64;
        want += a * nv.powf(-0.5) * (-(2.0 * s - 0.5) * (nv + t.nu_alpha).ln()).exp();
    }
    want *= -Complex64::from_polar(1.0, PI * t.mu);
    assert!((got.value - want).norm() < 1e-9, "{} vs {want}", got.value);
}

#[test]
fn f_star_ell_approaches_the_untwisted_limit() {
    let u = c(1.6, 2.0);
    let mut last = f64::INFINITY;
    for q in [100, 1000, 10_000] {
        let t = ctx("ETA24", 1, q);
        let got = t.f_star_ell(u, 0, SeriesMode::Stratified).unwrap().value;
        let phase = Complex64::from_polar(1.0, PI * (u - t.mu).re) * (-PI * u.im).exp();
        let phase = phase - 1.0 / phase;
        let want = phase * t.lfun.complete(u, true).unwrap().value;
        let gap = (got - want).norm() / want.norm();
        assert!(gap < last / 5.0, "alpha = 1/{q}: gap {gap:e} after {last:e}");
        last = gap;
    }
    assert!(last < 1e-2);
}

#[test]
fn f_star_ell_grows_like_exp_pi_t() {
    let t = ctx("ETA24", 1, 12);
    let ln_abs = |tt: f64| t.f_star_ell(c(1.6, tt), 0, SeriesMode::Direct).unwrap().value.norm().ln();
    let slope = (ln_abs(60.0) - ln_abs(10.0)) / 50.0;
    assert!((slope - PI).abs() < 0.05, "slope {slope}");

    // the e^{-i pi s} term dominates for t > 0 and the e^{i pi s} term for t < 0
    for tt in [20.0, -20.0] {
        let s = c(1.6, tt);
        let plus = t.f_pm(s, 0, Side::Plus, SeriesMode::Direct).unwrap().value * (-Complex64::i() * PI * s).exp();
        let minus = t.f_pm(s, 0, Side::Minus, SeriesMode::Direct).unwrap().value * (Complex64::i() * PI * s).exp();
        assert_eq!(plus.norm() > minus.norm(), tt > 0.0);
    }
}

#[test]
fn fe_rhs_is_finite_in_the_strip() {
    for t in cases() {
        let v = t.fe_rhs(c(-0.5, 2.0)).unwrap();
        assert!(v.value.is_finite());
        assert!(v.error < 1e-7 * v.value.norm().max(1.0), "{}: error {:e}", t.alpha, v.error);
    }
}

#[test]
fn residue_at_s0_matches_the_closed_form() {
    let s0 = c(0.75, 0.0);
    for t in [ctx("ETA24", 1, 12), ctx("ETA8_CUBED", 1, 4), ctx_n_alpha("ETA24_FIFTH", 5)] {
        let kappa = t.residue_kappa(0).unwrap();
        let got = circle_average(|s| t.fe_rhs(s).unwrap().value, s0, 1e-3, 16);
        let r = (got - kappa).norm() / kappa.norm();
        assert!(r < 1e-5, "{}: {got} vs {kappa} ({r:e})", t.alpha);
    }
}

#[test]
fn non_spectral_alpha_has_no_pole() {
    let t = ctx("ETA24", 1, 6);
    assert_eq!(t.residue_kappa(0).unwrap(), c(0.0, 0.0));
    let avg = circle_average(|s| t.fe_rhs(s).unwrap().value, c(0.75, 0.0), 1e-3, 16);
    assert!(avg.norm() < 1e-6, "{avg}");
    assert_eq!(t.sigma_x(c(-0.5, 2.0), 50.0).unwrap(), c(0.0, 0.0));
}

#[test]
fn residue_constant_is_independent_of_alpha() {
    let families: Vec<Vec<TwistContext>> = vec![
        [(1, 12), (5, 12), (7, 12)].iter().map(|&(p, q)| ctx("ETA24", p, q)).collect(),
        [(1, 4), (3, 4), (5, 4)].iter().map(|&(p, q)| ctx("ETA8_CUBED", p, q)).collect(),
        [5, 29, 53].iter().map(|&n| ctx_n_alpha("ETA24_FIFTH", n)).collect(),
    ];
    for family in families {
        let consts: Vec<Complex64> = family
            .iter()
            .map(|t| {
                assert!(t.in_spectrum, "{}", t.alpha);
                let n = t.alpha.integral_n_alpha().unwrap() as f64;
                t.residue_kappa(0).unwrap() * n.powf(0.25) / t.a_star_n_alpha
            })
            .collect();
        assert!(consts[0].norm() > 0.0);
        for k in &consts[1..] {
            assert!((k - consts[0]).norm() / consts[0].norm() < 1e-6, "{k} vs {}", consts[0]);
        }
    }
}

#[test]
fn sigma_x_scales_as_a_single_power() {
    let t = ctx("ETA24", 1, 12);
    let s = c(-0.5, 2.0);
    let ratio = t.sigma_x(s, 80.0).unwrap() / t.sigma_x(s, 40.0).unwrap();
    let want = (2.0 * (c(0.75, 0.0) - s) * 2f64.ln()).exp();
    assert!((ratio - want).norm() < 1e-13 * want.norm());
}

#[test]
fn smoothed_twist_at_integral_alpha_is_the_smoothed_series() {
    // alpha = 1 makes e(alpha v) = 1 on the squares
    let t = ctx("ETA24", 1, 1);
    let (s, x) = (c(0.3, 1.0), 30.0);
    let got = t.f_x_twist(s, x).unwrap();
    let mut want = c(0.0, 0.0);
    for v in 1..4000u64 {
        let a = t.form.a(v * v).unwrap();
        let nv = v as f64;
        want += a * (-2.0 * s * nv.ln()).exp() * (-nv / x).exp();
    }
    assert!((got.value - want).norm() < 1e-11 * want.norm().max(1.0), "{} vs {want}", got.value);
}

#[test]
fn smoothed_twist_tends_to_the_direct_twist() {
    let t = ctx("ETA24", 1, 12);
    let s = c(2.0, 1.0);
    let limit = t.twist_direct(s).unwrap().value;
    let xs = [10.0f64, 20.0, 40.0, 80.0];
    let gaps: Vec<f64> = xs.iter().map(|&x| (t.f_x_twist(s, x).unwrap().value - limit).norm()).collect();
    let slope = (gaps[3].ln() - gaps[2].ln()) / 2f64.ln();
    assert!((slope + 1.0).abs() < 0.1, "slope {slope}, gaps {gaps:?}");
}

#[test]
fn basic_formula_holds_at_finite_x() {
    let s = c(-0.5, 1.3);
    for t in [ctx("ETA24", 1, 12), ctx("ETA24", 3, 10)] {
        let lhs = t.f_x_twist(s, 50.0).unwrap().value;
        let rhs = t.basic_formula_rhs(s, 50.0).unwrap().value;
        assert!((lhs - rhs).norm() < 1e-8 * lhs.norm(), "{}: {lhs} vs {rhs}", t.alpha);
    }
    let t = ctx("ETA24", 1, 12);
    assert!(t.basic_formula_rhs(c(0.5, 1.0), 50.0).is_err());
    assert!(t.basic_formula_rhs(s, 1.0).is_err());
}

#[test]
fn continuation_matches_the_direct_twist() {
    let s = c(1.8, 1.0);
    for t in [ctx("ETA24", 1, 12), ctx("ETA8_CUBED", 1, 3)] {
        let direct = t.twist_direct(s).unwrap().value;
        let cont = t.f_twist_continued(s).unwrap().value;
        assert!((direct - cont).norm() < 1e-9 * direct.norm(), "{}: {direct} vs {cont}", t.alpha);
    }
}

#[test]
fn functional_equation_of_the_twist() {
    let s = c(-0.5, 2.0);
    for t in cases() {
        let cont = t.continuation(s).unwrap();
        let rhs = t.fe_rhs(s).unwrap().value;
        let r = (cont.value - rhs).norm() / rhs.norm().max(1.0);
        assert!(r < 1e-6, "{}: {} vs {rhs} ({r:e})", t.alpha, cont.value);
        if cont.sigma_top > 1.0 {
            assert!(cont.sigma_fit < 1e-12 * cont.sigma_top, "{}: {cont:?}", t.alpha);
        }
    }
}

#[test]
fn continuation_has_the_closed_form_residue() {
    let t = ctx("ETA24", 1, 12);
    let kappa = t.residue_kappa(0).unwrap();
    let got = circle_average(|s| t.f_twist_continued(s).unwrap().value, c(0.75, 0.0), 1e-3, 8);
    assert!((got - kappa).norm() < 1e-5 * kappa.norm(), "{got} vs {kappa}");
}

#[test]
fn all_presets_build_a_context() {
    for name in PRESET_NAMES {
        let form = build_preset(name).unwrap();
        let level = form.level;
        let t = TwistContext::new(form, Alpha::rational(Rational::new(1, 7), level).unwrap()).unwrap();
        assert!(!t.ladder.is_empty());
    }
}
