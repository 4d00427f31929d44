use num_complex::Complex64;
use proptest::prelude::*;
use twistlab::special::{gamma, ln_gamma, ln_sin_pi};
use twistlab::twist::{ExactRational, Rational};

proptest! {
    #[test]
    fn gamma_recurrence(re in -6.0f64..6.0, im in 0.05f64..8.0) {
        let z = Complex64::new(re, im);
        let lhs = gamma(z + 1.0).unwrap();
        let rhs = z * gamma(z).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm());
    }

    #[test]
    fn reflection(re in -6.0f64..6.0, im in 0.05f64..8.0) {
        let z = Complex64::new(re, im);
        let one = Complex64::new(1.0, 0.0);
        let v = (ln_gamma(z).unwrap() * ln_gamma(one - z).unwrap() * ln_sin_pi(z)).to_complex()
            / std::f64::consts::PI;
        prop_assert!((v - one).norm() < 1e-12);
    }

    #[test]
    fn rational_text_round_trips(p in -10_000i128..10_000, q in 1i128..10_000) {
        let ExactRational(r) = format!("{p}/{q}").parse().unwrap();
        prop_assert_eq!(r, Rational::new(p, q));
    }

    #[test]
    fn decimals_are_exact(whole in 0i128..1000, frac in 0u32..10_000) {
        let ExactRational(r) = format!("{whole}.{frac:04}").parse().unwrap();
        prop_assert_eq!(r, Rational::new(whole * 10_000 + frac as i128, 10_000));
    }
}
