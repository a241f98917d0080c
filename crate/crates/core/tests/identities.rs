use std::f64::consts::PI;

use approx::assert_relative_eq;
use proptest::prelude::*;

use nlmi::analytic::{
    delta_x, delta_x_linear, improvement_ratio, mean_m_exact, var_m, var_m_with, VarianceForm,
};
use nlmi::params::{derive, refractive_index, refractive_index_from_intensity, MediumSpec, PulseSpec};

fn pulse() -> impl Strategy<Value = PulseSpec> {
    (-7.0..-5.0f64, -15.0..-6.0f64, -12.0..-4.0f64, 0.0..16.0f64).prop_map(|(l, t, a, p)| PulseSpec {
        wavelength: 10f64.powf(l),
        duration: 10f64.powf(t),
        cross_section: 10f64.powf(a),
        power: 10f64.powf(p),
    })
}

fn medium() -> impl Strategy<Value = MediumSpec> {
    (1.0..2.5f64, -26.0..-10.0f64).prop_map(|(n0, n2)| MediumSpec {
        linear_index: n0,
        kerr_coefficient: 10f64.powf(n2),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1024))]

    #[test]
    fn linear_limit_is_shot_noise(n in 1.0..1e22f64, k in 1e5..1e8f64, eta in 0.01..=1.0f64, nt in 0.0..1e3f64) {
        prop_assert_eq!(delta_x(n, 0.0, k, eta, 0.0, nt), delta_x_linear(n, k, eta, nt));
    }

    #[test]
    fn ideal_improvement_is_inverse_gain(n in 1.0..1e22f64, chi in 0.0..1e-6f64) {
        let gain = 1.0 + chi * n / 2.0;
        assert_relative_eq!(improvement_ratio(n, chi, 1.0, 0.0, 0.0) * gain, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn ratio_of_sensitivities(n in 1.0..1e20f64, chi in 0.0..1e-8f64, k in 1e5..1e8f64,
                              eta in 0.01..=1.0f64, sigma in 0.0..0.5f64, nt in 0.0..1e3f64) {
        let ratio = delta_x(n, chi, k, eta, sigma, nt) / delta_x_linear(n, k, eta, nt);
        assert_relative_eq!(ratio, improvement_ratio(n, chi, eta, sigma, nt), max_relative = 1e-12);
    }

    #[test]
    fn index_forms_agree(p in pulse(), m in medium()) {
        let d = derive(&p, &m).unwrap();
        assert_relative_eq!(refractive_index(&m, &d), refractive_index_from_intensity(&m, &d), max_relative = 1e-13);
    }

    #[test]
    fn chi_inverse_in_duration_and_area(p in pulse(), m in medium(), e in -20i32..20) {
        let s = 2f64.powi(e);
        let base = derive(&p, &m).unwrap().chi;
        let longer = derive(&PulseSpec { duration: p.duration * s, ..p }, &m).unwrap().chi;
        let wider = derive(&PulseSpec { cross_section: p.cross_section * s, ..p }, &m).unwrap().chi;
        prop_assert_eq!(longer * s, base);
        prop_assert_eq!(wider * s, base);
    }

    #[test]
    fn chi_inverse_for_any_factor(p in pulse(), m in medium(), s in 0.01..100.0f64) {
        let base = derive(&p, &m).unwrap().chi;
        let longer = derive(&PulseSpec { duration: p.duration * s, ..p }, &m).unwrap().chi;
        assert_relative_eq!(longer * s, base, max_relative = 1e-14);
    }

    #[test]
    fn power_round_trip(p in pulse(), m in medium()) {
        let n = derive(&p, &m).unwrap().photons;
        assert_relative_eq!(p.power_for_photons(n), p.power, max_relative = 1e-12);
    }

    #[test]
    fn noise_never_helps(n in 1.0..1e20f64, chi in 0.0..1e-8f64, k in 1e5..1e8f64,
                         sigma in 0.0..0.5f64, nt in 0.0..1e3f64, ds in 1e-6..0.1f64, dn in 1e-3..10.0f64) {
        let base = delta_x(n, chi, k, 1.0, sigma, nt);
        prop_assert!(delta_x(n, chi, k, 1.0, sigma + ds, nt) >= base);
        prop_assert!(delta_x(n, chi, k, 1.0, sigma, nt + dn) >= base);
        prop_assert!(delta_x(n, chi * 1.5 + 1e-12, k, 1.0, sigma, nt) <= base);
    }

    #[test]
    fn exact_variance_below_small_sigma(n in 1.0..1e6f64, eta in 0.01..=1.0f64, sigma in 0.0..1.0f64, nt in 0.0..10.0f64) {
        let exact = var_m_with(VarianceForm::Exact, n, eta, sigma, nt);
        let small = var_m(n, eta, sigma, nt);
        prop_assert!(exact <= small * (1.0 + 1e-12));
        prop_assert!(exact >= eta * n * (1.0 + nt) * (1.0 - 1e-12));
    }

    #[test]
    fn mean_periodic_in_offset(n in 0.0..30.0f64, chi in 0.0..0.5f64, p1 in -10.0..10.0f64,
                               p2 in -10.0..10.0f64, off in -PI..PI) {
        let a = mean_m_exact(n, chi, p1, p2, off, 1.0);
        let b = mean_m_exact(n, chi, p1, p2, off + 2.0 * PI, 1.0);
        prop_assert!((a - b).abs() <= 1e-12 * n.max(1.0));
    }

    #[test]
    fn mean_odd_under_arm_exchange(n in 0.0..30.0f64, chi in 0.0..0.5f64, p1 in -10.0..10.0f64,
                                   p2 in -10.0..10.0f64, off in -PI..PI, eta in 0.01..=1.0f64) {
        let a = mean_m_exact(n, chi, p1, p2, off, eta);
        let b = mean_m_exact(n, chi, p2, p1, -off, eta);
        prop_assert!((a + b).abs() <= 1e-11 * n.max(1.0));
        prop_assert!(a.abs() <= eta * n + 1e-12);
    }
}
