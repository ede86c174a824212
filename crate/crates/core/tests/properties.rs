use proptest::prelude::*;

use spcauchy_core::kl::{
    dkl_drho, h_bracket, h_from_kl, kl_hybrid, kl_quadrature, kl_series, z_of_rho, DEFAULT_NODES,
};
use spcauchy_core::sphere::{geodesic_interpolate, moebius_transform};
use spcauchy_core::{kappa_of_rho, rho_match, SeriesOptions, SpCauchy, UnitVector};

fn unit_vector(d: usize) -> impl Strategy<Value = UnitVector> {
    prop::collection::vec(-1.0f64..1.0, d)
        .prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-6)
        .prop_map(|v| UnitVector::normalize(&v).unwrap())
}

fn pair(max_d: usize) -> impl Strategy<Value = (UnitVector, UnitVector)> {
    (2..=max_d).prop_flat_map(|d| (unit_vector(d), unit_vector(d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn moebius_stays_on_sphere((x, mu) in pair(64), rho in 0.0f64..0.999) {
        let y = moebius_transform(&x, &mu, rho).unwrap();
        prop_assert!((y.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn moebius_identity_at_zero((x, mu) in pair(16)) {
        let y = moebius_transform(&x, &mu, 0.0).unwrap();
        prop_assert_eq!(y, x);
    }

    #[test]
    fn moebius_fixes_the_mode(mu in (2usize..32).prop_flat_map(unit_vector), rho in 0.0f64..0.99) {
        let y = moebius_transform(&mu, &mu, rho).unwrap();
        for (a, b) in y.as_slice().iter().zip(mu.as_slice()) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn density_peaks_at_mode((x, mu) in pair(32), rho in 0.0f64..0.99) {
        let d = mu.dim();
        let q = SpCauchy::new(mu.clone(), rho).unwrap();
        let at_mode = q.log_density(&mu).unwrap();
        let want = (d - 1) as f64 * ((1.0 + rho) / (1.0 - rho)).ln();
        prop_assert!((at_mode - want).abs() <= 1e-12 * want.abs().max(1.0));
        prop_assert!(q.log_density(&x).unwrap() <= at_mode + 1e-12);
    }

    #[test]
    fn geodesic_is_constant_speed((a, b) in pair(16), t in 0.0f64..=1.0) {
        prop_assume!(a.dot(&b).unwrap() > -0.99);
        let g = geodesic_interpolate(&a, &b, t).unwrap();
        prop_assert!((g.norm() - 1.0).abs() < 1e-12);
        let total = a.dot(&b).unwrap().clamp(-1.0, 1.0).acos();
        let part = a.dot(&g).unwrap().clamp(-1.0, 1.0).acos();
        prop_assert!((part - t * total).abs() < 1e-7);
    }

    #[test]
    fn series_matches_quadrature(d in 2usize..200, rho in 0.0f64..0.9) {
        let s = kl_series(d, rho, SeriesOptions::default()).unwrap();
        let q = kl_quadrature(d, rho, DEFAULT_NODES).unwrap().value;
        prop_assert!(s.converged);
        prop_assert!((s.value - q).abs() <= 1e-8 * q.abs().max(1e-300), "{} vs {}", s.value, q);
    }

    #[test]
    fn kl_is_nonnegative_and_bracketed(d in 2usize..2048, rho in 0.0f64..0.995) {
        let k = kl_quadrature(d, rho, DEFAULT_NODES).unwrap().value;
        prop_assert!(k >= -1e-12 * (d as f64));
        let h = h_from_kl(d, rho, k).unwrap();
        let b = h_bracket(d, z_of_rho(rho).unwrap()).unwrap();
        prop_assert!(b.contains(h, 1e-9), "H = {} not in [{}, {}]", h, b.lo, b.hi);
    }

    #[test]
    fn kl_increases_with_rho(d in 2usize..500, r1 in 0.0f64..0.98, dr in 1e-3f64..0.01) {
        let a = kl_quadrature(d, r1, DEFAULT_NODES).unwrap().value;
        let b = kl_quadrature(d, r1 + dr, DEFAULT_NODES).unwrap().value;
        prop_assert!(b > a);
        prop_assert!(dkl_drho(d, r1 + 0.5 * dr, DEFAULT_NODES).unwrap() > 0.0);
    }

    #[test]
    fn gradient_matches_difference(d in 2usize..128, rho in 0.05f64..0.95) {
        let g = dkl_drho(d, rho, DEFAULT_NODES).unwrap();
        let h = 1e-5;
        let fd = (kl_quadrature(d, rho + h, 512).unwrap().value
            - kl_quadrature(d, rho - h, 512).unwrap().value) / (2.0 * h);
        prop_assert!(((g - fd) / fd).abs() < 1e-5, "{} vs {}", g, fd);
    }

    #[test]
    fn hybrid_is_finite(d in 2usize..5000, rho in 0.0f64..0.999_999) {
        prop_assert!(kl_hybrid(d, rho).unwrap().value.is_finite());
    }

    #[test]
    fn matching_round_trip(d in 2usize..1000, log_kappa in -20.0f64..20.0) {
        let kappa = log_kappa.exp();
        let rho = rho_match(d, kappa).unwrap();
        prop_assert!(rho > 0.0 && rho < 1.0);
        let back = kappa_of_rho(d, rho).unwrap();
        prop_assert!(((back - kappa) / kappa).abs() < 1e-9, "{} vs {}", back, kappa);
    }

    #[test]
    fn matching_is_monotone(d in 2usize..1000, kappa in 1e-3f64..1e4, f in 1.001f64..10.0) {
        prop_assert!(rho_match(d, kappa * f).unwrap() > rho_match(d, kappa).unwrap());
        prop_assert!(rho_match(d + 1, kappa).unwrap() < rho_match(d, kappa).unwrap());
    }
}
