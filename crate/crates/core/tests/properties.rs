use proptest::prelude::*;

use ellflow::complex::ComplexValue;
use ellflow::flow::{
    acoustic_wave_vector, characteristic_determinant, dispersion, entropic_wave_vector, make_entropic_triad, norm,
    scale,
};
use ellflow::solver::{solve_scalar, SolveConfig};
use ellflow::{FlowState, Invariants, MediumParams, Weierstrass};

fn invariants() -> impl Strategy<Value = Invariants> {
    (-4.0..4.0f64, -3.0..3.0f64)
        .prop_map(|(g2, g3)| Invariants::new(g2, g3))
        .prop_filter("non-degenerate", |inv| inv.discriminant().abs() > 1e-2)
}

fn point() -> impl Strategy<Value = ComplexValue> {
    (-1.0..1.0f64, -1.0..1.0f64)
        .prop_map(|(a, b)| ComplexValue::new(a, b))
        .prop_filter("away from the pole", |z| z.norm() > 0.05)
}

fn unit() -> impl Strategy<Value = [f64; 3]> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64)
        .prop_filter("nonzero", |(a, b, c)| a * a + b * b + c * c > 1e-2)
        .prop_map(|(a, b, c)| {
            let v = [a, b, c];
            scale(1.0 / norm(v), v)
        })
}

fn state() -> impl Strategy<Value = FlowState> {
    (0.1..3.0f64, -2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, u1, u2, u3)| FlowState { a, u: [u1, u2, u3] })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn wp_is_even(inv in invariants(), z in point()) {
        let w = Weierstrass::from_invariants(inv).unwrap();
        let (p, m) = (w.wp(z).unwrap(), w.wp(-z).unwrap());
        prop_assert!((p - m).norm() <= 1e-8 * (1.0 + p.norm()));
    }

    #[test]
    fn wp_is_periodic(inv in invariants(), z in point(), n in -2i32..=2, m in -2i32..=2) {
        let w = Weierstrass::from_invariants(inv).unwrap();
        let lat = *w.lattice();
        let shift = lat.omega1 * n as f64 + lat.omega2 * m as f64;
        let (p, q) = (w.wp(z).unwrap(), w.wp(z + shift).unwrap());
        prop_assert!((p - q).norm() <= 1e-8 * (1.0 + p.norm()), "{} vs {}", p, q);
    }

    #[test]
    fn wp_is_homogeneous(inv in invariants(), z in point(), lambda in 0.3..3.0f64) {
        // ℘(λz; λ⁻⁴g2, λ⁻⁶g3) = λ⁻²℘(z; g2, g3)
        let w = Weierstrass::from_invariants(inv).unwrap();
        let ws = Weierstrass::from_invariants(inv.scaled(lambda)).unwrap();
        let (p, q) = (w.wp(z).unwrap() / (lambda * lambda), ws.wp(z * lambda).unwrap());
        prop_assert!((p - q).norm() <= 1e-8 * (1.0 + p.norm()));
    }

    #[test]
    fn wp_satisfies_its_equation(inv in invariants(), z in point()) {
        let w = Weierstrass::from_invariants(inv).unwrap();
        let (p, dp) = w.eval(z).unwrap();
        let rhs = 4.0 * p * p * p - inv.g2 * p - inv.g3;
        prop_assert!((dp * dp - rhs).norm() <= 1e-9 * (1.0 + rhs.norm() + (dp * dp).norm()));
    }

    #[test]
    fn characteristic_vectors_are_on_the_cone(s in state(), e in unit(), m in unit()) {
        for wv in [entropic_wave_vector(e, 1.0, s).unwrap(), entropic_wave_vector(e, -1.0, s).unwrap()] {
            prop_assert!(dispersion(&wv, s).abs() <= 1e-12 * (1.0 + wv.lambda0.abs()).powi(4));
        }
        if let Ok(wv) = acoustic_wave_vector(e, m, s) {
            let scale = (1.0 + wv.lambda0.abs() + norm(wv.lambda_vec)).powi(4);
            prop_assert!(dispersion(&wv, s).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn factored_dispersion_matches_determinant(s in state(), l0 in -2.0..2.0f64, l in unit(), k in 0.2..2.0f64) {
        let med = MediumParams::from_kappa(5.0).unwrap();
        let lv = scale(k, l);
        let direct = characteristic_determinant(l0, lv, s, med);
        let factored = ellflow::flow::dispersion_raw(l0, lv, s);
        let size = (1.0 + l0.abs() + k * (1.0 + s.a + norm(s.u))).powi(4);
        prop_assert!((direct - factored).abs() <= 1e-10 * size, "{} vs {}", direct, factored);
    }

    #[test]
    fn triad_gram_is_rotation_invariant(kappa in 2.0..20.0f64, axis in unit(), angle in -3.0..3.0f64) {
        let med = MediumParams::from_kappa(kappa).unwrap();
        let t = make_entropic_triad(med).unwrap().rotated(axis, angle);
        let g = t.gram();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { -1.0 / kappa };
                prop_assert!((g[i][j] - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn solver_finds_linear_fixed_point(alpha in -5.0..0.9f64, beta in -10.0..10.0f64, guess in -10.0..10.0f64) {
        let res = solve_scalar(|r| alpha * r + beta, |_| alpha, guess, SolveConfig::default()).unwrap();
        let want = beta / (1.0 - alpha);
        prop_assert!(res.converged);
        prop_assert!((res.r - want).abs() <= 1e-12 * (1.0 + want.abs()));
        prop_assert!((res.r - (alpha * res.r + beta)).abs() <= 1e-12 * (1.0 + res.r.abs()));
    }
}
