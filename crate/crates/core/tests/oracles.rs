//! Kernel values checked against oracles built here from first principles.

use ellflow::complex::ComplexValue;
use ellflow::elliptic::{agm, cubic_roots, periods_from_invariants, Invariants, Weierstrass};
use ellflow::modular::hyp2f1;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> ComplexValue {
    ComplexValue::new(re, im)
}

/// Jacobi theta functions at nome `q` by direct summation.
fn thetas(z: ComplexValue, q: ComplexValue) -> [ComplexValue; 4] {
    let mut t = [c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)];
    for n in 0..40i32 {
        let nf = n as f64;
        let qh = q.powf((nf + 0.5) * (nf + 0.5));
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        t[0] += 2.0 * sign * qh * ((2.0 * nf + 1.0) * z).sin();
        t[1] += 2.0 * qh * ((2.0 * nf + 1.0) * z).cos();
        if n > 0 {
            let qn = q.powf(nf * nf);
            t[2] += 2.0 * qn * (2.0 * nf * z).cos();
            t[3] += 2.0 * sign * qn * (2.0 * nf * z).cos();
        }
    }
    t
}

/// ℘ on `ω1·(ℤ + τℤ)` from theta quotients.
fn wp_theta(z: ComplexValue, omega1: ComplexValue, tau: ComplexValue) -> ComplexValue {
    let q = (c(0.0, PI) * tau).exp();
    let u = z / omega1;
    let th0 = thetas(c(0.0, 0.0), q);
    let th = thetas(PI * u, q);
    let (t2, t3) = (th0[1], th0[2]);
    let r = PI * t2 * t3 * th[3] / th[0];
    (r * r - PI * PI / 3.0 * (t2.powi(4) + t3.powi(4))) / (omega1 * omega1)
}

/// Symmetric truncated lattice sum.
fn wp_lattice_sum(z: ComplexValue, w1: ComplexValue, w2: ComplexValue, n: i32) -> ComplexValue {
    let mut s = 1.0 / (z * z);
    for i in -n..=n {
        for j in -n..=n {
            if i == 0 && j == 0 {
                continue;
            }
            let w = w1 * i as f64 + w2 * j as f64;
            s += 1.0 / ((z - w) * (z - w)) - 1.0 / (w * w);
        }
    }
    s
}

fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for k in 1..n {
        s += f(a + h * k as f64) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

const INVARIANTS: [(f64, f64); 5] = [(4.0 / 3.0, 1.0), (4.0, 0.0), (1.0, -2.0), (7.0, 1.5), (-3.0, 0.5)];

#[test]
fn wp_matches_theta_quotients() {
    for (g2, g3) in INVARIANTS {
        let w = Weierstrass::from_invariants(Invariants::new(g2, g3)).unwrap();
        let lat = *w.lattice();
        for z in [c(0.3, 0.1), c(-0.7, 0.45), c(1.1, -0.2), c(0.05, 0.9)] {
            let got = w.wp(z).unwrap();
            let want = wp_theta(z, lat.omega1, lat.tau);
            assert!((got - want).norm() <= 1e-9 * (1.0 + want.norm()), "({g2},{g3}) z={z}: {got} vs {want}");
        }
    }
}

#[test]
fn wp_matches_lattice_sum() {
    let w = Weierstrass::from_invariants(Invariants::new(4.0 / 3.0, 1.0)).unwrap();
    let lat = *w.lattice();
    for z in [c(0.4, 0.2), c(0.9, -0.3)] {
        let got = w.wp(z).unwrap();
        let want = wp_lattice_sum(z, lat.omega1, lat.omega2, 300);
        assert!((got - want).norm() < 1e-4, "{got} vs {want}");
    }
}

#[test]
fn real_period_matches_quadrature() {
    for (g2, g3) in INVARIANTS {
        let inv = Invariants::new(g2, g3);
        let roots = cubic_roots(inv);
        // largest real root
        let e = roots.as_array().iter().filter(|r| r.im == 0.0).map(|r| r.re).fold(f64::NEG_INFINITY, f64::max);
        // 4t³ − g2 t − g3 = 4(t − e)(t² + e t + e² − g2/4); t = e + tan²θ
        let q = |t: f64| t * t + e * t + e * e - g2 / 4.0;
        let f = |th: f64| {
            if th >= PI / 2.0 {
                return 1.0;
            }
            let s = th.tan();
            (1.0 + s * s) / q(e + s * s).sqrt()
        };
        let omega = 2.0 * simpson(f, 0.0, PI / 2.0, 20_000);
        let lat = periods_from_invariants(inv).unwrap();
        assert!((lat.omega1.re - omega).abs() < 1e-9 * omega, "({g2},{g3}): {} vs {omega}", lat.omega1.re);
    }
}

#[test]
fn agm_reference_values() {
    // Gauss: agm(1, √2) = π / ϖ with the lemniscate constant ϖ
    let lemniscate = 2.622_057_554_292_119_8;
    assert!((agm(1.0, 2f64.sqrt()) - PI / lemniscate).abs() < 1e-14);
    assert!((agm(3.0, 3.0) - 3.0).abs() < 1e-15);
    let (mut a, mut b) = (5.0f64, 0.25f64);
    for _ in 0..60 {
        (a, b) = (0.5 * (a + b), (a * b).sqrt());
    }
    assert!((agm(5.0, 0.25) - a).abs() < 1e-14);
}

#[test]
fn hyp2f1_matches_integral() {
    for x in [0.1, 0.5, 1.0, 2.5, 7.0, 40.0] {
        let series = x * hyp2f1(0.5, 5.0 / 6.0, 1.5, c(-x * x, 0.0)).unwrap().re;
        let integral = simpson(|s: f64| (1.0 + s * s).powf(-5.0 / 6.0), 0.0, x, 40_000);
        assert!((series - integral).abs() < 1e-9 * (1.0 + integral), "x={x}: {series} vs {integral}");
    }
}

#[test]
fn hyp2f1_contiguous_relation() {
    // c(c−1)(z−1)F(c−1) + c[c−1−(2c−a−b−1)z]F(c) + (c−a)(c−b)z F(c+1) = 0
    let (a, b, cc) = (1.0 / 12.0, 5.0 / 12.0, 1.7);
    for z in [c(0.3, 0.0), c(-0.8, 0.1), c(0.5, -0.4), c(-3.0, 0.0), c(2.0, 1.0)] {
        let f = |cv: f64| hyp2f1(a, b, cv, z).unwrap();
        let lhs = cc * (cc - 1.0) * (z - 1.0) * f(cc - 1.0)
            + cc * (cc - 1.0 - (2.0 * cc - a - b - 1.0) * z) * f(cc)
            + (cc - a) * (cc - b) * z * f(cc + 1.0);
        let scale = f(cc).norm() * (1.0 + z.norm()) * cc * cc;
        assert!(lhs.norm() < 1e-11 * scale, "z={z}: {lhs}");
    }
}

#[test]
fn lemniscatic_zero_golden_value() {
    // square lattice: ℘ vanishes at the centre (ω1 + ω2)/2, where ℘′ = 0 too;
    // the double zero costs half the digits
    let zr = ellflow::verify::zero_reality_check(Invariants::new(4.0, 0.0)).unwrap();
    let lat = periods_from_invariants(Invariants::new(4.0, 0.0)).unwrap();
    assert!(zr.off_axis);
    assert!((zr.min_abs_im - 0.5 * lat.omega1.re).abs() < 1e-7, "{}", zr.min_abs_im);
}
