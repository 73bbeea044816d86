//! Real-parameter ₂F₁ and ₃F₂ on complex arguments.
//!
//! `hyp2f1` sums the power series where it converges quickly and otherwise
//! maps the argument with the Pfaff, `1 − x` or `1/x` connection formulas.
//! The remaining lens around `e^{±iπ/3}` is handled by the Euler integral when
//! the parameters allow it. On the cut `x ∈ (1, ∞)` the value is the limit
//! from below (`Im x → 0⁻`).
//!
//! `hyp3f2` is the plain series for `|x| < 1`; `hyp3f2_continued` extends it to
//! the cut plane through the Euler-type integral over a ₂F₁ kernel.

use crate::complex::{c, principal_pow, real, ComplexValue};
use crate::quad::tanh_sinh;

const SERIES_TOL: f64 = 1e-16;
const MAX_TERMS: usize = 4000;
const MAX_TERMS_3F2: usize = 200_000;
const DIRECT_RADIUS: f64 = 0.8;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HyperError {
    #[error("series or transformation did not converge at x = {0}")]
    NonConvergent(String),
    #[error("lower parameter {0} is a non-positive integer")]
    PoleInC(f64),
}

fn is_nonpositive_integer(v: f64) -> bool {
    v <= 0.0 && v == v.round()
}

fn is_integer(v: f64) -> bool {
    (v - v.round()).abs() < 1e-14
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(x) for real `x` (Lanczos, reflection below 1/2). Infinite at the poles.
pub fn gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return f64::INFINITY;
    }
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return pi / ((pi * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, coef) in LANCZOS.iter().enumerate().skip(1) {
        acc += coef / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
}

/// 1/Γ(x), zero at the poles of Γ.
pub fn rgamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        0.0
    } else {
        1.0 / gamma(x)
    }
}

/// Σ (a)_n (b)_n / ((c)_n n!) x^n with a relative term-ratio stop.
fn series_2f1(a: f64, b: f64, c: f64, x: ComplexValue) -> Result<ComplexValue, HyperError> {
    let mut term = real(1.0);
    let mut sum = real(1.0);
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        let ratio = (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0));
        if ratio == 0.0 {
            return Ok(sum);
        }
        term *= x * ratio;
        sum += term;
        if term.norm() <= SERIES_TOL * sum.norm() && n > 2 {
            return Ok(sum);
        }
    }
    Err(HyperError::NonConvergent(format!("{x}")))
}

/// Gauss hypergeometric function ₂F₁(a, b; c; x).
pub fn hyp2f1(a: f64, b: f64, c: f64, x: ComplexValue) -> Result<ComplexValue, HyperError> {
    if is_nonpositive_integer(c) {
        return Err(HyperError::PoleInC(c));
    }
    if x.re == 0.0 && x.im == 0.0 {
        return Ok(real(1.0));
    }
    if is_nonpositive_integer(a) || is_nonpositive_integer(b) {
        return polynomial_2f1(a, b, c, x);
    }
    if x.norm() <= DIRECT_RADIUS {
        return series_2f1(a, b, c, x);
    }
    let one = real(1.0);
    let on_cut = x.im == 0.0 && x.re > 1.0;
    let pfaff_arg = x / (x - one);
    if !on_cut && pfaff_arg.norm() <= DIRECT_RADIUS {
        // (1 − x)^(−a) F(a, c − b; c; x/(x − 1))
        return Ok(principal_pow(one - x, -a) * series_2f1(a, c - b, c, pfaff_arg)?);
    }
    if (one - x).norm() <= DIRECT_RADIUS && !is_integer(c - a - b) {
        return one_minus_x(a, b, c, x);
    }
    if x.norm_sqr().recip() <= DIRECT_RADIUS * DIRECT_RADIUS && !is_integer(a - b) {
        return reciprocal(a, b, c, x);
    }
    if !on_cut {
        if c > b && b > 0.0 {
            return Ok(euler_2f1(a, b, c, x));
        }
        if c > a && a > 0.0 {
            return Ok(euler_2f1(b, a, c, x));
        }
    }
    Err(HyperError::NonConvergent(format!("{x}")))
}

fn polynomial_2f1(a: f64, b: f64, c: f64, x: ComplexValue) -> Result<ComplexValue, HyperError> {
    let m = if is_nonpositive_integer(a) { -a } else { -b } as usize;
    let mut term = real(1.0);
    let mut sum = real(1.0);
    for n in 0..m {
        let nf = n as f64;
        term *= x * ((a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)));
        sum += term;
    }
    Ok(sum)
}

fn one_minus_x(a: f64, b: f64, c: f64, x: ComplexValue) -> Result<ComplexValue, HyperError> {
    complement(a, b, c, real(1.0) - x)
}

/// ₂F₁ at `1 − w`, for `w` known more accurately than `1 − x`.
fn hyp2f1_complement(a: f64, b: f64, c: f64, w: ComplexValue) -> Result<ComplexValue, HyperError> {
    if w.norm() <= DIRECT_RADIUS && !is_integer(c - a - b) && !is_nonpositive_integer(c) {
        complement(a, b, c, w)
    } else {
        hyp2f1(a, b, c, real(1.0) - w)
    }
}

fn complement(a: f64, b: f64, c: f64, w: ComplexValue) -> Result<ComplexValue, HyperError> {
    let gc = gamma(c);
    let first = gc * gamma(c - a - b) * rgamma(c - a) * rgamma(c - b);
    let second = gc * gamma(a + b - c) * rgamma(a) * rgamma(b);
    let mut out = real(0.0);
    if first != 0.0 {
        out += first * series_2f1(a, b, a + b - c + 1.0, w)?;
    }
    if second != 0.0 {
        out += second * principal_pow(w, c - a - b) * series_2f1(c - a, c - b, c - a - b + 1.0, w)?;
    }
    Ok(out)
}

fn reciprocal(a: f64, b: f64, c: f64, x: ComplexValue) -> Result<ComplexValue, HyperError> {
    let y = real(1.0) / x;
    let minus_x = -x;
    let gc = gamma(c);
    let first = gc * gamma(b - a) * rgamma(b) * rgamma(c - a);
    let second = gc * gamma(a - b) * rgamma(a) * rgamma(c - b);
    let mut out = real(0.0);
    if first != 0.0 {
        out += first * principal_pow(minus_x, -a) * series_2f1(a, a - c + 1.0, a - b + 1.0, y)?;
    }
    if second != 0.0 {
        out += second * principal_pow(minus_x, -b) * series_2f1(b, b - c + 1.0, b - a + 1.0, y)?;
    }
    Ok(out)
}

/// Euler integral Γ(c)/(Γ(b)Γ(c−b)) ∫₀¹ t^(b−1)(1−t)^(c−b−1)(1−xt)^(−a) dt, for c > b > 0.
fn euler_2f1(a: f64, b: f64, c: f64, x: ComplexValue) -> ComplexValue {
    let pref = gamma(c) * rgamma(b) * rgamma(c - b);
    let integral = tanh_sinh(0.0, 1.0, 1e-15, |t, da, db| {
        let w = da.powf(b - 1.0) * db.powf(c - b - 1.0);
        principal_pow(real(1.0) - x * t, -a) * w
    });
    integral * pref
}

/// Generalized hypergeometric ₃F₂(a1, a2, a3; b1, b2; x), series for `|x| < 1`.
pub fn hyp3f2(a1: f64, a2: f64, a3: f64, b1: f64, b2: f64, x: ComplexValue) -> Result<ComplexValue, HyperError> {
    for b in [b1, b2] {
        if is_nonpositive_integer(b) {
            return Err(HyperError::PoleInC(b));
        }
    }
    if x.norm() >= 1.0 {
        return Err(HyperError::NonConvergent(format!("{x}")));
    }
    let mut term = real(1.0);
    let mut sum = real(1.0);
    for n in 0..MAX_TERMS_3F2 {
        let nf = n as f64;
        let ratio = (a1 + nf) * (a2 + nf) * (a3 + nf) / ((b1 + nf) * (b2 + nf) * (nf + 1.0));
        if ratio == 0.0 {
            return Ok(sum);
        }
        term *= x * ratio;
        sum += term;
        if term.norm() <= SERIES_TOL * sum.norm() && n > 2 {
            return Ok(sum);
        }
    }
    Err(HyperError::NonConvergent(format!("{x}")))
}

/// ₃F₂ continued to the plane cut along `(1, ∞)`, limit from below on the cut.
///
/// Uses ₃F₂ = Γ(b)/(Γ(a)Γ(b−a)) ∫₀¹ t^(a−1)(1−t)^(b−a−1) ₂F₁(·,·;·; x t) dt for an
/// upper/lower pair with `b > a > 0`, after `t = 1 − v^p`, `p = 1/(b − a)`.
pub fn hyp3f2_continued(
    a1: f64,
    a2: f64,
    a3: f64,
    b1: f64,
    b2: f64,
    x: ComplexValue,
) -> Result<ComplexValue, HyperError> {
    hyp3f2_continued_near_one(a1, a2, a3, b1, b2, x, real(1.0) - x)
}

/// As [`hyp3f2_continued`], with `1 − x` supplied separately for arguments close to 1.
pub fn hyp3f2_continued_near_one(
    a1: f64,
    a2: f64,
    a3: f64,
    b1: f64,
    b2: f64,
    x: ComplexValue,
    one_minus_x: ComplexValue,
) -> Result<ComplexValue, HyperError> {
    if x.norm() <= DIRECT_RADIUS {
        return hyp3f2(a1, a2, a3, b1, b2, x);
    }
    let uppers = [a1, a2, a3];
    let lowers = [b1, b2];
    let mut choice = None;
    'outer: for (i, &a) in uppers.iter().enumerate() {
        for (j, &b) in lowers.iter().enumerate() {
            if b > a && a > 0.0 {
                choice = Some((i, j));
                break 'outer;
            }
        }
    }
    let (i, j) = choice.ok_or_else(|| HyperError::NonConvergent(format!("{x}")))?;
    let a = uppers[i];
    let b = lowers[j];
    let rest: Vec<f64> = uppers.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, v)| *v).collect();
    let lower_rest = lowers[1 - j];
    let p = 1.0 / (b - a);
    let pref = gamma(b) * rgamma(a) * rgamma(b - a) * p;

    let x_on_cut = x.im == 0.0 && one_minus_x.re < 0.0;
    // split at the point of the segment [0, x] closest to 1; both 1 − tc and
    // 1 − x·tc are formed without cancellation from d = 1 − x
    let d = one_minus_x;
    let im_x = -d.im;
    let omt = (d.im * d.im - x.re * d.re) / x.norm_sqr();
    let (tc, one_minus_tc) = if omt <= 0.0 {
        (1.0, 0.0)
    } else if omt >= 1.0 {
        (0.0, 1.0)
    } else {
        (1.0 - omt, omt)
    };
    let gap = if x_on_cut {
        real(0.0)
    } else if one_minus_tc == 0.0 {
        d
    } else if tc == 0.0 {
        real(1.0)
    } else {
        c(0.0, -im_x) * x / x.norm_sqr()
    };
    let mut failure = None;
    // `dt` is t − tc, passed separately so that 1 − x t keeps full precision
    let mut integrand = |t: f64, dt: f64| -> ComplexValue {
        let mut w = gap - x * dt;
        if x_on_cut {
            w.im = 0.0;
        }
        match hyp2f1_complement(rest[0], rest[1], lower_rest, w) {
            Ok(f) if f.re.is_finite() && f.im.is_finite() => f * t.powf(a - 1.0),
            Ok(_) => real(0.0),
            Err(e) => {
                if w.norm() > 1e-12 {
                    failure = Some(e);
                }
                real(0.0)
            }
        }
    };
    // t = 1 − v^p; near v = 1 use the distance to get t accurately
    let t_of = |v: f64, one_minus_v: f64| {
        if v > 0.5 {
            -(p * (-one_minus_v).ln_1p()).exp_m1()
        } else {
            1.0 - v.powf(p)
        }
    };

    let total = if tc > 0.0 && one_minus_tc > 0.0 {
        let vcp = one_minus_tc;
        let vc = vcp.powf(1.0 / p);
        // vc^p − v^p for v = vc·(1 + r)
        let dt_rel = |r: f64| -vcp * (p * r.ln_1p()).exp_m1();
        tanh_sinh(0.0, vc, 1e-14, |v, _, db| integrand(t_of(v, 1.0 - v), dt_rel(-db / vc)))
            + tanh_sinh(vc, 1.0, 1e-14, |v, da, db| integrand(t_of(v, db), dt_rel(da / vc)))
    } else {
        tanh_sinh(0.0, 1.0, 1e-14, |v, _, db| {
            let t = t_of(v, db);
            let dt = if one_minus_tc == 0.0 { -v.powf(p) } else { t - tc };
            integrand(t, dt)
        })
    };
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(total * pref)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_values() {
        assert!((gamma(5.0) - 24.0).abs() < 1e-12);
        assert!((gamma(0.5) - std::f64::consts::PI.sqrt()).abs() < 1e-14);
        assert!((gamma(-0.5) + 2.0 * std::f64::consts::PI.sqrt()).abs() < 1e-13);
        assert_eq!(rgamma(-3.0), 0.0);
    }

    #[test]
    fn empty_sum_and_log_closed_form() {
        assert_eq!(hyp2f1(0.3, 0.7, 1.1, real(0.0)).unwrap(), real(1.0));
        let v = hyp2f1(1.0, 1.0, 2.0, real(0.5)).unwrap();
        assert!((v.re - 2.0 * 2f64.ln()).abs() < 1e-14, "{v}");
    }

    #[test]
    fn pole_in_c() {
        assert_eq!(hyp2f1(0.5, 0.5, -2.0, real(0.3)), Err(HyperError::PoleInC(-2.0)));
    }

    #[test]
    fn log_closed_form_everywhere() {
        // −ln(1−x)/x with principal log, including the lens near e^{iπ/3}
        for x in [c(0.5, 0.866), c(-3.0, 0.5), c(0.95, 0.1), c(4.0, 2.0), c(0.2, -0.9)] {
            let v = hyp2f1(1.0, 1.0, 2.0, x).unwrap();
            let exact = -(real(1.0) - x).ln() / x;
            assert!((v - exact).norm() < 1e-12, "x={x} v={v} exact={exact}");
        }
    }

    #[test]
    fn branch_cut_is_limit_from_below() {
        // ₂F₁(1,1;2;x) = −ln(1−x)/x; below the cut ln(1−x) = ln(x−1) + iπ
        let x = 3.0;
        let v = hyp2f1(1.0, 1.0, 2.0, real(x));
        // c−a−b = 0 is an integer case on the cut: the connection formula is unavailable
        assert!(v.is_err());
        let (a, b, cc) = (1.0 / 3.0, 2.0 / 3.0, 0.75);
        let on = hyp2f1(a, b, cc, real(x)).unwrap();
        let below = hyp2f1(a, b, cc, c(x, -1e-9)).unwrap();
        assert!((on - below).norm() < 1e-7, "{on} {below}");
    }

    #[test]
    fn arcsine_closed_form() {
        // ₂F₁(1/2,1/2;3/2;x²) = asin(x)/x
        for x in [0.3_f64, 0.95, 0.999] {
            let v = hyp2f1(0.5, 0.5, 1.5, real(x * x)).unwrap();
            assert!((v.re - x.asin() / x).abs() < 1e-12, "x={x}");
        }
    }

    #[test]
    fn hyp3f2_reduces_to_2f1() {
        // ₃F₂(a, b, c; d, c; x) = ₂F₁(a, b; d; x)
        let x = c(0.4, 0.3);
        let lhs = hyp3f2(0.3, 0.6, 1.7, 1.2, 1.7, x).unwrap();
        let rhs = hyp2f1(0.3, 0.6, 1.2, x).unwrap();
        assert!((lhs - rhs).norm() < 1e-14);
        assert!(hyp3f2(0.3, 0.6, 1.7, 1.2, 1.7, real(1.0)).is_err());
    }

    #[test]
    fn continued_3f2_matches_series_inside_disk() {
        let p = (1.0 / 3.0, 2.0 / 3.0, 1.0, 0.75, 1.25);
        for x in [c(0.85, 0.1), c(-0.9, 0.0), c(0.1, 0.95)] {
            let s = hyp3f2(p.0, p.1, p.2, p.3, p.4, x).unwrap();
            let tail = hyp3f2_continued(p.0, p.1, p.2, p.3, p.4, x).unwrap();
            assert!((s - tail).norm() < 1e-10 * s.norm(), "x={x}: {s} vs {tail}");
        }
    }

    #[test]
    fn continued_3f2_on_the_cut() {
        // reference from 30-digit arithmetic, limit from below
        let v = hyp3f2_continued(1.0 / 3.0, 2.0 / 3.0, 1.0, 0.75, 1.25, real(11.390_625)).unwrap();
        let reference = c(0.348_098_091_082_906_98, -0.468_333_409_087_931_01);
        assert!((v - reference).norm() < 1e-10, "{v}");
        let below = hyp3f2_continued(1.0 / 3.0, 2.0 / 3.0, 1.0, 0.75, 1.25, c(11.390_625, -1e-10)).unwrap();
        assert!((v - below).norm() < 1e-7, "{below}");
    }
}
