//! Eisenstein series, the modular discriminant and the parameter `s(τ)`.

use std::f64::consts::PI;

use super::ModularError;
use crate::complex::{c, real, ComplexValue};

/// Hard cap on adaptive truncation.
pub const MAX_TERMS: usize = 10_000;
/// Successive truncations must agree to this relative level.
pub const ADAPTIVE_TOL: f64 = 1e-16;
/// |E₄| below this counts as vanishing.
pub const E4_ZERO_TOL: f64 = 1e-12;

/// Truncated series value with an error bound for the omitted tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: ComplexValue,
    pub error_bound: f64,
}

/// `q = exp(2πiτ)`, rejecting `|q| ≥ 1`.
pub fn nome(tau: ComplexValue) -> Result<ComplexValue, ModularError> {
    if !(tau.im > 0.0) || !tau.re.is_finite() {
        return Err(ModularError::NonConvergent(format!("Im τ ≤ 0 at τ = {tau}")));
    }
    // 1-periodic in Re τ: reduce first so the phase stays accurate
    let x = tau.re - tau.re.floor();
    Ok(ComplexValue::from_polar((-2.0 * PI * tau.im).exp(), 2.0 * PI * x))
}

fn divisor_term(k: i32, n: usize, qn: ComplexValue) -> ComplexValue {
    (n as f64).powi(k) * qn / (real(1.0) - qn)
}

fn lambert(k: i32, weight: f64, tau: ComplexValue, n_terms: usize) -> Result<SeriesValue, ModularError> {
    if n_terms == 0 {
        return Err(ModularError::InvalidTruncation(n_terms));
    }
    let q = nome(tau)?;
    let mut sum = real(0.0);
    let mut qn = real(1.0);
    for n in 1..=n_terms {
        qn *= q;
        sum += divisor_term(k, n, qn);
    }
    let next = qn * q;
    let omitted = weight * ((n_terms + 1) as f64).powi(k) * next.norm() / (1.0 - next.norm());
    Ok(SeriesValue { value: real(1.0) + weight * sum, error_bound: 2.0 * omitted })
}

fn lambert_adaptive(k: i32, weight: f64, tau: ComplexValue) -> Result<ComplexValue, ModularError> {
    let q = nome(tau)?;
    let mut sum = real(0.0);
    let mut qn = real(1.0);
    for n in 1..=MAX_TERMS {
        qn *= q;
        let term = divisor_term(k, n, qn) * weight;
        sum += term;
        if term.norm() <= ADAPTIVE_TOL * (real(1.0) + sum).norm() {
            return Ok(real(1.0) + sum);
        }
    }
    Err(ModularError::NonConvergent(format!("E{k} series at τ = {tau}")))
}

/// `E₄(τ) = 1 + 240 Σ n³qⁿ/(1 − qⁿ)` truncated after `n_terms` terms.
pub fn eisenstein_e4(tau: ComplexValue, n_terms: usize) -> Result<SeriesValue, ModularError> {
    lambert(3, 240.0, tau, n_terms)
}

/// `E₆(τ) = 1 − 504 Σ n⁵qⁿ/(1 − qⁿ)` truncated after `n_terms` terms.
pub fn eisenstein_e6(tau: ComplexValue, n_terms: usize) -> Result<SeriesValue, ModularError> {
    lambert(5, -504.0, tau, n_terms)
}

pub fn eisenstein_e4_adaptive(tau: ComplexValue) -> Result<ComplexValue, ModularError> {
    lambert_adaptive(3, 240.0, tau)
}

pub fn eisenstein_e6_adaptive(tau: ComplexValue) -> Result<ComplexValue, ModularError> {
    lambert_adaptive(5, -504.0, tau)
}

/// `Δ(τ) = q ∏ (1 − qⁿ)²⁴` over `n_factors` factors.
pub fn modular_discriminant(tau: ComplexValue, n_factors: usize) -> Result<SeriesValue, ModularError> {
    if n_factors == 0 {
        return Err(ModularError::InvalidTruncation(n_factors));
    }
    let q = nome(tau)?;
    let mut prod = real(1.0);
    let mut qn = real(1.0);
    for _ in 0..n_factors {
        qn *= q;
        prod *= real(1.0) - qn;
    }
    let value = q * prod.powi(24);
    let r = q.norm();
    // |log of the omitted factors| ≤ 24 Σ_{n>N} |q|ⁿ/(1−|q|ⁿ)
    let tail = 24.0 * qn.norm() * r / ((1.0 - r) * (1.0 - r));
    Ok(SeriesValue { value, error_bound: value.norm() * tail.exp_m1() })
}

pub fn modular_discriminant_adaptive(tau: ComplexValue) -> Result<ComplexValue, ModularError> {
    let q = nome(tau)?;
    let mut prod = real(1.0);
    let mut qn = real(1.0);
    for _ in 0..MAX_TERMS {
        qn *= q;
        prod *= real(1.0) - qn;
        if qn.norm() <= ADAPTIVE_TOL * 1e-2 {
            return Ok(q * prod.powi(24));
        }
    }
    Err(ModularError::NonConvergent(format!("Δ product at τ = {tau}")))
}

/// `s = 1 − 1728·Δ/E₄³`.
pub fn s_parameter(tau: ComplexValue) -> Result<ComplexValue, ModularError> {
    Ok(s_and_complement(tau)?.0)
}

/// `(s, 1 − s)`, both at full relative precision: `s = E₆²/E₄³` and
/// `1 − s = 1728·Δ/E₄³`. Near `τ = i` the zero moves like `s^{1/4}`, so `s`
/// must not come from a cancelling difference.
pub fn s_and_complement(tau: ComplexValue) -> Result<(ComplexValue, ComplexValue), ModularError> {
    let e4 = eisenstein_e4_adaptive(tau)?;
    if e4.norm() < E4_ZERO_TOL {
        return Err(ModularError::E4Vanishes(format!("{tau}")));
    }
    let e6 = eisenstein_e6_adaptive(tau)?;
    let delta = modular_discriminant_adaptive(tau)?;
    let e4_cubed = e4.powi(3);
    Ok((e6 * e6 / e4_cubed, 1728.0 * delta / e4_cubed))
}

/// The point `ρ = e^{2πi/3}` where `E₄` vanishes.
pub fn rho() -> ComplexValue {
    c(-0.5, 3f64.sqrt() / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_limit() {
        let e4 = eisenstein_e4(c(0.0, 10.0), 5).unwrap();
        assert!((e4.value - 1.0).norm() < 1e-20);
        let d = modular_discriminant(c(0.0, 10.0), 5).unwrap();
        let q = (-20.0 * PI).exp();
        assert!((d.value.re - q).abs() < 1e-12 * q);
    }

    #[test]
    fn bad_tau() {
        assert!(matches!(eisenstein_e4(c(0.3, -0.1), 10), Err(ModularError::NonConvergent(_))));
        assert!(matches!(modular_discriminant(c(0.3, 0.0), 10), Err(ModularError::NonConvergent(_))));
        assert!(eisenstein_e4(c(0.0, 1.0), 0).is_err());
    }

    #[test]
    fn e4_at_i_matches_known_constant() {
        // E₄(i) = 3Γ(1/4)⁸/(2π)⁶
        let g = 3.625_609_908_221_908_3_f64;
        let exact = 3.0 * g.powi(8) / (2.0 * PI).powi(6);
        let v = eisenstein_e4_adaptive(c(0.0, 1.0)).unwrap();
        assert!((v.re - exact).abs() < 1e-13 * exact, "{v} {exact}");
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn e4_vanishes_at_rho() {
        assert!(matches!(s_parameter(rho()), Err(ModularError::E4Vanishes(_))));
        assert!(s_parameter(rho() + c(0.0, 0.05)).is_ok());
    }

    #[test]
    fn error_bound_covers_the_tail() {
        let tau = c(0.5, 1.033);
        let fine = eisenstein_e4(tau, 400).unwrap().value;
        for n in [2, 4, 8] {
            let coarse = eisenstein_e4(tau, n).unwrap();
            assert!((coarse.value - fine).norm() <= coarse.error_bound);
            let d = modular_discriminant(tau, n).unwrap();
            let dfine = modular_discriminant(tau, 200).unwrap().value;
            assert!((d.value - dfine).norm() <= d.error_bound.max(1e-300));
        }
    }

    #[test]
    fn translation_invariance() {
        let tau = c(0.23, 0.9);
        let s0 = s_parameter(tau).unwrap();
        let s1 = s_parameter(tau + 1.0).unwrap();
        assert!((s0 - s1).norm() < 1e-13 * s0.norm());
    }
}
