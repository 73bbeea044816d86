//! Zeros `±z₀` of ℘ from the hypergeometric formula, with a Newton oracle.

use std::f64::consts::PI;

use super::hypergeometric::{hyp2f1, hyp3f2, hyp3f2_continued_near_one};
use super::qseries::{s_and_complement, s_parameter};
use super::ZeroError;
use crate::complex::{c, principal_pow, ComplexValue};
use crate::elliptic::{periods_from_invariants, Invariants, Lattice, Weierstrass};

/// ℘ residual tolerance for formula zeros, relative to the root scale.
pub const FORMULA_RESIDUAL_TOL: f64 = 1e-6;
pub const NEWTON_TOL: f64 = 1e-10;
pub const NEWTON_MAX_ITER: usize = 100;

/// Zero of ℘ on the lattice `ℤ + τℤ`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ZeroPair {
    /// Canonical representative in the τ-cell.
    pub z0: ComplexValue,
    /// The other zero `−z₀` reduced to the same cell.
    pub minus_z0: ComplexValue,
    pub s: ComplexValue,
    pub tau: ComplexValue,
    /// `|℘(z₀; 1, τ)|`.
    pub residual: f64,
}

impl ZeroPair {
    /// The zeros on the lattice `ω₁(ℤ + τℤ)`.
    pub fn scaled(&self, omega1: ComplexValue) -> (ComplexValue, ComplexValue) {
        (self.z0 * omega1, self.minus_z0 * omega1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum ZeroMethod {
    /// Formula restricted to `|s| < 1`, `|1 − s| < 1`.
    Hypergeometric,
    /// Formula with analytically continued ₃F₂ and ₂F₁.
    Continued,
    Newton,
}

/// Zeros for real invariants, on the physical lattice.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PhysicalZeros {
    pub z0: ComplexValue,
    pub minus_z0: ComplexValue,
    pub omega1: ComplexValue,
    pub omega2: ComplexValue,
    pub method: ZeroMethod,
    pub residual: f64,
}

pub fn in_formula_domain(s: ComplexValue) -> bool {
    s.norm() < 1.0 && (1.0 - s).norm() < 1.0
}

/// Reduce `±z` to the cell and order them with the smaller imaginary part first.
pub fn canonical_pair(lat: &Lattice, z: ComplexValue) -> (ComplexValue, ComplexValue) {
    let a = lat.reduce_to_cell(z);
    let b = lat.reduce_to_cell(-z);
    let key = |w: ComplexValue| (w.im * 1e9).round() / 1e9;
    if (key(a), a.re) <= (key(b), b.re) {
        (a, b)
    } else {
        (b, a)
    }
}

fn root_scale(g2: ComplexValue, g3: ComplexValue) -> f64 {
    (g2.norm() / 12.0).sqrt().max((g3.norm() / 4.0).cbrt()).max(f64::MIN_POSITIVE)
}

/// `(1 + τ)/2 + c₂ s^{1/4} ₃F₂(1/3, 2/3, 1; 3/4, 5/4; s)/₂F₁(1/12, 5/12; 1; 1 − s)`.
fn formula(
    tau: ComplexValue,
    s: ComplexValue,
    one_minus_s: ComplexValue,
    continued: bool,
) -> Result<ComplexValue, ZeroError> {
    let c2 = c(0.0, -(6f64.sqrt()) / (3.0 * PI));
    let (a1, a2, b1, b2) = (1.0 / 3.0, 2.0 / 3.0, 0.75, 1.25);
    let f3 = if continued {
        hyp3f2_continued_near_one(a1, a2, 1.0, b1, b2, s, one_minus_s)?
    } else {
        hyp3f2(a1, a2, 1.0, b1, b2, s)?
    };
    let f2 = hyp2f1(1.0 / 12.0, 5.0 / 12.0, 1.0, one_minus_s)?;
    Ok((1.0 + tau) / 2.0 + c2 * principal_pow(s, 0.25) * f3 / f2)
}

/// Map τ to `Re τ ∈ (−1/2, 1/2]`, `|τ| ≥ 1`; returns `(τ', λ)` with `ℤ + τℤ = λ(ℤ + τ'ℤ)`.
fn reduce_tau(tau: ComplexValue) -> (ComplexValue, ComplexValue) {
    let mut t = tau;
    let mut lambda = c(1.0, 0.0);
    for _ in 0..64 {
        t.re -= (t.re - 0.5).ceil();
        if t.norm_sqr() < 1.0 - 1e-15 {
            lambda *= t;
            t = -1.0 / t;
        } else {
            break;
        }
    }
    (t, lambda)
}

fn zero_on_tau(tau: ComplexValue, continued: bool) -> Result<ZeroPair, ZeroError> {
    let lat = Lattice::normalized(tau)?;
    let (t, lambda) = reduce_tau(tau);
    let (mut s, mut one_minus_s) = s_and_complement(t)?;
    if !continued && !in_formula_domain(s) {
        return Err(ZeroError::OutsideFormulaDomain(format!("{s}")));
    }
    // s is real on the boundary of the fundamental domain: on (1, ∞) for
    // Re τ' = ±1/2 and on (−∞, 0) along |τ'| = 1. There the value is the limit
    // from the interior, which lies below the axis when Re τ' > 0.
    let on_cut = s.im.abs() <= 1e-13 * s.norm().min(one_minus_s.norm()) && (one_minus_s.re < 0.0 || s.re < 0.0);
    if on_cut {
        s.im = if t.re < 0.0 { 1e-300 } else { -1e-300 };
        one_minus_s.im = -s.im;
    }
    let z_reduced = if s.im > 0.0 {
        // the conjugate lattice has conj(s) in the lower half plane
        formula(-t.conj(), s.conj(), one_minus_s.conj(), continued)?.conj()
    } else {
        formula(t, s, one_minus_s, continued)?
    };
    let z = z_reduced * lambda;
    let (z0, minus_z0) = canonical_pair(&lat, z);
    let w = Weierstrass::from_lattice(lat)?;
    let (g2, g3) = w.invariants();
    let residual = w.wp(z0)?.norm();
    if !(residual <= FORMULA_RESIDUAL_TOL * root_scale(g2, g3)) {
        return Err(ZeroError::FormulaResidual(residual));
    }
    Ok(ZeroPair { z0, minus_z0, s: s_parameter(tau)?, tau, residual })
}

/// Zeros of ℘ on `ℤ + τℤ`; requires `|s| < 1` and `|1 − s| < 1`.
pub fn wp_zero_hypergeometric(tau: ComplexValue) -> Result<ZeroPair, ZeroError> {
    zero_on_tau(tau, false)
}

/// Same formula for any τ, with ₃F₂ and ₂F₁ continued beyond the unit disk.
///
/// When `Im s > 0` the formula is applied on the conjugate lattice `−τ̄` and
/// the result conjugated back; on the cut it is evaluated from below.
pub fn wp_zero_hypergeometric_continued(tau: ComplexValue) -> Result<ZeroPair, ZeroError> {
    zero_on_tau(tau, true)
}

/// Newton iteration on ℘ from `seed`, default `(ω₁ + ω₂)/2 + 0.1·ω₁`.
pub fn wp_zero_newton(inv: Invariants, seed: Option<ComplexValue>) -> Result<ComplexValue, ZeroError> {
    let w = Weierstrass::from_invariants(inv)?;
    let lat = *w.lattice();
    let mut z = seed.unwrap_or((lat.omega1 + lat.omega2) / 2.0 + 0.1 * lat.omega1);
    let mut polish = 0;
    for _ in 0..NEWTON_MAX_ITER {
        let (p, dp) = w.eval(z)?;
        if p.norm() <= NEWTON_TOL {
            // a couple of extra steps tighten simple zeros to full precision
            if polish == 2 || dp.norm() < 1e-6 {
                return Ok(lat.reduce_to_cell(z));
            }
            polish += 1;
        }
        if dp.norm() <= 1e-14 * (1.0 + p.norm().powf(1.5)) {
            return Err(ZeroError::DerivativeVanishes(format!("{z}")));
        }
        let step = p / dp;
        let next = z - step;
        if polish > 0 && w.wp(next)?.norm() > p.norm() {
            return Ok(lat.reduce_to_cell(z));
        }
        z = lat.reduce_nearest(next - lat.omega1 / 2.0 - lat.omega2 / 2.0) + lat.omega1 / 2.0 + lat.omega2 / 2.0;
    }
    Err(ZeroError::NoConvergence(NEWTON_MAX_ITER))
}

/// Physical zeros `±z₀` for real invariants.
pub fn wp_zeros_physical(inv: Invariants, method: ZeroMethod) -> Result<PhysicalZeros, ZeroError> {
    let lat = periods_from_invariants(inv)?;
    let (z, method) = match method {
        ZeroMethod::Newton => (wp_zero_newton(inv, None)?, method),
        ZeroMethod::Hypergeometric => (wp_zero_hypergeometric(lat.tau)?.z0 * lat.omega1, method),
        ZeroMethod::Continued => match wp_zero_hypergeometric_continued(lat.tau) {
            Ok(zp) => (zp.z0 * lat.omega1, method),
            // E₄ = 0 lattices and other unreachable corners fall back to Newton
            Err(ZeroError::Modular(_)) | Err(ZeroError::Hyper(_)) => (wp_zero_newton(inv, None)?, ZeroMethod::Newton),
            Err(e) => return Err(e),
        },
    };
    let (z0, minus_z0) = canonical_pair(&lat, z);
    let w = Weierstrass::from_invariants(inv)?;
    let residual = w.wp(z0)?.norm();
    Ok(PhysicalZeros { z0, minus_z0, omega1: lat.omega1, omega2: lat.omega2, method, residual })
}
