//! Complex scalar used throughout the elliptic and modular code.
//!
//! Arithmetic is `num_complex::Complex64`; the helpers here add the checked
//! operations the rest of the crate relies on (division that refuses a zero
//! divisor, finiteness checks, principal roots with an explicit argument).

use std::f64::consts::PI;

pub use num_complex::Complex64;

/// Complex number with `re`/`im` components.
pub type ComplexValue = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum ComplexError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("non-finite component")]
    NonFinite,
}

#[inline]
pub fn c(re: f64, im: f64) -> ComplexValue {
    ComplexValue::new(re, im)
}

#[inline]
pub fn real(re: f64) -> ComplexValue {
    ComplexValue::new(re, 0.0)
}

pub fn checked_div(num: ComplexValue, den: ComplexValue) -> Result<ComplexValue, ComplexError> {
    if den.re == 0.0 && den.im == 0.0 {
        return Err(ComplexError::DivisionByZero);
    }
    let q = num / den;
    if is_finite(q) {
        Ok(q)
    } else {
        Err(ComplexError::NonFinite)
    }
}

#[inline]
pub fn is_finite(z: ComplexValue) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// `z^p` with the principal branch, `arg z ∈ (−π, π]`.
///
/// A negative real `z` with a signed-zero imaginary part is still mapped to
/// `arg = +π`, so results do not depend on how the zero was produced.
pub fn principal_pow(z: ComplexValue, p: f64) -> ComplexValue {
    if z.re == 0.0 && z.im == 0.0 {
        return if p > 0.0 { real(0.0) } else { real(f64::INFINITY) };
    }
    let arg = principal_arg(z);
    let modulus = z.norm();
    ComplexValue::from_polar(modulus.powf(p), p * arg)
}

/// Argument in `(−π, π]`; the negative real axis maps to `+π`.
pub fn principal_arg(z: ComplexValue) -> f64 {
    if z.im == 0.0 && z.re < 0.0 {
        PI
    } else {
        z.im.atan2(z.re)
    }
}

/// Maximum of the absolute component differences.
pub fn dist(a: ComplexValue, b: ComplexValue) -> f64 {
    (a - b).norm()
}
