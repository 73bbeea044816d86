//! Modular forms, hypergeometric functions and the zeros of ℘.

pub mod hypergeometric;
pub mod qseries;
mod zeros;

pub use hypergeometric::{gamma, hyp2f1, hyp3f2, hyp3f2_continued, hyp3f2_continued_near_one, HyperError};
pub use qseries::{
    eisenstein_e4, eisenstein_e4_adaptive, eisenstein_e6, eisenstein_e6_adaptive, modular_discriminant,
    modular_discriminant_adaptive, nome, s_and_complement, s_parameter, SeriesValue,
};
pub use zeros::{
    canonical_pair, in_formula_domain, wp_zero_hypergeometric, wp_zero_hypergeometric_continued, wp_zero_newton,
    wp_zeros_physical, ZeroMethod, ZeroPair, PhysicalZeros,
};

use crate::complex::ComplexValue;
use crate::elliptic::KernelError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModularError {
    #[error("q-series does not converge: {0}")]
    NonConvergent(String),
    #[error("E4 vanishes at τ = {0}")]
    E4Vanishes(String),
    #[error("truncation must keep at least one term, got {0}")]
    InvalidTruncation(usize),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ZeroError {
    #[error("s = {0} violates |s| < 1 and |1 − s| < 1")]
    OutsideFormulaDomain(String),
    #[error("Newton iteration did not converge after {0} iterations")]
    NoConvergence(usize),
    #[error("℘′ vanishes near z = {0}")]
    DerivativeVanishes(String),
    #[error("formula zero fails the ℘ residual check: |℘(z0)| = {0:e}")]
    FormulaResidual(f64),
    #[error(transparent)]
    Modular(#[from] ModularError),
    #[error(transparent)]
    Hyper(#[from] HyperError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// A point of the upper half plane with its nome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModularPoint {
    pub tau: ComplexValue,
    pub q: ComplexValue,
}

impl ModularPoint {
    pub fn new(tau: ComplexValue) -> Result<Self, ModularError> {
        Ok(Self { tau, q: nome(tau)? })
    }
}
