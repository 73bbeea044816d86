//! Weierstrass ℘ machinery: invariants, cubic roots, periods, evaluation and
//! the Halphen/Jacobi bridge.
//!
//! Conventions:
//! - `Invariants` are real; the cubic is `4t³ − g2·t − g3`.
//! - Three real roots are ordered `e1 ≥ e2 ≥ e3`. With one real root, `e2` is
//!   the real root and `e1`, `e3 = conj(e1)` with `Im e1 > 0`.
//! - Periods are full periods. `ω1` is the real period, `Im(ω2/ω1) > 0` and
//!   `Re(ω2/ω1) ∈ [0, 1)`.

mod cubic;
mod halphen;
mod lattice;
mod wp;

pub use cubic::{cubic_roots, CubicRoots};
pub use halphen::{halphen_h, jacobi_from_wp, JacobiTrio};
pub use lattice::{agm, invariants_from_lattice, periods_from_invariants, Lattice};
pub use wp::{wp, wp_pair, wp_prime, wp_rescaled, Weierstrass};

use crate::complex::ComplexError;

/// Relative threshold under which the cubic discriminant counts as zero.
pub const DEGENERATE_REL_TOL: f64 = 1e-12;

/// Distance to a lattice point under which evaluation reports a pole.
pub const POLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum KernelError {
    #[error("degenerate lattice: g2³ − 27·g3² = {0:e}")]
    DegenerateLattice(f64),
    #[error("argument {0} is a lattice point (pole of ℘)")]
    PoleAtLatticePoint(String),
    #[error("Im(τ) must be positive, got τ = {0}")]
    InvalidTau(String),
    #[error("Halphen index must be 1, 2 or 3, got {0}")]
    InvalidIndex(usize),
    #[error("invariants must be finite")]
    NonFinite,
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Real invariants `(g2, g3)` of `℘′² = 4℘³ − g2·℘ − g3`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Invariants {
    pub g2: f64,
    pub g3: f64,
}

impl Invariants {
    pub fn new(g2: f64, g3: f64) -> Self {
        Self { g2, g3 }
    }

    /// `g2³ − 27·g3²`.
    pub fn discriminant(&self) -> f64 {
        self.g2.powi(3) - 27.0 * self.g3 * self.g3
    }

    pub fn is_degenerate(&self) -> bool {
        let scale = self.g2.abs().powi(3) + 27.0 * self.g3 * self.g3;
        scale == 0.0 || self.discriminant().abs() <= DEGENERATE_REL_TOL * scale
    }

    /// Invariants after scaling `z → λz`: `(λ⁻⁴g2, λ⁻⁶g3)`.
    pub fn scaled(&self, lambda: f64) -> Self {
        Self { g2: self.g2 / lambda.powi(4), g3: self.g3 / lambda.powi(6) }
    }

    pub(crate) fn check_finite(&self) -> Result<(), KernelError> {
        if self.g2.is_finite() && self.g3.is_finite() {
            Ok(())
        } else {
            Err(KernelError::NonFinite)
        }
    }
}
