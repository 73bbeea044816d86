use std::f64::consts::PI;

use super::{cubic_roots, Invariants, KernelError};
use crate::complex::{c, real, ComplexValue};
use crate::modular::qseries;

/// Period lattice `ω1·ℤ + ω2·ℤ` with `τ = ω2/ω1`, `Im τ > 0`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Lattice {
    pub omega1: ComplexValue,
    pub omega2: ComplexValue,
    pub tau: ComplexValue,
}

impl Lattice {
    pub fn new(omega1: ComplexValue, omega2: ComplexValue) -> Result<Self, KernelError> {
        if omega1.norm() == 0.0 {
            return Err(KernelError::InvalidTau("ω1 = 0".into()));
        }
        let tau = omega2 / omega1;
        if !(tau.im > 0.0) || !tau.re.is_finite() {
            return Err(KernelError::InvalidTau(format!("{tau}")));
        }
        Ok(Self { omega1, omega2, tau })
    }

    /// The τ-normalized lattice `ℤ + τℤ`.
    pub fn normalized(tau: ComplexValue) -> Result<Self, KernelError> {
        Self::new(real(1.0), tau)
    }

    /// Gauss-reduced basis `(b1, b2)` with `|b1| ≤ |b2|`, `b1` a shortest vector.
    pub fn reduced_basis(&self) -> (ComplexValue, ComplexValue) {
        let (mut b1, mut b2) = (self.omega1, self.omega2);
        for _ in 0..200 {
            if b2.norm_sqr() < b1.norm_sqr() {
                std::mem::swap(&mut b1, &mut b2);
            }
            let mu = ((b2 * b1.conj()).re / b1.norm_sqr()).round();
            if mu == 0.0 {
                break;
            }
            b2 -= mu * b1;
        }
        (b1, b2)
    }

    /// Length of the shortest nonzero lattice vector.
    pub fn min_period(&self) -> f64 {
        self.reduced_basis().0.norm()
    }

    /// Real coordinates `(α, β)` with `z = α·b1 + β·b2`.
    fn coords(z: ComplexValue, b1: ComplexValue, b2: ComplexValue) -> (f64, f64) {
        let det = b1.re * b2.im - b1.im * b2.re;
        let alpha = (z.re * b2.im - z.im * b2.re) / det;
        let beta = (b1.re * z.im - b1.im * z.re) / det;
        (alpha, beta)
    }

    /// Coordinates of `z` in the `(ω1, ω2)` basis.
    pub fn basis_coords(&self, z: ComplexValue) -> (f64, f64) {
        Self::coords(z, self.omega1, self.omega2)
    }

    /// Representative of `z` closest to the origin (the Voronoi cell of 0).
    pub fn reduce_nearest(&self, z: ComplexValue) -> ComplexValue {
        let (b1, b2) = self.reduced_basis();
        let (alpha, beta) = Self::coords(z, b1, b2);
        let base = z - alpha.round() * b1 - beta.round() * b2;
        let mut best = base;
        for i in -1..=1 {
            for j in -1..=1 {
                let cand = base - i as f64 * b1 - j as f64 * b2;
                if cand.norm_sqr() < best.norm_sqr() {
                    best = cand;
                }
            }
        }
        best
    }

    /// Representative with both `(ω1, ω2)` coordinates in `[0, 1)`.
    pub fn reduce_to_cell(&self, z: ComplexValue) -> ComplexValue {
        let (alpha, beta) = self.basis_coords(z);
        let mut a = alpha - alpha.floor();
        let mut b = beta - beta.floor();
        // snap values that are 1 up to rounding
        if 1.0 - a < 1e-13 {
            a = 0.0;
        }
        if 1.0 - b < 1e-13 {
            b = 0.0;
        }
        a * self.omega1 + b * self.omega2
    }

    /// Lattice scaled by `λ`.
    pub fn scaled(&self, lambda: ComplexValue) -> Self {
        Self { omega1: self.omega1 * lambda, omega2: self.omega2 * lambda, tau: self.tau }
    }
}

/// Arithmetic-geometric mean of two positive reals.
pub fn agm(a: f64, b: f64) -> f64 {
    let (mut a, mut b) = (a, b);
    for _ in 0..64 {
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        if (an - bn).abs() <= 4.0 * f64::EPSILON * an {
            return an;
        }
        a = an;
        b = bn;
    }
    a
}

/// Periods of the lattice with real invariants `(g2, g3)` via AGM.
pub fn periods_from_invariants(inv: Invariants) -> Result<Lattice, KernelError> {
    inv.check_finite()?;
    if inv.is_degenerate() {
        return Err(KernelError::DegenerateLattice(inv.discriminant()));
    }
    let roots = cubic_roots(inv);
    if inv.discriminant() > 0.0 {
        let (e1, e2, e3) = (roots.e1.re, roots.e2.re, roots.e3.re);
        let w1 = PI / agm((e1 - e3).sqrt(), (e1 - e2).sqrt());
        let w2 = PI / agm((e1 - e3).sqrt(), (e2 - e3).sqrt());
        Lattice::new(real(w1), c(0.0, w2))
    } else {
        let e2 = roots.e2.re;
        let h = (roots.e2 - roots.e1).norm();
        let w1 = PI / agm(h.sqrt(), (0.5 * h + 0.75 * e2).sqrt());
        let y = PI / (2.0 * agm(h.sqrt(), (0.5 * h - 0.75 * e2).sqrt()));
        Lattice::new(real(w1), c(0.5 * w1, y))
    }
}

/// Complex invariants `(g2, g3)` of an arbitrary lattice from Eisenstein series.
pub fn invariants_from_lattice(lat: &Lattice) -> Result<(ComplexValue, ComplexValue), KernelError> {
    let e4 = qseries::eisenstein_e4_adaptive(lat.tau)
        .map_err(|_| KernelError::InvalidTau(format!("{}", lat.tau)))?;
    let e6 = qseries::eisenstein_e6_adaptive(lat.tau)
        .map_err(|_| KernelError::InvalidTau(format!("{}", lat.tau)))?;
    let w4 = lat.omega1.powi(4);
    let w6 = lat.omega1.powi(6);
    let g2 = 4.0 * PI.powi(4) / 3.0 * e4 / w4;
    let g3 = 8.0 * PI.powi(6) / 27.0 * e6 / w6;
    Ok((g2, g3))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn agm_known_value() {
        // AGM(1, √2) = 1.19814023473559220744 (Gauss's constant reciprocal times √2)
        assert!((agm(1.0, 2f64.sqrt()) - 1.198_140_234_735_592_2).abs() < 1e-15);
    }

    #[test]
    fn lemniscatic_tau_is_i() {
        let lat = periods_from_invariants(Invariants::new(4.0, 0.0)).unwrap();
        assert!((lat.tau - c(0.0, 1.0)).norm() < 1e-10);
    }

    #[test]
    fn reference_periods() {
        let lat = periods_from_invariants(Invariants::new(4.0 / 3.0, 1.0)).unwrap();
        assert!((lat.omega1.re - 2.81).abs() < 0.01);
        assert!((lat.omega2.re - 1.405).abs() < 0.01);
        assert!((lat.omega2.im - 2.902).abs() < 0.01);
        assert!((lat.tau.re - 0.5).abs() < 0.005);
        assert!((lat.tau.im - 1.033).abs() < 0.005);
    }

    #[test]
    fn degenerate_rejected() {
        assert!(matches!(
            periods_from_invariants(Invariants::new(3.0, 1.0)),
            Err(KernelError::DegenerateLattice(_))
        ));
        assert!(matches!(
            periods_from_invariants(Invariants::new(0.0, 0.0)),
            Err(KernelError::DegenerateLattice(_))
        ));
    }

    #[test]
    fn reduction_is_idempotent_and_minimal() {
        let lat = periods_from_invariants(Invariants::new(4.0 / 3.0, 1.0)).unwrap();
        let z = c(7.3, -5.1);
        let r = lat.reduce_nearest(z);
        assert!((lat.reduce_nearest(r) - r).norm() < 1e-12);
        let (a, b) = lat.basis_coords(z - r);
        assert!((a - a.round()).abs() < 1e-12 && (b - b.round()).abs() < 1e-12);
        let cell = lat.reduce_to_cell(z);
        let (a, b) = lat.basis_coords(cell);
        assert!((0.0..1.0).contains(&a) && (0.0..1.0).contains(&b));
    }

    #[test]
    fn invariants_round_trip() {
        for inv in [Invariants::new(4.0 / 3.0, 1.0), Invariants::new(4.0, 0.0), Invariants::new(7.0, -2.0)] {
            let lat = periods_from_invariants(inv).unwrap();
            let (g2, g3) = invariants_from_lattice(&lat).unwrap();
            assert!((g2 - inv.g2).norm() < 1e-9 * (1.0 + inv.g2.abs()), "{g2} vs {inv:?}");
            assert!((g3 - inv.g3).norm() < 1e-9 * (1.0 + inv.g3.abs()), "{g3} vs {inv:?}");
        }
    }
}
