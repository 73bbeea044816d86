//! ℘ and ℘′ by Laurent series near the origin plus argument duplication.
//!
//! `z` is first reduced to the representative nearest the origin, halved until
//! `|z| ≤ 0.3·(shortest period)`, summed from the Laurent expansion and then
//! doubled back with the tangent-line (duplication) law on the curve
//! `y² = 4x³ − g2·x − g3`.

use super::{periods_from_invariants, invariants_from_lattice, Invariants, KernelError, Lattice, POLE_TOL};
use crate::complex::{real, ComplexValue};

const N_COEFFS: usize = 24;
const HALVING_RADIUS: f64 = 0.3;

/// Prepared evaluator for one lattice.
#[derive(Debug, Clone)]
pub struct Weierstrass {
    g2: ComplexValue,
    g3: ComplexValue,
    lattice: Lattice,
    min_period: f64,
    // coeffs[k] multiplies z^(2k+2), k = 0 ↔ c2
    coeffs: [ComplexValue; N_COEFFS],
}

fn laurent_coefficients(g2: ComplexValue, g3: ComplexValue) -> [ComplexValue; N_COEFFS] {
    // c_k for k = 2..N_COEFFS+1; c_k = 3/((2k+1)(k−3)) Σ_{m=2}^{k−2} c_m c_{k−m}
    let mut ck = vec![real(0.0); N_COEFFS + 2];
    ck[2] = g2 / 20.0;
    ck[3] = g3 / 28.0;
    for k in 4..N_COEFFS + 2 {
        let mut s = real(0.0);
        for m in 2..=k - 2 {
            s += ck[m] * ck[k - m];
        }
        ck[k] = s * (3.0 / ((2 * k + 1) as f64 * (k - 3) as f64));
    }
    let mut out = [real(0.0); N_COEFFS];
    out.copy_from_slice(&ck[2..N_COEFFS + 2]);
    out
}

impl Weierstrass {
    pub fn from_invariants(inv: Invariants) -> Result<Self, KernelError> {
        let lattice = periods_from_invariants(inv)?;
        Ok(Self::assemble(real(inv.g2), real(inv.g3), lattice))
    }

    pub fn from_lattice(lattice: Lattice) -> Result<Self, KernelError> {
        let (g2, g3) = invariants_from_lattice(&lattice)?;
        Ok(Self::assemble(g2, g3, lattice))
    }

    fn assemble(g2: ComplexValue, g3: ComplexValue, lattice: Lattice) -> Self {
        Self {
            g2,
            g3,
            min_period: lattice.min_period(),
            lattice,
            coeffs: laurent_coefficients(g2, g3),
        }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn invariants(&self) -> (ComplexValue, ComplexValue) {
        (self.g2, self.g3)
    }

    /// `(℘(z), ℘′(z))`.
    pub fn eval(&self, z: ComplexValue) -> Result<(ComplexValue, ComplexValue), KernelError> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(KernelError::NonFinite);
        }
        let zr = self.lattice.reduce_nearest(z);
        if zr.norm() < POLE_TOL {
            return Err(KernelError::PoleAtLatticePoint(format!("{z}")));
        }
        let mut w = zr;
        let mut doublings = 0;
        let limit = HALVING_RADIUS * self.min_period;
        while w.norm() > limit {
            w *= 0.5;
            doublings += 1;
        }
        let (mut p, mut dp) = self.laurent(w);
        for _ in 0..doublings {
            let m = (6.0 * p * p - 0.5 * self.g2) / dp;
            let x3 = 0.25 * m * m - 2.0 * p;
            let y3 = dp + m * (x3 - p);
            p = x3;
            dp = -y3;
        }
        if !(p.re.is_finite() && p.im.is_finite() && dp.re.is_finite() && dp.im.is_finite()) {
            return Err(KernelError::PoleAtLatticePoint(format!("{z}")));
        }
        Ok((p, dp))
    }

    pub fn wp(&self, z: ComplexValue) -> Result<ComplexValue, KernelError> {
        self.eval(z).map(|(p, _)| p)
    }

    pub fn wp_prime(&self, z: ComplexValue) -> Result<ComplexValue, KernelError> {
        self.eval(z).map(|(_, d)| d)
    }

    /// ℘ at a real argument for real invariants; the imaginary rounding residue is dropped.
    /// Laurent coefficients `c_2, c_3, …` of `℘(z) = z⁻² + Σ c_k z^(2k−2)`.
    pub fn laurent_coeffs(&self) -> &[ComplexValue] {
        &self.coeffs
    }

    pub fn wp_real(&self, x: f64) -> Result<(f64, f64), KernelError> {
        let (p, d) = self.eval(real(x))?;
        Ok((p.re, d.re))
    }

    fn laurent(&self, z: ComplexValue) -> (ComplexValue, ComplexValue) {
        let w = z * z;
        // Σ c_k w^(k−1) and its derivative, Horner from the tail
        let mut s = real(0.0);
        let mut ds = real(0.0);
        for (idx, ck) in self.coeffs.iter().enumerate().rev() {
            let k = idx + 2;
            s = s * w + *ck;
            ds = ds * w + *ck * (2 * k - 2) as f64;
        }
        let inv = 1.0 / z;
        let inv2 = inv * inv;
        let p = inv2 + s * w;
        let dp = -2.0 * inv2 * inv + ds * z;
        (p, dp)
    }
}

pub fn wp_pair(z: ComplexValue, inv: Invariants) -> Result<(ComplexValue, ComplexValue), KernelError> {
    Weierstrass::from_invariants(inv)?.eval(z)
}

pub fn wp(z: ComplexValue, inv: Invariants) -> Result<ComplexValue, KernelError> {
    Weierstrass::from_invariants(inv)?.wp(z)
}

pub fn wp_prime(z: ComplexValue, inv: Invariants) -> Result<ComplexValue, KernelError> {
    Weierstrass::from_invariants(inv)?.wp_prime(z)
}

/// `℘(z; ω1, ω2) = ℘(z/ω1; 1, τ)/ω1²`.
pub fn wp_rescaled(z: ComplexValue, lat: &Lattice) -> Result<ComplexValue, KernelError> {
    let unit = Lattice::normalized(lat.tau)?;
    let w = Weierstrass::from_lattice(unit)?;
    Ok(w.wp(z / lat.omega1)? / (lat.omega1 * lat.omega1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::c;
    use crate::elliptic::cubic_roots;

    fn reference() -> Invariants {
        Invariants::new(4.0 / 3.0, 1.0)
    }

    #[test]
    fn leading_laurent_term() {
        let p = wp(real(1e-3), reference()).unwrap();
        assert!((p.re - 1e6).abs() < 1.0, "{p}");
    }

    #[test]
    fn half_period_values() {
        let inv = reference();
        let w = Weierstrass::from_invariants(inv).unwrap();
        let half = w.lattice().omega1 * 0.5;
        let (p, d) = w.eval(half).unwrap();
        let roots = cubic_roots(inv);
        // the single real root sits at the real half-period
        assert!((p - roots.e2).norm() < 1e-9, "{p} vs {}", roots.e2);
        assert!(d.norm() < 1e-9);
    }

    #[test]
    fn oddness_of_derivative() {
        let w = Weierstrass::from_invariants(reference()).unwrap();
        let z = c(0.3, 0.2);
        let a = w.wp_prime(z).unwrap();
        let b = w.wp_prime(-z).unwrap();
        assert!((a + b).norm() < 1e-9);
    }

    #[test]
    fn defining_identity_at_real_point() {
        let inv = reference();
        let (p, d) = wp_pair(real(0.7), inv).unwrap();
        let lhs = d * d;
        let rhs = 4.0 * p * p * p - inv.g2 * p - inv.g3;
        assert!((lhs - rhs).norm() < 1e-9 * (1.0 + p.norm().powi(3)));
    }

    #[test]
    fn pole_is_reported() {
        let w = Weierstrass::from_invariants(reference()).unwrap();
        assert!(matches!(w.wp(real(0.0)), Err(KernelError::PoleAtLatticePoint(_))));
        let om = w.lattice().omega2;
        assert!(matches!(w.wp(om), Err(KernelError::PoleAtLatticePoint(_))));
    }

    #[test]
    fn rescaled_matches_direct_evaluation() {
        let inv = reference();
        let w = Weierstrass::from_invariants(inv).unwrap();
        let lat = *w.lattice();
        let z = 0.3 * lat.omega1 + c(0.0, 0.4);
        let direct = w.wp(z).unwrap();
        let via = wp_rescaled(z, &lat).unwrap();
        assert!((direct - via).norm() < 1e-8 * (1.0 + direct.norm()), "{direct} {via}");
    }

    #[test]
    fn rescaled_unit_lattice_is_identity() {
        let tau = c(0.1, 1.3);
        let unit = Lattice::normalized(tau).unwrap();
        let w = Weierstrass::from_lattice(unit).unwrap();
        let z = c(0.21, 0.37);
        assert!((wp_rescaled(z, &unit).unwrap() - w.wp(z).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn rescaled_homogeneity() {
        let lat = Lattice::new(c(1.3, 0.2), c(0.4, 1.9)).unwrap();
        let z = c(0.31, 0.27);
        let a = wp_rescaled(z, &lat).unwrap();
        let b = wp_rescaled(2.0 * z, &lat.scaled(real(2.0))).unwrap();
        assert!((a - 4.0 * b).norm() < 1e-10 * a.norm());
    }
}
