//! Halphen's functions `h_α(u) = √(℘(u) − e_α)` and the Jacobi copolar trio.
//!
//! `h_α` is two-valued. The principal root is used, except for the index whose
//! root is `℘(ω1/2)`: that one changes sign when the `ω1`-coordinate of `u`
//! passes `1/2`, which makes every `h_α` continuous (and analytic) along the
//! real segment `(0, ω1)`.

use super::{cubic_roots, CubicRoots, Invariants, KernelError, Weierstrass};
use crate::complex::ComplexValue;

fn flipping_index(roots: &CubicRoots) -> usize {
    if roots.all_real() {
        1
    } else {
        2
    }
}

pub(crate) fn halphen_with(
    w: &Weierstrass,
    roots: &CubicRoots,
    alpha: usize,
    u: ComplexValue,
) -> Result<ComplexValue, KernelError> {
    let e = roots.get(alpha).ok_or(KernelError::InvalidIndex(alpha))?;
    let p = w.wp(u)?;
    let mut h = (p - e).sqrt();
    if alpha == flipping_index(roots) {
        let (a, _) = w.lattice().basis_coords(u);
        let frac = a - a.floor();
        if frac > 0.5 {
            h = -h;
        }
    }
    Ok(h)
}

pub fn halphen_h(alpha: usize, u: ComplexValue, inv: Invariants) -> Result<ComplexValue, KernelError> {
    if !(1..=3).contains(&alpha) {
        return Err(KernelError::InvalidIndex(alpha));
    }
    let w = Weierstrass::from_invariants(inv)?;
    halphen_with(&w, &cubic_roots(inv), alpha, u)
}

/// `cs, ds, ns` at `z = u·√(e1 − e3)` together with `k² = (e2 − e3)/(e1 − e3)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiTrio {
    pub z: ComplexValue,
    pub cs: ComplexValue,
    pub ds: ComplexValue,
    pub ns: ComplexValue,
    pub k2: ComplexValue,
}

pub fn jacobi_from_wp(u: ComplexValue, inv: Invariants) -> Result<JacobiTrio, KernelError> {
    let w = Weierstrass::from_invariants(inv)?;
    let roots = cubic_roots(inv);
    let spread = roots.e1 - roots.e3;
    if spread.norm() == 0.0 {
        return Err(KernelError::DegenerateLattice(inv.discriminant()));
    }
    let scale = spread.sqrt();
    let h1 = halphen_with(&w, &roots, 1, u)?;
    let h2 = halphen_with(&w, &roots, 2, u)?;
    let h3 = halphen_with(&w, &roots, 3, u)?;
    Ok(JacobiTrio {
        z: u * scale,
        cs: h1 / scale,
        ds: h2 / scale,
        ns: h3 / scale,
        k2: (roots.e2 - roots.e3) / spread,
    })
}
