use super::Invariants;
use crate::complex::{c, real, ComplexValue};

/// Roots of `4t³ − g2·t − g3`, ordered per the module conventions.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CubicRoots {
    pub e1: ComplexValue,
    pub e2: ComplexValue,
    pub e3: ComplexValue,
}

impl CubicRoots {
    pub fn as_array(&self) -> [ComplexValue; 3] {
        [self.e1, self.e2, self.e3]
    }

    /// All three roots real (within rounding).
    pub fn all_real(&self) -> bool {
        self.as_array().iter().all(|e| e.im == 0.0)
    }

    pub fn get(&self, alpha: usize) -> Option<ComplexValue> {
        match alpha {
            1 => Some(self.e1),
            2 => Some(self.e2),
            3 => Some(self.e3),
            _ => None,
        }
    }
}

fn polish(t: ComplexValue, g2: f64, g3: f64) -> ComplexValue {
    let mut t = t;
    for _ in 0..3 {
        let f = 4.0 * t * t * t - g2 * t - g3;
        let df = 12.0 * t * t - g2;
        if df.norm() == 0.0 {
            break;
        }
        let step = f / df;
        if !(step.re.is_finite() && step.im.is_finite()) {
            break;
        }
        t -= step;
        if step.norm() <= 1e-17 * t.norm().max(1.0) {
            break;
        }
    }
    t
}

fn polish_real(t: f64, g2: f64, g3: f64) -> f64 {
    let mut t = t;
    for _ in 0..3 {
        let f = 4.0 * t * t * t - g2 * t - g3;
        let df = 12.0 * t * t - g2;
        if df == 0.0 {
            break;
        }
        let step = f / df;
        if !step.is_finite() {
            break;
        }
        let next = t - step;
        let fnext = 4.0 * next * next * next - g2 * next - g3;
        if fnext.abs() >= f.abs() {
            break;
        }
        t = next;
    }
    t
}

pub fn cubic_roots(inv: Invariants) -> CubicRoots {
    let Invariants { g2, g3 } = inv;
    if g2 == 0.0 && g3 == 0.0 {
        let z = real(0.0);
        return CubicRoots { e1: z, e2: z, e3: z };
    }
    // t³ + p t + q with p = −g2/4, q = −g3/4
    let p = -g2 / 4.0;
    let q = -g3 / 4.0;
    let disc = inv.discriminant();
    if disc >= 0.0 {
        // three real roots (p < 0 here)
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = ((3.0 * q / (2.0 * p)) * (-3.0 / p).sqrt()).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        let mut roots = [0.0_f64; 3];
        for (k, r) in roots.iter_mut().enumerate() {
            let t = m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos();
            *r = polish_real(t, g2, g3);
        }
        roots.sort_by(|a, b| b.partial_cmp(a).unwrap());
        // enforce the zero sum on the middle root
        let mid = -(roots[0] + roots[2]);
        if (mid - roots[1]).abs() <= 1e-12 * roots[0].abs().max(1.0) {
            roots[1] = mid;
        }
        CubicRoots { e1: real(roots[0]), e2: real(roots[1]), e3: real(roots[2]) }
    } else {
        let s = (q * q / 4.0 + p * p * p / 27.0).sqrt();
        let r = (-q / 2.0 + s).cbrt() + (-q / 2.0 - s).cbrt();
        let r = polish_real(r, g2, g3);
        let im = (0.75 * r * r + p).max(0.0).sqrt();
        let e1 = polish(c(-r / 2.0, im), g2, g3);
        let e1 = c(-r / 2.0, e1.im.abs());
        CubicRoots { e1, e2: real(r), e3: e1.conj() }
    }
}
