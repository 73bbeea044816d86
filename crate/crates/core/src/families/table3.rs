//! Elliptic profiles `a(r) = σ·√(K·m(r) / (℘(ζ(r)) − s))` of the bounded
//! rank-3 entropic families.
//!
//! `K·m/(℘ − s)` has a double zero wherever `ζ` crosses a real pole of ℘. The
//! square root is continued analytically through those zeros, so `a` changes
//! sign there and stays real-analytic (`a ~ √K·r` near `r = 0` for row 1).
//! The single exception is `ζ = 0` in row 2b, where `m` has a matching pole
//! and `a` does not vanish.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{FamilyError, ProfileFunction};
use crate::complex::real;
use crate::elliptic::{Invariants, Weierstrass};
use crate::modular::hyp2f1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Periodic1,
    Periodic2a,
    Bump2b,
    Bump2c,
    Kink3,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::Periodic1, Family::Periodic2a, Family::Bump2b, Family::Bump2c, Family::Kink3];

    pub fn tag(self) -> &'static str {
        match self {
            Family::Periodic1 => "1",
            Family::Periodic2a => "2a",
            Family::Bump2b => "2b",
            Family::Bump2c => "2c",
            Family::Kink3 => "3",
        }
    }

    pub fn is_periodic(self) -> bool {
        matches!(self, Family::Periodic1 | Family::Periodic2a)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Family {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.tag().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| FamilyError::InvalidParameter(format!("unknown family '{s}' (expected 1, 2a, 2b, 2c or 3)")))
    }
}

/// How the constant `C` of the periodic row-1 profile enters.
///
/// `FirstIntegral`: `a = √C·(℘ + 1/3)^{-1/2}`, `g3 = 8/27 + 4C²/3`.
/// `Tabulated`: `a = C·(℘ + 1/3)^{-1/2}`, `g3 = 8/27 + 4C⁴/3`.
/// The two describe the same family with `C_tab = √C_fi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum G3Convention {
    #[default]
    FirstIntegral,
    Tabulated,
}

impl G3Convention {
    pub fn g3(self, c: f64) -> f64 {
        match self {
            G3Convention::FirstIntegral => 8.0 / 27.0 + 4.0 * c * c / 3.0,
            G3Convention::Tabulated => 8.0 / 27.0 + 4.0 * c.powi(4) / 3.0,
        }
    }
}

/// The constant for which the row-1 invariants become `(4/3, 1)`.
pub fn resolved_c() -> f64 {
    19f64.sqrt() / 6.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Table3Params {
    pub family: Family,
    pub c: f64,
    pub k0: f64,
    pub e0: f64,
    pub convention: G3Convention,
}

impl Table3Params {
    pub fn new(family: Family, c: f64) -> Self {
        Self { family, c, k0: 1.0, e0: 1.0 / 12.0, convention: G3Convention::FirstIntegral }
    }

    pub fn with_k0(mut self, k0: f64) -> Self {
        self.k0 = k0;
        self
    }

    pub fn with_e0(mut self, e0: f64) -> Self {
        self.e0 = e0;
        self
    }

    pub fn with_convention(mut self, convention: G3Convention) -> Self {
        self.convention = convention;
        self
    }

    /// `(g2, g3)` of the ℘ entering the profile.
    pub fn invariants(&self) -> Invariants {
        let (c, k0, e0) = (self.c, self.k0, self.e0);
        match self.family {
            Family::Periodic1 => Invariants::new(4.0 / 3.0, self.convention.g3(c)),
            Family::Periodic2a => Invariants::new(0.0, 4.0 * c * c / 3.0),
            Family::Bump2b | Family::Kink3 => Invariants::new(0.0, 4.0 * c * c / (3.0 * k0 * k0)),
            Family::Bump2c => Invariants::new(12.0 * e0 * e0, -8.0 * e0.powi(3) + 16.0 * c * c * e0),
        }
    }

    fn validate(&self) -> Result<(), FamilyError> {
        let finite = [self.c, self.k0, self.e0].iter().all(|v| v.is_finite());
        if !finite {
            return Err(FamilyError::InvalidParameter(format!("non-finite parameters {self:?}")));
        }
        if self.family != Family::Periodic1 && !(self.c > 0.0) {
            return Err(FamilyError::InvalidParameter(format!("family {} needs C > 0, got {}", self.family, self.c)));
        }
        if matches!(self.family, Family::Bump2b | Family::Bump2c | Family::Kink3) && self.k0 == 0.0 {
            return Err(FamilyError::InvalidParameter("k0 must be nonzero".into()));
        }
        Ok(())
    }
}

// Q(z) = z²(℘(z) − s) and friends are summed from the Laurent series inside this
// fraction of the shortest period.
const SERIES_RADIUS: f64 = 0.25;

/// Prepared profile for one parameter set.
#[derive(Debug, Clone)]
pub struct Table3Profile {
    params: Table3Params,
    wp: Weierstrass,
    // a = scale·√m·|℘ − shift|^{-1/2}, radicand sign must match `radicand_sign`
    scale: f64,
    radicand_sign: f64,
    shift: f64,
    period: f64,
    series_radius: f64,
    coeffs: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileBounds {
    pub min: f64,
    pub max: f64,
    /// Upper bound on `|a′|`.
    pub lipschitz: f64,
}

struct Chart {
    zeta: f64,
    dzeta: f64,
    sqrt_m: f64,
    dsqrt_m: f64,
}

impl Table3Profile {
    pub fn new(params: Table3Params) -> Result<Self, FamilyError> {
        params.validate()?;
        let wp = Weierstrass::from_invariants(params.invariants())?;
        let c = params.c;
        let (k2, sign) = match (params.family, params.convention) {
            (Family::Periodic1, G3Convention::Tabulated) => (c * c, c.signum()),
            (Family::Kink3, _) => (c / params.k0, 1.0),
            _ => (c, 1.0),
        };
        let shift = match params.family {
            Family::Periodic1 => -1.0 / 3.0,
            Family::Bump2c => params.e0,
            _ => 0.0,
        };
        let period = wp.lattice().omega1.re;
        let series_radius = SERIES_RADIUS * wp.lattice().min_period();
        let coeffs = wp.laurent_coeffs().iter().map(|z| z.re).collect();
        Ok(Self {
            params,
            scale: sign * k2.abs().sqrt(),
            radicand_sign: if k2 < 0.0 { -1.0 } else { 1.0 },
            shift,
            period,
            series_radius,
            coeffs,
            wp,
        })
    }

    pub fn params(&self) -> &Table3Params {
        &self.params
    }

    pub fn weierstrass(&self) -> &Weierstrass {
        &self.wp
    }

    /// Real period of the underlying ℘.
    pub fn real_period(&self) -> f64 {
        self.period
    }

    /// Change of variable `ζ(r)` and its derivative.
    pub fn zeta(&self, r: f64) -> Result<(f64, f64), FamilyError> {
        let ch = self.chart(r)?;
        Ok((ch.zeta, ch.dzeta))
    }

    /// `℘(ζ(r)) − s`, the quantity that must keep one sign on the real line.
    pub fn radicand(&self, r: f64) -> Result<f64, FamilyError> {
        let ch = self.chart(r)?;
        Ok(self.wp.wp_real(ch.zeta)?.0 - self.shift)
    }

    fn chart(&self, r: f64) -> Result<Chart, FamilyError> {
        if !r.is_finite() {
            return Err(FamilyError::DomainError(format!("r = {r}")));
        }
        let k0 = self.params.k0;
        Ok(match self.params.family {
            Family::Periodic1 | Family::Periodic2a => Chart { zeta: r, dzeta: 1.0, sqrt_m: 1.0, dsqrt_m: 0.0 },
            Family::Bump2b => {
                let ar = r.abs();
                Chart {
                    zeta: 3.0 * k0 * r.cbrt(),
                    dzeta: k0 * ar.powf(-2.0 / 3.0),
                    sqrt_m: ar.powf(-1.0 / 3.0),
                    dsqrt_m: -r.signum() * ar.powf(-4.0 / 3.0) / 3.0,
                }
            }
            Family::Bump2c => {
                if r <= 0.0 {
                    return Err(FamilyError::DomainError(format!("family 2c needs r > 0, got {r}")));
                }
                Chart { zeta: k0 * r.ln(), dzeta: k0 / r, sqrt_m: r.powf(-0.5), dsqrt_m: -0.5 * r.powf(-1.5) }
            }
            Family::Kink3 => {
                let w = 1.0 + r * r;
                let f = hyp2f1(0.5, 5.0 / 6.0, 1.5, real(-r * r))?;
                Chart {
                    zeta: r * f.re,
                    dzeta: w.powf(-5.0 / 6.0),
                    sqrt_m: w.powf(-1.0 / 6.0),
                    dsqrt_m: -r * w.powf(-7.0 / 6.0) / 3.0,
                }
            }
        })
    }

    /// `(Q, Q′, Σ_{k≥2} 2k·c_k·z^{2k−3})` with `Q(z) = z²(℘(z) − s)`.
    fn series(&self, z: f64) -> (f64, f64, f64) {
        let w = z * z;
        let mut s = 0.0;
        let mut ds = 0.0;
        for (idx, ck) in self.coeffs.iter().enumerate().rev() {
            let k = (idx + 2) as f64;
            s = s * w + ck;
            ds = ds * w + 2.0 * k * ck;
        }
        // s = Σ c_k w^{k−2}, ds = Σ 2k c_k w^{k−2}
        let q = 1.0 - self.shift * w + s * w * w;
        let dq = -2.0 * self.shift * z + ds * w * z;
        (q, dq, ds * z)
    }

    /// Sign of `a` just right of the pole `ζ = n·ω1`.
    fn cell_sign(&self, n: f64) -> f64 {
        let flips = if self.params.family == Family::Bump2b {
            // no sign change at ζ = 0; odd count of poles passed on either side
            if n >= 0.0 {
                n
            } else {
                -n - 1.0
            }
        } else {
            n
        };
        if flips.rem_euclid(2.0) == 0.0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Profile value and derivative.
    pub fn eval_pair(&self, r: f64) -> Result<(f64, f64), FamilyError> {
        if self.params.family == Family::Bump2b {
            let zeta = 3.0 * self.params.k0 * r.cbrt();
            if zeta.abs() < self.series_radius {
                // √m·|ζ| = 3|k0| exactly; ζ²·ζ′ = 9k0³
                let k0 = self.params.k0;
                let (q, _, tail) = self.series(zeta);
                let q_rs = q.sqrt();
                let a = self.scale * 3.0 * k0.abs() / q_rs;
                let da = -0.5 * self.scale * 3.0 * k0.abs() / (q * q_rs) * tail * 9.0 * k0.powi(3);
                return Ok((a, da));
            }
        }
        let ch = self.chart(r)?;
        let n = (ch.zeta / self.period).round();
        let zl = ch.zeta - n * self.period;
        let (d, dd) = if zl.abs() < self.series_radius {
            let (q, dq, _) = self.series(zl);
            if q <= 0.0 || self.radicand_sign < 0.0 {
                return Err(FamilyError::NegativeRadicand { r, value: q });
            }
            let q_rs = q.sqrt();
            let sign = self.cell_sign(n);
            (sign * zl / q_rs, sign * (1.0 / q_rs - 0.5 * zl * dq / (q * q_rs)))
        } else {
            let (p, dp) = self.wp.wp_real(ch.zeta)?;
            let v = p - self.shift;
            if !(v * self.radicand_sign > 0.0) {
                return Err(FamilyError::NegativeRadicand { r, value: v });
            }
            let av = v.abs();
            // ζ lies in the cell (j·ω1, (j+1)·ω1)
            let j = (ch.zeta / self.period).floor();
            let sign = self.cell_sign(j);
            (sign * av.powf(-0.5), -0.5 * sign * v.signum() * av.powf(-1.5) * dp)
        };
        let a = self.scale * ch.sqrt_m * d;
        let da = self.scale * (ch.dsqrt_m * d + ch.sqrt_m * dd * ch.dzeta);
        Ok((a, da))
    }

    pub fn eval(&self, r: f64) -> Result<f64, FamilyError> {
        Ok(self.eval_pair(r)?.0)
    }

    pub fn derivative(&self, r: f64) -> Result<f64, FamilyError> {
        Ok(self.eval_pair(r)?.1)
    }

    /// Range and slope bound over `[0, 2ω1]`, for the periodic rows.
    pub fn periodic_bounds(&self, samples: usize) -> Option<ProfileBounds> {
        if !self.params.family.is_periodic() {
            return None;
        }
        let n = samples.max(16);
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut lip: f64 = 0.0;
        for k in 0..=n {
            let r = 2.0 * self.period * k as f64 / n as f64;
            let (a, da) = self.eval_pair(r).ok()?;
            lo = lo.min(a);
            hi = hi.max(a);
            lip = lip.max(da.abs());
        }
        // sampling can miss the extremes by O(h²)
        let pad = 1e-3 * (hi - lo).abs().max(1e-12);
        Some(ProfileBounds { min: lo - pad, max: hi + pad, lipschitz: lip * 1.02 + 1e-12 })
    }

    pub fn to_profile_function(&self) -> ProfileFunction {
        let p = Arc::new(self.clone());
        let q = p.clone();
        ProfileFunction::with_derivative(
            format!("table3 row {} C={}", self.params.family, self.params.c),
            move |r| p.eval(r),
            move |r| q.derivative(r),
        )
    }
}

/// One-shot evaluation with the resolved (first-integral) convention.
pub fn table3_profile(family: Family, c: f64, k0: f64, e0: f64, r: f64) -> Result<f64, FamilyError> {
    let params = Table3Params { family, c, k0, e0, convention: G3Convention::FirstIntegral };
    Table3Profile::new(params)?.eval(r)
}
