//! Reduced ODEs for `H = F²` and their first integral.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::table3::{Family, Table3Params, Table3Profile};
use super::{FamilyError, ProfileFunction};
use crate::elliptic::{Invariants, Weierstrass};
use crate::fd::{d1, d2};

/// Relative FD step: `h = FD_REL_STEP·max(1, |ξ|)`.
pub const FD_REL_STEP: f64 = 1e-3;

const SINGULAR_TOL: f64 = 1e-12;
const COMPAT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ReductionCase {
    /// `H″ = H′²/(2H) − 2(H + H³)`
    DP1,
    /// `H″ = H′²/(2H) − [(2ξ + 3/2)H′ + 3H/8 + 2H³]/(ξ(1+ξ))`
    DL31,
    /// `H″ = H′²/(2H) − [m·H′/ξ + 2H³]`, `m ∈ {0, 4/3, 2}`
    DK12L23 { m: f64 },
    /// `H″ = H′²/(2H) − [7ξH′/3 + 2H/3 + 2H³]/(1+ξ²)`
    DK12L1K13,
}

impl fmt::Display for ReductionCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReductionCase::DP1 => write!(f, "D,P1"),
            ReductionCase::DL31 => write!(f, "D,L31"),
            ReductionCase::DK12L23 { m } => write!(f, "D+K12,L23 (m={m:.4})"),
            ReductionCase::DK12L1K13 => write!(f, "D+K12/2,L1-K13"),
        }
    }
}

impl ReductionCase {
    pub fn dk12l23(m: f64) -> Result<Self, FamilyError> {
        if [0.0, 4.0 / 3.0, 2.0].iter().any(|v| (m - v).abs() < 1e-12) {
            Ok(ReductionCase::DK12L23 { m })
        } else {
            Err(FamilyError::InvalidParameter(format!("m must be 0, 4/3 or 2, got {m}")))
        }
    }

    pub fn all() -> [ReductionCase; 6] {
        [
            ReductionCase::DP1,
            ReductionCase::DL31,
            ReductionCase::DK12L23 { m: 0.0 },
            ReductionCase::DK12L23 { m: 4.0 / 3.0 },
            ReductionCase::DK12L23 { m: 2.0 },
            ReductionCase::DK12L1K13,
        ]
    }

    fn check_point(&self, xi: f64) -> Result<(), FamilyError> {
        let bad = match self {
            ReductionCase::DL31 => (xi * (1.0 + xi)).abs() < SINGULAR_TOL,
            ReductionCase::DK12L23 { .. } => xi.abs() < SINGULAR_TOL,
            _ => false,
        };
        if bad || !xi.is_finite() {
            Err(FamilyError::SingularPoint(xi))
        } else {
            Ok(())
        }
    }

    /// Right-hand side of `H″ = …`.
    pub fn rhs(&self, xi: f64, h: f64, dh: f64) -> f64 {
        let base = dh * dh / (2.0 * h);
        match *self {
            ReductionCase::DP1 => base - 2.0 * (h + h.powi(3)),
            ReductionCase::DL31 => {
                base - ((2.0 * xi + 1.5) * dh + 0.375 * h + 2.0 * h.powi(3)) / (xi * (1.0 + xi))
            }
            ReductionCase::DK12L23 { m } => base - (m * dh / xi + 2.0 * h.powi(3)),
            ReductionCase::DK12L1K13 => {
                base - (7.0 / 3.0 * xi * dh + 2.0 / 3.0 * h + 2.0 * h.powi(3)) / (1.0 + xi * xi)
            }
        }
    }
}

fn eval_or_nan(h: &ProfileFunction) -> impl Fn(f64) -> f64 + '_ {
    move |x| h.eval(x).unwrap_or(f64::NAN)
}

/// `|H″ − RHS(ξ, H, H′)|` with fourth-order centered differences.
pub fn kg_reduction_residual(case: ReductionCase, h: &ProfileFunction, xi: f64) -> Result<f64, FamilyError> {
    case.check_point(xi)?;
    let step = FD_REL_STEP * xi.abs().max(1.0);
    let hv = h.eval(xi)?;
    if hv.abs() < SINGULAR_TOL {
        return Err(FamilyError::SingularPoint(xi));
    }
    let f = eval_or_nan(h);
    let dh = d1(&f, xi, step);
    let ddh = d2(&f, xi, step);
    let res = (ddh - case.rhs(xi, hv, dh)).abs();
    if res.is_finite() {
        Ok(res)
    } else {
        Err(FamilyError::SingularPoint(xi))
    }
}

/// Normalisation constants of the first integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FirstIntegralConstants {
    pub e0: f64,
    pub c0: f64,
    pub k_prime: f64,
    pub k1: f64,
}

impl FirstIntegralConstants {
    pub fn new(e0: f64, c0: f64, k_prime: f64, k1: f64) -> Self {
        Self { e0, c0, k_prime, k1 }
    }
}

/// `(G(ξ), g(ξ), g′(ξ))` for the case, after checking its compatibility conditions.
pub fn first_integral_weights(
    case: ReductionCase,
    k: &FirstIntegralConstants,
    xi: f64,
) -> Result<(f64, f64, f64), FamilyError> {
    let FirstIntegralConstants { e0, c0, k1, .. } = *k;
    if c0.abs() < COMPAT_TOL {
        return Err(FamilyError::IncompatibleConstants("c0 must be nonzero".into()));
    }
    let need_e0_zero = || {
        if e0.abs() > COMPAT_TOL {
            Err(FamilyError::IncompatibleConstants(format!("{case} needs e0 = 0, got {e0}")))
        } else {
            Ok(())
        }
    };
    let positive = |what: &str, v: f64| {
        if v > COMPAT_TOL {
            Ok(v)
        } else {
            Err(FamilyError::IncompatibleConstants(format!("{case}: {what} = {v} must be positive")))
        }
    };
    Ok(match case {
        ReductionCase::DP1 => {
            let g = positive("4e0/c0", 4.0 * e0 / c0)?.sqrt();
            (-0.75 * c0, g, 0.0)
        }
        ReductionCase::DL31 => {
            let a = positive("−64e0/c0", -64.0 * e0 / c0)?;
            let xi_pos = positive("ξ", xi)?;
            let g = (a * xi_pos).sqrt();
            (-0.75 * c0 * xi * (xi + 1.0), g, 0.5 * g / xi)
        }
        ReductionCase::DK12L23 { m } => {
            if m.abs() < 1e-12 {
                need_e0_zero()?;
                (-0.75 * c0, positive("k1", k1)?.sqrt(), 0.0)
            } else if (m - 4.0 / 3.0).abs() < 1e-12 {
                need_e0_zero()?;
                let s = positive("k1", k1)?.sqrt();
                let g = s * xi.abs().powf(2.0 / 3.0);
                (-0.75 * c0, g, 2.0 / 3.0 * g / xi)
            } else {
                let s = positive("−16e0/c0", -16.0 * e0 / c0)?.sqrt();
                (-0.75 * c0, s * xi.abs(), s * xi.signum())
            }
        }
        ReductionCase::DK12L1K13 => {
            need_e0_zero()?;
            if k1.abs() < COMPAT_TOL {
                return Err(FamilyError::IncompatibleConstants("k1 must be nonzero".into()));
            }
            let w = 1.0 + xi * xi;
            let g = k1 * w.powf(1.0 / 3.0);
            (-0.75 * c0 * w, g, 2.0 / 3.0 * k1 * xi * w.powf(-2.0 / 3.0))
        }
    })
}

/// `|¼Gg²((gH)′)²/(gH) − (c0/4)(gH)³ − 3e0·gH − K′|` at `ξ`.
pub fn first_integral_residual(
    case: ReductionCase,
    h: &ProfileFunction,
    constants: FirstIntegralConstants,
    xi: f64,
) -> Result<f64, FamilyError> {
    case.check_point(xi)?;
    let (big_g, g, dg) = first_integral_weights(case, &constants, xi)?;
    let hv = h.eval(xi)?;
    let gh = g * hv;
    if gh.abs() < SINGULAR_TOL {
        return Err(FamilyError::SingularPoint(xi));
    }
    let step = FD_REL_STEP * xi.abs().max(1.0);
    let dh = d1(eval_or_nan(h), xi, step);
    let dgh = dg * hv + g * dh;
    let lhs = 0.25 * big_g * g * g * dgh * dgh / gh - 0.25 * constants.c0 * gh.powi(3) - 3.0 * constants.e0 * gh;
    let res = (lhs - constants.k_prime).abs();
    if res.is_finite() {
        Ok(res)
    } else {
        Err(FamilyError::SingularPoint(xi))
    }
}

/// Residual of the autonomous form `U′² − c0U⁴ − 12e0U² − 4K′U` for
/// `U = K′/(℘(ζ) − e0)` with `g2 = 12e0²`, `g3 = −8e0³ − c0K′²`.
pub fn autonomous_residual(e0: f64, c0: f64, k_prime: f64, zeta: f64) -> Result<f64, FamilyError> {
    let wp = Weierstrass::from_invariants(Invariants::new(12.0 * e0 * e0, -8.0 * e0.powi(3) - c0 * k_prime * k_prime))?;
    let (p, dp) = wp.wp_real(zeta)?;
    let den = p - e0;
    if den.abs() < SINGULAR_TOL {
        return Err(FamilyError::SingularPoint(zeta));
    }
    let u = k_prime / den;
    let du = -k_prime * dp / (den * den);
    let terms = [du * du, c0 * u.powi(4), 12.0 * e0 * u * u, 4.0 * k_prime * u];
    let scale = terms.iter().map(|t| t.abs()).fold(1.0, f64::max);
    Ok((terms[0] - terms[1] - terms[2] - terms[3]).abs() / scale)
}

/// ℘-form solution `H(ξ)` of a reduced ODE together with its first-integral constants.
#[derive(Debug, Clone)]
pub struct ReducedSolution {
    pub case: ReductionCase,
    pub h: ProfileFunction,
    pub constants: FirstIntegralConstants,
}

/// The ℘-form solutions, parametrised by `C` and (where present) `k0`.
pub fn reduced_solution(case: ReductionCase, c: f64, k0: f64) -> Result<ReducedSolution, FamilyError> {
    let squared = |params: Table3Params| -> Result<ProfileFunction, FamilyError> {
        let p = Table3Profile::new(params)?;
        let label = format!("H = a² for {case}");
        let q = p.clone();
        Ok(ProfileFunction::with_derivative(
            label,
            move |x| p.eval(x).map(|a| a * a),
            move |x| q.eval_pair(x).map(|(a, da)| 2.0 * a * da),
        ))
    };
    let k0sq = k0 * k0;
    Ok(match case {
        ReductionCase::DP1 => ReducedSolution {
            case,
            h: squared(Table3Params::new(Family::Periodic1, c))?,
            constants: FirstIntegralConstants::new(-1.0 / 3.0, -4.0 / 3.0, c, 1.0),
        },
        ReductionCase::DL31 => {
            if k0 == 0.0 {
                return Err(FamilyError::InvalidParameter("k0 must be nonzero".into()));
            }
            let e0 = 1.0 / (48.0 * k0sq);
            let inv = Invariants::new(1.0 / (192.0 * k0sq * k0sq), -1.0 / (13824.0 * k0sq.powi(3)) + 4.0 * c * c / (3.0 * k0sq));
            let wp = Weierstrass::from_invariants(inv)?;
            let h = ProfileFunction::new(format!("H for {case}"), move |xi: f64| {
                if !(xi > 0.0) {
                    return Err(FamilyError::DomainError(format!("ξ = {xi} must be positive")));
                }
                let y = (xi + 1.0).sqrt();
                // −2k0·arcoth(y), real branch
                let zeta = -k0 * ((y + 1.0) / (y - 1.0)).ln();
                let (p, _) = wp.wp_real(zeta)?;
                Ok(c / xi.sqrt() / (p - e0))
            });
            ReducedSolution { case, h, constants: FirstIntegralConstants::new(e0, -4.0 / (3.0 * k0sq), c, 1.0) }
        }
        ReductionCase::DK12L23 { m } if m.abs() < 1e-12 => ReducedSolution {
            case,
            h: squared(Table3Params::new(Family::Periodic2a, c))?,
            constants: FirstIntegralConstants::new(0.0, -4.0 / 3.0, c, 1.0),
        },
        ReductionCase::DK12L23 { m } if (m - 4.0 / 3.0).abs() < 1e-12 => ReducedSolution {
            case,
            h: squared(Table3Params::new(Family::Bump2b, c).with_k0(k0))?,
            constants: FirstIntegralConstants::new(0.0, -4.0 / 3.0, c / k0, 1.0 / k0sq),
        },
        ReductionCase::DK12L23 { m } => {
            ReductionCase::dk12l23(m)?;
            let e0 = 1.0 / (12.0 * k0sq);
            ReducedSolution {
                case,
                h: squared(Table3Params::new(Family::Bump2c, c).with_k0(k0).with_e0(e0))?,
                constants: FirstIntegralConstants::new(e0, -4.0 / (3.0 * k0sq), c, 1.0),
            }
        }
        ReductionCase::DK12L1K13 => ReducedSolution {
            case,
            h: squared(Table3Params::new(Family::Kink3, c).with_k0(k0))?,
            constants: FirstIntegralConstants::new(0.0, -4.0 / 3.0, c / k0, 1.0),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_h_in_dp1() {
        let c0 = 0.7;
        let h = ProfileFunction::constant(c0);
        let r = kg_reduction_residual(ReductionCase::DP1, &h, 1.3).unwrap();
        assert!((r - 2.0 * (c0 + c0.powi(3))).abs() < 1e-12);
    }

    #[test]
    fn singular_points() {
        let h = ProfileFunction::constant(1.0);
        assert_eq!(kg_reduction_residual(ReductionCase::DL31, &h, -1.0), Err(FamilyError::SingularPoint(-1.0)));
        assert_eq!(
            kg_reduction_residual(ReductionCase::DK12L23 { m: 2.0 }, &h, 0.0),
            Err(FamilyError::SingularPoint(0.0))
        );
        let zero = ProfileFunction::constant(0.0);
        assert!(matches!(kg_reduction_residual(ReductionCase::DP1, &zero, 1.0), Err(FamilyError::SingularPoint(_))));
    }

    #[test]
    fn all_cases_solved() {
        for case in ReductionCase::all() {
            let sol = reduced_solution(case, 0.9, 0.7).unwrap();
            for k in 0..12 {
                let xi = 1.2 + 0.2 * k as f64;
                let r = kg_reduction_residual(case, &sol.h, xi).unwrap();
                assert!(r < 1e-6, "{case} ξ={xi}: {r}");
                let fi = first_integral_residual(case, &sol.h, sol.constants, xi).unwrap();
                assert!(fi < 1e-6, "{case} first integral ξ={xi}: {fi}");
            }
        }
    }

    #[test]
    fn incompatible_constants() {
        let h = ProfileFunction::constant(1.0);
        let bad = FirstIntegralConstants::new(0.5, -4.0 / 3.0, 1.0, 1.0);
        assert!(matches!(
            first_integral_residual(ReductionCase::DK12L1K13, &h, bad, 0.5),
            Err(FamilyError::IncompatibleConstants(_))
        ));
        assert!(matches!(
            first_integral_residual(ReductionCase::DP1, &h, bad, 0.5),
            Err(FamilyError::IncompatibleConstants(_))
        ));
        assert!(ReductionCase::dk12l23(1.0).is_err());
    }

    #[test]
    fn autonomous_identity() {
        let c = 19f64.sqrt() / 6.0;
        for k in 1..20 {
            let r = autonomous_residual(-1.0 / 3.0, -4.0 / 3.0, c, 0.13 * k as f64).unwrap();
            assert!(r < 1e-10, "{r}");
        }
    }
}
