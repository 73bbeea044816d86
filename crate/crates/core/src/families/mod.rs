//! Closed-form solution families of the isentropic system.

mod profile;
mod reduction;
mod table3;

pub use profile::ProfileFunction;
pub use reduction::{
    autonomous_residual, first_integral_residual, first_integral_weights, kg_reduction_residual, reduced_solution,
    FirstIntegralConstants, ReducedSolution, ReductionCase, FD_REL_STEP,
};
pub use table3::{resolved_c, table3_profile, Family, G3Convention, ProfileBounds, Table3Params, Table3Profile};

use serde::Serialize;

use crate::elliptic::KernelError;
use crate::flow::{add, dot, norm, scale, EntropicTriad, FlowError, FlowState, MediumParams, Vec3, UNIT_TOL};
use crate::modular::HyperError;
use crate::solver::{
    catastrophe_time, continue_branch, solve_scalar_bracketed, ContinuationConfig, Fold, SolveConfig, SolverError,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FamilyError {
    #[error("negative radicand {value:e} at r = {r}")]
    NegativeRadicand { r: f64, value: f64 },
    #[error("outside the family domain: {0}")]
    DomainError(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("singular point ξ = {0}")]
    SingularPoint(f64),
    #[error("incompatible constants: {0}")]
    IncompatibleConstants(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Hyper(#[from] HyperError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Flow(#[from] FlowError),
}

fn check_unit(e: Vec3) -> Result<(), FamilyError> {
    if (norm(e) - 1.0).abs() > UNIT_TOL {
        return Err(FlowError::NotUnitVector(e).into());
    }
    Ok(())
}

/// Follow `r = Φ(r, t)` from the explicit value at `t = 0`.
fn track<F>(phi: F, r0: f64, t: f64, cont: &ContinuationConfig) -> Result<f64, FamilyError>
where
    F: Fn(f64, f64) -> (f64, f64),
{
    if t == 0.0 {
        return Ok(r0);
    }
    Ok(continue_branch(phi, 0.0, r0, t, cont)?.r)
}

fn profile_phi<'a>(
    profile: &'a ProfileFunction,
    speed: f64,
    shift: f64,
    base: f64,
) -> impl Fn(f64, f64) -> (f64, f64) + 'a {
    move |r, t| match (profile.eval(r), profile.derivative(r)) {
        (Ok(a), Ok(da)) => ((speed * a + shift) * t + base, speed * da * t),
        _ => (f64::NAN, f64::NAN),
    }
}

/// Rank-1 entropic wave `a = f(r)`, `u = κe·f(r) + C` with
/// `r = [(1+κ)f(r) + e·C]t − e·x`.
pub fn rank1_entropic(
    profile: &ProfileFunction,
    e: Vec3,
    cvec: Vec3,
    med: MediumParams,
    t: f64,
    x: Vec3,
) -> Result<FlowState, FamilyError> {
    rank1_entropic_with(profile, e, cvec, med, t, x, &ContinuationConfig::default())
}

pub fn rank1_entropic_with(
    profile: &ProfileFunction,
    e: Vec3,
    cvec: Vec3,
    med: MediumParams,
    t: f64,
    x: Vec3,
    cont: &ContinuationConfig,
) -> Result<FlowState, FamilyError> {
    check_unit(e)?;
    let r0 = -dot(e, x);
    let phi = profile_phi(profile, 1.0 + med.kappa, dot(e, cvec), r0);
    let r = track(phi, r0, t, cont)?;
    let a = profile.eval(r)?;
    Ok(FlowState { a, u: add(scale(med.kappa * a, e), cvec) })
}

/// Rank-1 acoustic wave: `a = a0`, `(u¹, u²)` free along `r = Ct − det(x, e, m)`
/// and `u³` fixed by `det(u, e, m) = C`.
#[allow(clippy::too_many_arguments)]
pub fn rank1_acoustic(
    u1: &ProfileFunction,
    u2: &ProfileFunction,
    e: Vec3,
    m: Vec3,
    c: f64,
    a0: f64,
    t: f64,
    x: Vec3,
) -> Result<FlowState, FamilyError> {
    check_unit(e)?;
    let d = e[0] * m[1] - e[1] * m[0];
    if d.abs() < 1e-14 {
        return Err(FlowError::DegenerateProjection.into());
    }
    let em = crate::flow::cross(e, m);
    let r = c * t - dot(x, em);
    let (v1, v2) = (u1.eval(r)?, u2.eval(r)?);
    let v3 = (c - em[0] * v1 - em[1] * v2) / d;
    Ok(FlowState { a: a0, u: [v1, v2, v3] })
}

/// Configuration of a superposition of three entropic waves with ℘-type profiles.
#[derive(Debug, Clone)]
pub struct Rank3Config {
    pub family: Family,
    pub c: [f64; 3],
    pub k0: f64,
    pub e0: f64,
    pub convention: G3Convention,
    pub triad: EntropicTriad,
    pub med: MediumParams,
    profiles: [Option<Component>; 3],
    pub continuation: ContinuationConfig,
}

#[derive(Debug, Clone)]
struct Component {
    profile: Table3Profile,
    bounds: Option<ProfileBounds>,
}

impl Rank3Config {
    /// A component with `Cᵢ = 0` is switched off (its profile is identically 0).
    pub fn new(
        family: Family,
        c: [f64; 3],
        k0: f64,
        e0: f64,
        convention: G3Convention,
        triad: EntropicTriad,
        med: MediumParams,
    ) -> Result<Self, FamilyError> {
        let target = -1.0 / med.kappa;
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let d = dot(triad.e[i], triad.e[j]);
            if (d - target).abs() > 1e-10 {
                return Err(FamilyError::InvalidParameter(format!(
                    "triad violates the angle condition: e{}·e{} = {d}, expected {target}",
                    i + 1,
                    j + 1
                )));
            }
        }
        for e in triad.e {
            check_unit(e)?;
        }
        let mut profiles: [Option<Component>; 3] = [None, None, None];
        let mut scale_len: f64 = 0.0;
        for (slot, &ci) in profiles.iter_mut().zip(c.iter()) {
            if ci == 0.0 {
                continue;
            }
            let profile = Table3Profile::new(Table3Params { family, c: ci, k0, e0, convention })?;
            let bounds = profile.periodic_bounds(4000);
            scale_len = scale_len.max(profile.real_period());
            *slot = Some(Component { profile, bounds });
        }
        let continuation = ContinuationConfig::with_scale(if scale_len > 0.0 { scale_len } else { 1.0 });
        Ok(Self { family, c, k0, e0, convention, triad, med, profiles, continuation })
    }

    /// Row 1 with `Cᵢ = √19/6` and the resolved convention.
    pub fn resolved_row1(med: MediumParams) -> Result<Self, FamilyError> {
        let triad = crate::flow::make_entropic_triad(med)?;
        let c = resolved_c();
        Self::new(Family::Periodic1, [c; 3], 1.0, 0.0, G3Convention::FirstIntegral, triad, med)
    }

    pub fn profile(&self, i: usize) -> Option<&Table3Profile> {
        self.profiles.get(i)?.as_ref().map(|c| &c.profile)
    }

    /// Amplitude `aᵢ(r)` (0 for a switched-off component).
    pub fn component_amplitude(&self, i: usize, r: f64) -> Result<f64, FamilyError> {
        match self.profile(i) {
            Some(p) => p.eval(r),
            None => Ok(0.0),
        }
    }

    /// `(Φ, ∂Φ/∂r)` of component `i` at fixed `x`.
    pub fn component_phi(&self, i: usize, x: Vec3) -> impl Fn(f64, f64) -> (f64, f64) + '_ {
        let base = -dot(self.triad.e[i], x);
        let speed = 1.0 + self.med.kappa;
        let prof = self.profile(i);
        move |r, t| match prof {
            None => (base, 0.0),
            Some(p) => match p.eval_pair(r) {
                Ok((a, da)) => (speed * a * t + base, speed * da * t),
                Err(_) => (f64::NAN, f64::NAN),
            },
        }
    }

    fn solve_component(&self, i: usize, t: f64, x: Vec3) -> Result<f64, FamilyError> {
        let base = -dot(self.triad.e[i], x);
        let Some(comp) = self.profiles[i].as_ref() else {
            return Ok(base);
        };
        if t == 0.0 {
            return Ok(base);
        }
        let speed = 1.0 + self.med.kappa;
        let phi = self.component_phi(i, x);
        if let Some(b) = comp.bounds {
            // contraction: the root is unique and lies in the bracket
            if t >= 0.0 && speed * t * b.lipschitz < 1.0 {
                let lo = base + speed * t * b.min;
                let hi = base + speed * t * b.max;
                let guess = phi(base, t).0;
                let res = solve_scalar_bracketed(|r| phi(r, t).0, |r| phi(r, t).1, guess, (lo, hi), SolveConfig::default())?;
                return Ok(res.r);
            }
        }
        track(&phi, base, t, &self.continuation)
    }

    /// Invariants `rⁱ` at `(t, x)`, each tracked from `t = 0`.
    pub fn invariants(&self, t: f64, x: Vec3) -> Result<[f64; 3], FamilyError> {
        Ok([self.solve_component(0, t, x)?, self.solve_component(1, t, x)?, self.solve_component(2, t, x)?])
    }

    /// State assembled from given invariants.
    pub fn state_from_invariants(&self, r: [f64; 3]) -> Result<FlowState, FamilyError> {
        let mut a = 0.0;
        let mut u = [0.0; 3];
        for (i, &ri) in r.iter().enumerate() {
            let ai = self.component_amplitude(i, ri)?;
            a += ai;
            u = add(u, scale(self.med.kappa * ai, self.triad.e[i]));
        }
        Ok(FlowState { a, u })
    }
}

/// State and invariants of the rank-3 solution at `(t, x)`.
pub fn rank3_eval(cfg: &Rank3Config, t: f64, x: Vec3) -> Result<(FlowState, [f64; 3]), FamilyError> {
    let r = cfg.invariants(t, x)?;
    Ok((cfg.state_from_invariants(r)?, r))
}

/// Earliest fold among the three components at `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rank3Fold {
    pub component: usize,
    pub fold: Fold,
    pub state: FlowState,
    pub invariants: [f64; 3],
}

pub fn rank3_catastrophe(cfg: &Rank3Config, x: Vec3, t_max: f64) -> Result<Option<Rank3Fold>, FamilyError> {
    let mut best: Option<(usize, Fold)> = None;
    for i in 0..3 {
        if cfg.profile(i).is_none() {
            continue;
        }
        let phi = cfg.component_phi(i, x);
        let r0 = -dot(cfg.triad.e[i], x);
        if let Some(fold) = catastrophe_time(phi, r0, (0.0, t_max), &cfg.continuation)? {
            if best.map_or(true, |(_, b)| fold.t < b.t) {
                best = Some((i, fold));
            }
        }
    }
    let Some((component, fold)) = best else { return Ok(None) };
    let mut r = [0.0; 3];
    for (i, slot) in r.iter_mut().enumerate() {
        *slot = if i == component { fold.r } else { cfg.solve_component(i, fold.t, x)? };
    }
    let state = cfg.state_from_invariants(r)?;
    Ok(Some(Rank3Fold { component, fold, state, invariants: r }))
}

/// Where and when the first characteristic crossing of component `i` happens:
/// `T = 1/((1+κ)·max a′)`, attained at the invariant `r*` of steepest slope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CuspProbe {
    pub t: f64,
    pub r: f64,
    /// A point with `rⁱ(T, x) = r*` and the other invariants away from the cusp.
    pub x: Vec3,
}

pub fn cusp_probe(cfg: &Rank3Config, i: usize) -> Result<CuspProbe, FamilyError> {
    let prof = cfg
        .profile(i)
        .ok_or_else(|| FamilyError::InvalidParameter(format!("component {i} is switched off")))?;
    if !cfg.family.is_periodic() {
        return Err(FamilyError::InvalidParameter("cusp probe needs a periodic family".into()));
    }
    let period = prof.real_period();
    let n = 4000;
    let (mut r_best, mut s_best) = (0.0, f64::NEG_INFINITY);
    for k in 0..n {
        let r = 2.0 * period * k as f64 / n as f64;
        let s = prof.derivative(r)?;
        if s > s_best {
            r_best = r;
            s_best = s;
        }
    }
    // golden-section polish of the slope maximum
    let (mut lo, mut hi) = (r_best - 2.0 * period / n as f64, r_best + 2.0 * period / n as f64);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..80 {
        let m1 = hi - g * (hi - lo);
        let m2 = lo + g * (hi - lo);
        if prof.derivative(m1)? > prof.derivative(m2)? {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let r = 0.5 * (lo + hi);
    let slope = prof.derivative(r)?;
    if !(slope > 0.0) {
        return Err(FamilyError::InvalidParameter("profile has no compressive flank".into()));
    }
    let speed = 1.0 + cfg.med.kappa;
    let t = 1.0 / (speed * slope);
    // −eⁱ·x = r − (1+κ)a(r)T; step along the in-plane direction orthogonal to eⁱ
    let b = r - speed * prof.eval(r)? * t;
    let e = cfg.triad.e[i];
    let other = cfg.triad.e[(i + 1) % 3];
    let perp = add(other, scale(-dot(other, e), e));
    let x = add(scale(-b, e), scale(0.5 / norm(perp), perp));
    Ok(CuspProbe { t, r, x })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::make_entropic_triad;

    #[test]
    fn constant_profile_rank1_is_linear() {
        let med = MediumParams::from_kappa(5.0).unwrap();
        let e = [0.0, 0.6, 0.8];
        let cvec = [0.1, -0.2, 0.3];
        let prof = ProfileFunction::constant(0.7);
        let (t, x) = (0.4, [1.0, 2.0, -1.0]);
        let st = rank1_entropic(&prof, e, cvec, med, t, x).unwrap();
        assert_eq!(st.a, 0.7);
        let expect_u = add(scale(5.0 * 0.7, e), cvec);
        for k in 0..3 {
            assert!((st.u[k] - expect_u[k]).abs() < 1e-15);
        }
    }

    #[test]
    fn rank3_at_t0_is_explicit() {
        let med = MediumParams::from_kappa(5.0).unwrap();
        let cfg = Rank3Config::resolved_row1(med).unwrap();
        let x = [0.3, -0.7, 1.1];
        let (_, r) = rank3_eval(&cfg, 0.0, x).unwrap();
        for i in 0..3 {
            assert_eq!(r[i], -dot(cfg.triad.e[i], x));
        }
    }

    #[test]
    fn single_component_matches_rank1() {
        let med = MediumParams::from_kappa(5.0).unwrap();
        let triad = make_entropic_triad(med).unwrap();
        let c = resolved_c();
        let cfg = Rank3Config::new(Family::Periodic1, [c, 0.0, 0.0], 1.0, 0.0, G3Convention::FirstIntegral, triad, med)
            .unwrap();
        let prof = cfg.profile(0).unwrap().to_profile_function();
        for (t, x) in [(0.05, [0.2, 0.4, 0.9]), (0.15, [1.0, -0.3, 0.5]), (0.3, [-0.8, 0.1, 0.2])] {
            let (st3, _) = rank3_eval(&cfg, t, x).unwrap();
            let st1 = rank1_entropic_with(&prof, triad.e[0], [0.0; 3], med, t, x, &cfg.continuation).unwrap();
            assert!((st3.a - st1.a).abs() < 1e-10);
            for k in 0..3 {
                assert!((st3.u[k] - st1.u[k]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn acoustic_triple_product() {
        let u1 = ProfileFunction::from_fn("sin", f64::sin);
        let u2 = ProfileFunction::from_fn("cos", f64::cos);
        let e = [1.0, 0.0, 0.0];
        let m = [0.3, 1.0, 0.2];
        let st = rank1_acoustic(&u1, &u2, e, m, 0.4, 1.0, 0.7, [0.1, 0.5, -0.2]).unwrap();
        let tp = crate::flow::det3(st.u, e, m);
        assert!((tp - 0.4).abs() < 1e-14);
        let bad = rank1_acoustic(&u1, &u2, e, [2.0, 0.0, 1.0], 0.4, 1.0, 0.7, [0.0; 3]);
        assert!(matches!(bad, Err(FamilyError::Flow(FlowError::DegenerateProjection))));
    }

    #[test]
    fn fold_state_bounded() {
        let med = MediumParams::from_kappa(5.0).unwrap();
        let cfg = Rank3Config::resolved_row1(med).unwrap();
        let probe = cusp_probe(&cfg, 0).unwrap();
        let f = rank3_catastrophe(&cfg, probe.x, 5.0).unwrap().expect("fold");
        assert_eq!(f.component, 0);
        assert!((f.fold.t - probe.t).abs() < 1e-7, "{f:?} {probe:?}");
        assert!(f.fold.jacobian < 1e-6, "{f:?}");
        assert!(f.state.a.abs() < 3.0);
    }
}
