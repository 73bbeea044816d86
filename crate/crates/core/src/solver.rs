//! Scalar implicit equations `r = Φ(r)`: safeguarded Newton, branch
//! continuation in `t` and fold (gradient catastrophe) detection.

use serde::Serialize;

/// `|1 − Φ′|` below this is reported as a singular Jacobian.
pub const SINGULAR_JACOBIAN: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolverError {
    #[error("no convergence after {iterations} iterations (|r − Φ(r)| = {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("singular Jacobian 1 − Φ′ = {jacobian:e} at r = {r}")]
    SingularJacobian { r: f64, jacobian: f64 },
    #[error("branch lost at t = {t}")]
    BranchLost { t: f64 },
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolveConfig {
    pub tol: f64,
    pub max_iter: usize,
    pub damping: f64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self { tol: 1e-12, max_iter: 64, damping: 1.0 }
    }
}

impl SolveConfig {
    fn validate(&self) -> Result<(), SolverError> {
        if !(self.tol > 0.0) || !(self.damping > 0.0 && self.damping <= 1.0) || self.max_iter == 0 {
            return Err(SolverError::InvalidConfig(format!("{self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolveResult {
    pub r: f64,
    pub iterations: usize,
    pub converged: bool,
    /// `1 − Φ′(r)` at the returned point.
    pub jacobian: f64,
}

/// Newton on `g(r) = r − Φ(r)`.
///
/// Steps that increase `|g|` are halved. Once a sign change of `g` has been
/// seen the iteration is confined to the bracket and falls back to bisection
/// whenever Newton would leave it or `1 − Φ′` degenerates.
pub fn solve_scalar<F, D>(phi: F, phi_prime: D, guess: f64, cfg: SolveConfig) -> Result<SolveResult, SolverError>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    solve_impl(&phi, &phi_prime, guess, None, cfg)
}

/// As [`solve_scalar`] with a known bracket `g(lo)·g(hi) ≤ 0`.
pub fn solve_scalar_bracketed<F, D>(
    phi: F,
    phi_prime: D,
    guess: f64,
    bracket: (f64, f64),
    cfg: SolveConfig,
) -> Result<SolveResult, SolverError>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    solve_impl(&phi, &phi_prime, guess, Some(bracket), cfg)
}

fn solve_impl(
    phi: &dyn Fn(f64) -> f64,
    phi_prime: &dyn Fn(f64) -> f64,
    guess: f64,
    bracket: Option<(f64, f64)>,
    cfg: SolveConfig,
) -> Result<SolveResult, SolverError> {
    cfg.validate()?;
    let g = |r: f64| r - phi(r);
    let done = |r: f64, gr: f64| gr.abs() <= cfg.tol * (1.0 + r.abs());

    // (lo, g(lo), hi, g(hi)) with g(lo) < 0 < g(hi)
    let mut br: Option<(f64, f64)> = None;
    if let Some((a, b)) = bracket {
        let (ga, gb) = (g(a), g(b));
        if done(a, ga) {
            return Ok(SolveResult { r: a, iterations: 0, converged: true, jacobian: 1.0 - phi_prime(a) });
        }
        if done(b, gb) {
            return Ok(SolveResult { r: b, iterations: 0, converged: true, jacobian: 1.0 - phi_prime(b) });
        }
        if ga.is_finite() && gb.is_finite() && ga * gb < 0.0 {
            br = Some(if ga < 0.0 { (a, b) } else { (b, a) });
        }
    }

    let mut r = guess;
    if let Some((neg, pos)) = br {
        if !(r > neg.min(pos) && r < neg.max(pos)) {
            r = 0.5 * (neg + pos);
        }
    }
    let mut gr = g(r);
    for it in 1..=cfg.max_iter {
        if !gr.is_finite() {
            match br {
                Some((neg, pos)) => {
                    r = 0.5 * (neg + pos);
                    gr = g(r);
                    continue;
                }
                None => return Err(SolverError::NoConvergence { iterations: it, residual: f64::NAN }),
            }
        }
        if let Some((neg, pos)) = br.as_mut() {
            if gr < 0.0 {
                *neg = r;
            } else {
                *pos = r;
            }
        }
        let jac = 1.0 - phi_prime(r);
        let newton_ok = jac.is_finite() && jac.abs() >= SINGULAR_JACOBIAN;
        if !newton_ok && br.is_none() {
            return Err(SolverError::SingularJacobian { r, jacobian: jac });
        }
        let mut next = if newton_ok { r - cfg.damping * gr / jac } else { f64::NAN };
        let mut gn = f64::NAN;
        if let Some((neg, pos)) = br {
            let inside = next > neg.min(pos) && next < neg.max(pos);
            if !inside {
                next = 0.5 * (neg + pos);
            }
            gn = g(next);
        } else {
            let mut step = next - r;
            for _ in 0..30 {
                gn = g(next);
                if gn.is_finite() && gn.abs() < gr.abs() {
                    break;
                }
                step *= 0.5;
                next = r + step;
            }
            // a sign change seen while damping gives a bracket for later steps
            if gn.is_finite() && gn * gr < 0.0 {
                br = Some(if gr < 0.0 { (r, next) } else { (next, r) });
            }
        }
        let moved = (next - r).abs();
        r = next;
        gr = gn;
        if done(r, gr) || (gr.is_finite() && moved <= 4.0 * f64::EPSILON * (1.0 + r.abs())) {
            let jacobian = 1.0 - phi_prime(r);
            return Ok(SolveResult { r, iterations: it, converged: done(r, gr), jacobian })
                .and_then(|res| {
                    if res.converged {
                        Ok(res)
                    } else {
                        Err(SolverError::NoConvergence { iterations: it, residual: gr.abs() })
                    }
                });
        }
        if let Some((neg, pos)) = br {
            if (pos - neg).abs() <= 2.0 * f64::EPSILON * (1.0 + r.abs()) {
                return Ok(SolveResult { r, iterations: it, converged: true, jacobian: 1.0 - phi_prime(r) });
            }
        }
    }
    Err(SolverError::NoConvergence { iterations: cfg.max_iter, residual: gr.abs() })
}

/// Parameters of branch continuation in `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContinuationConfig {
    /// Largest accepted `|Δr|` per step (plus 10% of `|r|`).
    pub max_dr: f64,
    pub initial_dt: f64,
    pub min_dt: f64,
    /// Bisection tolerance on the fold time.
    pub t_tol: f64,
    pub solve: SolveConfig,
}

impl ContinuationConfig {
    /// `max_dr = 0.1·scale`, e.g. a tenth of the real period.
    pub fn with_scale(scale: f64) -> Self {
        Self { max_dr: 0.1 * scale, initial_dt: 0.05, min_dt: 1e-12, t_tol: 1e-8, solve: SolveConfig::default() }
    }
}

impl Default for ContinuationConfig {
    fn default() -> Self {
        Self::with_scale(1.0)
    }
}

fn phi_t<F>(phi: &F, r: f64, t: f64) -> f64
where
    F: Fn(f64, f64) -> (f64, f64),
{
    let d = 1e-6 * t.abs().max(1.0);
    (phi(r, t + d).0 - phi(r, t - d).0) / (2.0 * d)
}

/// One continuation step from `(t, r)` to `tn`. Rejected when Newton fails,
/// `1 − Φ′` is not positive, or the new root strays from the tangent
/// prediction `r + (Φ_t / (1 − Φ′))·Δt` (a jump to another branch).
fn step_to<F>(phi: &F, t: f64, r: f64, jac: f64, tn: f64, cfg: &ContinuationConfig) -> Option<SolveResult>
where
    F: Fn(f64, f64) -> (f64, f64),
{
    let dt = tn - t;
    let v = if jac > 0.0 { phi_t(phi, r, t) / jac } else { 0.0 };
    let pred = r + v * dt;
    let guess = if pred.is_finite() { pred } else { r };
    let res = solve_scalar(|x| phi(x, tn).0, |x| phi(x, tn).1, guess, cfg.solve).ok()?;
    let cap = cfg.max_dr + 0.1 * r.abs();
    let curvature = cfg.max_dr * (dt / cfg.initial_dt).powi(2).min(1.0);
    let allowed = 0.5 * (v * dt).abs() + curvature + 1e-9 * (1.0 + r.abs());
    let ok = res.jacobian > 0.0 && (res.r - r).abs() <= cap && (res.r - pred).abs() <= allowed;
    ok.then_some(res)
}

/// Follow the root of `r = Φ(r, t)` from `(t0, r0)` to `t1`, `Φ` returning `(Φ, ∂Φ/∂r)`.
pub fn continue_branch<F>(phi: F, t0: f64, r0: f64, t1: f64, cfg: &ContinuationConfig) -> Result<SolveResult, SolverError>
where
    F: Fn(f64, f64) -> (f64, f64),
{
    let start = solve_scalar(|r| phi(r, t0).0, |r| phi(r, t0).1, r0, cfg.solve)?;
    let mut t = t0;
    let mut r = start.r;
    let mut last = start;
    let mut dt = cfg.initial_dt.min((t1 - t0).abs()).max(cfg.min_dt) * (t1 - t0).signum();
    while (t1 - t).abs() > 0.0 {
        let tn = if (t1 - t).abs() <= dt.abs() { t1 } else { t + dt };
        match step_to(&phi, t, r, last.jacobian, tn, cfg) {
            Some(res) => {
                t = tn;
                r = res.r;
                last = res;
                dt *= 2.0;
            }
            None => {
                dt *= 0.5;
                if dt.abs() < cfg.min_dt {
                    return Err(SolverError::BranchLost { t });
                }
            }
        }
    }
    Ok(last)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fold {
    pub t: f64,
    pub r: f64,
    pub jacobian: f64,
}

/// First `t` in `t_range` at which the branch continued from `(t_range.0, r0)`
/// stops existing with `1 − ∂Φ/∂r > 0`. `None` if it survives the whole range.
pub fn catastrophe_time<F>(
    phi: F,
    r0: f64,
    t_range: (f64, f64),
    cfg: &ContinuationConfig,
) -> Result<Option<Fold>, SolverError>
where
    F: Fn(f64, f64) -> (f64, f64),
{
    let (t0, t1) = t_range;
    let start = solve_scalar(|r| phi(r, t0).0, |r| phi(r, t0).1, r0, cfg.solve)?;
    if start.jacobian <= 0.0 {
        return Err(SolverError::BranchLost { t: t0 });
    }
    let mut t = t0;
    let mut r = start.r;
    let mut jac = start.jacobian;
    let mut dt = cfg.initial_dt.min(t1 - t0);
    // march until a step fails with dt at the bisection tolerance
    loop {
        if t >= t1 {
            return Ok(None);
        }
        let tn = (t + dt).min(t1);
        match step_to(&phi, t, r, jac, tn, cfg) {
            Some(res) => {
                t = tn;
                r = res.r;
                jac = res.jacobian;
                dt *= 1.5;
            }
            None => {
                if tn - t <= cfg.t_tol {
                    return Ok(Some(Fold { t, r, jacobian: jac }));
                }
                dt = 0.5 * (tn - t);
            }
        }
    }
}

/// All roots of `r = Φ(r)` in `[lo, hi]` by a sign scan on `n` intervals and polish.
pub fn enumerate_roots<F, D>(phi: F, phi_prime: D, lo: f64, hi: f64, n: usize, cfg: SolveConfig) -> Vec<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let n = n.max(1);
    let g = |r: f64| r - phi(r);
    let mut roots = Vec::new();
    let mut prev_r = lo;
    let mut prev_g = g(lo);
    for k in 1..=n {
        let r = lo + (hi - lo) * k as f64 / n as f64;
        let gr = g(r);
        if prev_g == 0.0 {
            roots.push(prev_r);
        } else if prev_g.is_finite() && gr.is_finite() && prev_g * gr < 0.0 {
            if let Ok(res) = solve_scalar_bracketed(&phi, &phi_prime, 0.5 * (prev_r + r), (prev_r, r), cfg) {
                roots.push(res.r);
            }
        }
        prev_r = r;
        prev_g = gr;
    }
    if prev_g == 0.0 {
        roots.push(prev_r);
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_map() {
        let res = solve_scalar(|_| 3.5, |_| 0.0, 0.0, SolveConfig::default()).unwrap();
        assert_eq!(res.r, 3.5);
        assert_eq!(res.iterations, 1);
    }

    #[test]
    fn linear_fixed_point() {
        let (alpha, beta) = (0.3, 2.0);
        let res = solve_scalar(|r| alpha * r + beta, |_| alpha, 10.0, SolveConfig::default()).unwrap();
        assert!((res.r - beta / (1.0 - alpha)).abs() < 1e-14);
        assert!((res.jacobian - 0.7).abs() < 1e-15);
    }

    #[test]
    fn singular_jacobian() {
        let err = solve_scalar(|r| r + 1.0, |_| 1.0, 0.0, SolveConfig::default()).unwrap_err();
        assert!(matches!(err, SolverError::SingularJacobian { .. }));
    }

    #[test]
    fn bracket_rescues_flat_newton() {
        // g(r) = r − Φ(r) = tanh(r − 1)·... has a flat tail where Newton overshoots
        let phi = |r: f64| r - (r - 1.0).tanh();
        let dphi = |r: f64| 1.0 - 1.0 / (r - 1.0).cosh().powi(2);
        let res = solve_scalar_bracketed(phi, dphi, 30.0, (-40.0, 40.0), SolveConfig::default()).unwrap();
        assert!((res.r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn linear_fold_time() {
        let alpha = 2.5;
        let beta = 1.0;
        let fold = catastrophe_time(|r, t| (alpha * t * r + beta, alpha * t), beta, (0.0, 1.0), &ContinuationConfig::default())
            .unwrap()
            .unwrap();
        assert!((fold.t - 1.0 / alpha).abs() < 1e-7, "{fold:?}");
    }

    #[test]
    fn constant_profile_has_no_fold() {
        let res = catastrophe_time(|_, t| (2.0 * t, 0.0), 0.0, (0.0, 10.0), &ContinuationConfig::default()).unwrap();
        assert!(res.is_none());
    }

    #[test]
    fn continuation_reaches_target() {
        // r = 0.5·t·sin r + 1
        let phi = |r: f64, t: f64| (0.5 * t * r.sin() + 1.0, 0.5 * t * r.cos());
        let res = continue_branch(phi, 0.0, 1.0, 1.5, &ContinuationConfig::default()).unwrap();
        assert!((res.r - 0.75 * res.r.sin() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn enumerate_three_roots() {
        // r = r³ − r + r  ⇔ r³ − r = 0
        let roots = enumerate_roots(|r| r - (r * r * r - r), |r| 1.0 - (3.0 * r * r - 1.0), -2.0, 2.0, 1001, SolveConfig::default());
        assert_eq!(roots.len(), 3);
        for (got, want) in roots.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }
}
