//! Numerical verification: system residuals on grids, boundedness scans and
//! named self-check suites.

mod suites;

pub use suites::{run_suite, CheckResult, Suite, SuiteReport};

use rayon::prelude::*;
use serde::Serialize;

use crate::elliptic::Invariants;
use crate::flow::{coefficient_matrix, FlowState, MediumParams, Vec3};
use crate::modular::{wp_zeros_physical, PhysicalZeros, ZeroError, ZeroMethod};

/// Default ceiling on the fraction of grid points that may fail.
pub const DEFAULT_MAX_SKIPPED: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VerifyError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("scan needs at least 1000 samples, got {0}")]
    TooFewSamples(usize),
    #[error(transparent)]
    Zero(#[from] ZeroError),
}

/// Tensor grid in `(t, x¹, x², x³)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
pub struct GridSpec {
    pub t0: f64,
    pub t1: f64,
    pub x_lo: Vec3,
    pub x_hi: Vec3,
    pub n_t: usize,
    pub n_x: usize,
    pub fd_step: f64,
}

impl GridSpec {
    pub fn validate(&self) -> Result<(), VerifyError> {
        if self.n_t < 5 || self.n_x < 5 {
            return Err(VerifyError::InvalidGrid(format!("n_t = {}, n_x = {} (need ≥ 5)", self.n_t, self.n_x)));
        }
        if !(self.fd_step > 0.0) {
            return Err(VerifyError::InvalidGrid(format!("fd_step = {}", self.fd_step)));
        }
        let vals = [self.t0, self.t1].into_iter().chain(self.x_lo).chain(self.x_hi);
        if vals.into_iter().any(|v| !v.is_finite()) {
            return Err(VerifyError::InvalidGrid("non-finite bounds".into()));
        }
        Ok(())
    }

    fn lin(lo: f64, hi: f64, n: usize, k: usize) -> f64 {
        if n <= 1 {
            lo
        } else {
            lo + (hi - lo) * k as f64 / (n - 1) as f64
        }
    }

    pub fn len(&self) -> usize {
        self.n_t * self.n_x.pow(3)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid point `idx` in row-major order `(t, x¹, x², x³)`.
    pub fn point(&self, idx: usize) -> (f64, Vec3) {
        let n = self.n_x;
        let i3 = idx % n;
        let i2 = (idx / n) % n;
        let i1 = (idx / (n * n)) % n;
        let it = idx / (n * n * n);
        let x = [
            Self::lin(self.x_lo[0], self.x_hi[0], n, i1),
            Self::lin(self.x_lo[1], self.x_hi[1], n, i2),
            Self::lin(self.x_lo[2], self.x_hi[2], n, i3),
        ];
        (Self::lin(self.t0, self.t1, self.n_t, it), x)
    }

    pub fn with_fd_step(mut self, h: f64) -> Self {
        self.fd_step = h;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkippedSample {
    pub t: f64,
    pub x: Vec3,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub max_abs: f64,
    /// Root mean square of the pointwise residual norm.
    pub l2: f64,
    pub worst_point: (f64, Vec3),
    /// Maximum per equation: continuity, then the three momentum components.
    pub per_equation: [f64; 4],
    pub samples: usize,
    pub samples_skipped: usize,
    pub skipped: Vec<SkippedSample>,
}

impl ResidualReport {
    pub fn skipped_fraction(&self) -> f64 {
        if self.samples == 0 {
            0.0
        } else {
            self.samples_skipped as f64 / self.samples as f64
        }
    }

    pub fn passes(&self, tol: f64, max_skipped: f64) -> bool {
        self.max_abs <= tol && self.skipped_fraction() <= max_skipped
    }
}

/// Residual of `U_t + Σ_j A^j(U)·U_{x_j}` at one point, fourth-order centered differences.
pub fn pointwise_residual<F, E>(sol: &F, med: MediumParams, t: f64, x: Vec3, h: f64) -> Result<[f64; 4], String>
where
    F: Fn(f64, Vec3) -> Result<FlowState, E>,
    E: std::fmt::Display,
{
    let eval = |t: f64, x: Vec3| sol(t, x).map(|s| s.as_array()).map_err(|e| format!("({t}, {x:?}): {e}"));
    let center = sol(t, x).map_err(|e| e.to_string())?;
    let u0 = center.as_array();
    let weights = [(-2.0, 1.0), (-1.0, -8.0), (1.0, 8.0), (2.0, -1.0)];
    let mut derivs = [[0.0; 4]; 4];
    for (axis, d) in derivs.iter_mut().enumerate() {
        for (off, w) in weights {
            let (tt, mut xx) = (if axis == 0 { t + off * h } else { t }, x);
            if axis > 0 {
                xx[axis - 1] += off * h;
            }
            let v = eval(tt, xx)?;
            for k in 0..4 {
                d[k] += w * (v[k] - u0[k]);
            }
        }
        for v in d.iter_mut() {
            *v /= 12.0 * h;
        }
    }
    let mut res = derivs[0];
    for j in 1..=3 {
        let a = coefficient_matrix(j, center, med);
        for (row, r) in res.iter_mut().enumerate() {
            *r += (0..4).map(|col| a[row][col] * derivs[j][col]).sum::<f64>();
        }
    }
    Ok(res)
}

/// Residual of the isentropic system over a grid, evaluated in parallel.
pub fn pde_residual<F, E>(sol: F, med: MediumParams, grid: GridSpec) -> Result<ResidualReport, VerifyError>
where
    F: Fn(f64, Vec3) -> Result<FlowState, E> + Sync,
    E: std::fmt::Display,
{
    grid.validate()?;
    let results: Vec<(f64, Vec3, Result<[f64; 4], String>)> = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let (t, x) = grid.point(idx);
            (t, x, pointwise_residual(&sol, med, t, x, grid.fd_step))
        })
        .collect();
    let mut report = ResidualReport {
        max_abs: 0.0,
        l2: 0.0,
        worst_point: grid.point(0),
        per_equation: [0.0; 4],
        samples: results.len(),
        samples_skipped: 0,
        skipped: Vec::new(),
    };
    let mut sum_sq = 0.0;
    let mut used = 0usize;
    for (t, x, res) in results {
        match res {
            Ok(r) if r.iter().all(|v| v.is_finite()) => {
                let nrm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
                for (k, v) in r.iter().enumerate() {
                    report.per_equation[k] = report.per_equation[k].max(v.abs());
                }
                let m = r.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
                if m > report.max_abs {
                    report.max_abs = m;
                    report.worst_point = (t, x);
                }
                sum_sq += nrm * nrm;
                used += 1;
            }
            Ok(r) => report.skipped.push(SkippedSample { t, x, reason: format!("non-finite residual {r:?}") }),
            Err(reason) => report.skipped.push(SkippedSample { t, x, reason }),
        }
    }
    report.samples_skipped = report.skipped.len();
    report.l2 = if used > 0 { (sum_sq / used as f64).sqrt() } else { f64::NAN };
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub min_val: f64,
    pub argmin: f64,
    pub max_val: f64,
    pub argmax: f64,
    /// No evaluation failed or blew up, and the minimum is positive.
    pub bounded: bool,
    /// First sample at which the function failed or was non-finite.
    pub pole_near: Option<f64>,
    pub samples: usize,
}

fn golden_min<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, iters: usize) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut m1 = hi - g * (hi - lo);
    let mut m2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(m1), f(m2));
    for _ in 0..iters {
        if f1 <= f2 {
            hi = m2;
            m2 = m1;
            f2 = f1;
            m1 = hi - g * (hi - lo);
            f1 = f(m1);
        } else {
            lo = m1;
            m1 = m2;
            f1 = f2;
            m2 = lo + g * (hi - lo);
            f2 = f(m2);
        }
    }
    if f1 <= f2 {
        (m1, f1)
    } else {
        (m2, f2)
    }
}

/// Sample `f` on `n + 1` points of `[a, b]`, polish the extrema by golden
/// section. `f` is the quantity whose positivity keeps a profile bounded
/// (a radicand or denominator).
pub fn boundedness_scan<F, E>(f: F, interval: (f64, f64), n: usize) -> Result<ScanReport, VerifyError>
where
    F: Fn(f64) -> Result<f64, E>,
{
    if n < 1000 {
        return Err(VerifyError::TooFewSamples(n));
    }
    let (a, b) = interval;
    let h = (b - a) / n as f64;
    let val = |x: f64| f(x).ok().filter(|v| v.is_finite());
    let mut report = ScanReport {
        min_val: f64::INFINITY,
        argmin: a,
        max_val: f64::NEG_INFINITY,
        argmax: a,
        bounded: true,
        pole_near: None,
        samples: n + 1,
    };
    for k in 0..=n {
        let x = a + h * k as f64;
        match val(x) {
            Some(v) => {
                if v < report.min_val {
                    report.min_val = v;
                    report.argmin = x;
                }
                if v > report.max_val {
                    report.max_val = v;
                    report.argmax = x;
                }
            }
            None => {
                report.bounded = false;
                report.pole_near.get_or_insert(x);
            }
        }
    }
    if report.min_val.is_finite() {
        let lo = (report.argmin - h).max(a);
        let hi = (report.argmin + h).min(b);
        let (x, v) = golden_min(|x| val(x).unwrap_or(f64::INFINITY), lo, hi, 80);
        if v < report.min_val {
            report.min_val = v;
            report.argmin = x;
        }
        let lo = (report.argmax - h).max(a);
        let hi = (report.argmax + h).min(b);
        let (x, v) = golden_min(|x| -val(x).unwrap_or(f64::NEG_INFINITY), lo, hi, 80);
        if -v > report.max_val {
            report.max_val = -v;
            report.argmax = x;
        }
    }
    if !(report.min_val > 0.0) {
        report.bounded = false;
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroReality {
    /// Both zeros stay off the real axis.
    pub off_axis: bool,
    pub zeros: PhysicalZeros,
    /// `|Im z0|` after reduction to the cell centred on the origin.
    pub min_abs_im: f64,
}

/// Whether the zeros of ℘ avoid every translate of the real axis that
/// carries real values, i.e. whether `z₀` is not congruent to a real point.
pub fn zero_reality_check(inv: Invariants) -> Result<ZeroReality, VerifyError> {
    let zeros = wp_zeros_physical(inv, ZeroMethod::Continued)?;
    // with a real ω₁ the real axis is invariant under ω₁ and its translates by ω₂ are
    // congruent to it, so only Im z mod Im ω₂ matters
    let step = zeros.omega2.im.abs();
    let dist = |z: crate::complex::ComplexValue| {
        let f = z.im / step;
        (f - f.round()).abs() * step
    };
    let min_abs_im = dist(zeros.z0).min(dist(zeros.minus_z0));
    Ok(ZeroReality { off_axis: min_abs_im > 1e-6, zeros, min_abs_im })
}
