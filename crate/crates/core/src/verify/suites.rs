//! Named self-check suites used by the command line `verify` subcommand.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complex::ComplexValue;
use crate::elliptic::{invariants_from_lattice, periods_from_invariants, Invariants, Weierstrass};
use crate::families::{
    first_integral_residual, kg_reduction_residual, reduced_solution, resolved_c, Family, ReductionCase, Table3Params,
    Table3Profile,
};
use crate::flow::{
    acoustic_wave_vector, dispersion, entropic_wave_vector, make_entropic_triad, FlowState, MediumParams,
};
use crate::modular::{wp_zeros_physical, ZeroMethod};

use super::boundedness_scan;

const SEED: u64 = 0x5eed_e11f;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Suite {
    Kernel,
    Modular,
    Flow,
    Table3,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Kernel => "kernel",
            Suite::Modular => "modular",
            Suite::Flow => "flow",
            Suite::Table3 => "table3",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "kernel" => Ok(Suite::Kernel),
            "modular" => Ok(Suite::Modular),
            "flow" => Ok(Suite::Flow),
            "table3" => Ok(Suite::Table3),
            "all" => Ok(Suite::All),
            other => Err(format!("unknown suite `{other}` (kernel, modular, flow, table3, all)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    /// Measured error or quantity.
    pub value: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

struct Checks {
    suite: &'static str,
    out: Vec<CheckResult>,
}

impl Checks {
    fn new(suite: &'static str) -> Self {
        Self { suite, out: Vec::new() }
    }

    /// Record `value ≤ tol`; errors count as failures.
    fn below<E: fmt::Display>(&mut self, name: impl Into<String>, value: Result<f64, E>, tol: f64) {
        let (value, passed, detail) = match value {
            Ok(v) => (v, v <= tol, String::new()),
            Err(e) => (f64::NAN, false, e.to_string()),
        };
        self.out.push(CheckResult { suite: self.suite, name: name.into(), passed, value, tolerance: tol, detail });
    }

    /// Record `value ≥ floor`.
    fn above<E: fmt::Display>(&mut self, name: impl Into<String>, value: Result<f64, E>, floor: f64) {
        let (value, passed, detail) = match value {
            Ok(v) => (v, v >= floor, format!("lower bound {floor}")),
            Err(e) => (f64::NAN, false, e.to_string()),
        };
        self.out.push(CheckResult { suite: self.suite, name: name.into(), passed, value, tolerance: floor, detail });
    }
}

fn c(re: f64, im: f64) -> ComplexValue {
    ComplexValue::new(re, im)
}

fn reference_invariants() -> Invariants {
    Invariants::new(4.0 / 3.0, 1.0)
}

fn kernel_checks() -> Vec<CheckResult> {
    let mut ch = Checks::new("kernel");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for (g2, g3) in [(4.0 / 3.0, 1.0), (4.0, 0.0), (1.0, -2.0), (-3.0, 0.5)] {
        let inv = Invariants::new(g2, g3);
        let label = format!("g2={g2}, g3={g3}");
        let w = match Weierstrass::from_invariants(inv) {
            Ok(w) => w,
            Err(e) => {
                ch.below::<String>(format!("construct {label}"), Err(e.to_string()), 0.0);
                continue;
            }
        };
        let (o1, o2) = (w.lattice().omega1, w.lattice().omega2);
        let mut ode = 0.0f64;
        let mut per = 0.0f64;
        let mut failure = None;
        for _ in 0..16 {
            let z = c(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)) * 0.5;
            if z.norm() < 0.05 {
                continue;
            }
            let res = (|| {
                let (p, dp) = w.eval(z)?;
                let rhs = 4.0 * p * p * p - g2 * p - g3;
                let e = (dp * dp - rhs).norm() / (1.0 + rhs.norm());
                let shifted = w.wp(z + o1)?.max_rel(&p).max(w.wp(z + o2)?.max_rel(&p));
                Ok::<_, crate::elliptic::KernelError>((e, shifted))
            })();
            match res {
                Ok((e, s)) => {
                    ode = ode.max(e);
                    per = per.max(s);
                }
                Err(e) => failure = Some(e.to_string()),
            }
        }
        let wrap = |v: f64| failure.clone().map_or(Ok(v), Err);
        ch.below(format!("differential equation {label}"), wrap(ode), 1e-10);
        ch.below(format!("periodicity {label}"), wrap(per), 1e-10);
        let round = invariants_from_lattice(w.lattice()).map(|(a, b)| (a - g2).norm().max((b - g3).norm()));
        ch.below(format!("invariants round trip {label}"), round, 1e-9);
    }
    let w = Weierstrass::from_invariants(reference_invariants());
    ch.below("reference real period ≈ 2.81", w.map(|w| (w.lattice().omega1.re - 2.81).abs()), 5e-3);
    ch.out
}

trait MaxRel {
    fn max_rel(&self, other: &Self) -> f64;
}

impl MaxRel for ComplexValue {
    fn max_rel(&self, other: &Self) -> f64 {
        (self - other).norm() / (1.0 + other.norm())
    }
}

fn modular_checks() -> Vec<CheckResult> {
    let mut ch = Checks::new("modular");
    let inv = reference_invariants();
    let lat = periods_from_invariants(inv);
    ch.below("reference τ ≈ 0.5 + 1.0327i", lat.map(|l| (l.tau - c(0.5, 1.0327)).norm()), 1e-3);
    let formula = wp_zeros_physical(inv, ZeroMethod::Continued);
    let newton = wp_zeros_physical(inv, ZeroMethod::Newton);
    ch.below("continued formula residual", formula.as_ref().map(|z| z.residual).map_err(|e| e.to_string()), 1e-10);
    let agree = match (&formula, &newton) {
        (Ok(a), Ok(b)) => Ok((a.z0 - b.z0).norm().min((a.z0 - b.minus_z0).norm())),
        (Err(e), _) | (_, Err(e)) => Err(e.to_string()),
    };
    ch.below("formula and Newton zeros agree", agree, 1e-9);
    let reference = formula.as_ref().map_err(|e| e.to_string()).and_then(|z| {
        let lat = periods_from_invariants(inv).map_err(|e| e.to_string())?;
        let target = c(1.405, 0.929);
        Ok(lat.reduce_nearest(z.z0 - target).norm().min(lat.reduce_nearest(z.z0 + target).norm()))
    });
    ch.below("reference zero ≈ ±(1.405 + 0.929i)", reference, 2e-3);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    let mut worst: Result<f64, String> = Ok(0.0);
    for _ in 0..12 {
        let inv = Invariants::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        if inv.is_degenerate() {
            continue;
        }
        let r = wp_zeros_physical(inv, ZeroMethod::Continued)
            .map(|z| z.residual / (1.0 + inv.g2.abs() + inv.g3.abs()))
            .map_err(|e| format!("{inv:?}: {e}"));
        worst = match (worst, r) {
            (Ok(a), Ok(b)) => Ok(a.max(b)),
            (Err(e), _) | (_, Err(e)) => Err(e),
        };
    }
    ch.below("zero residual on random real invariants", worst, 1e-8);
    ch.out
}

fn flow_checks() -> Vec<CheckResult> {
    let mut ch = Checks::new("flow");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 2);
    for kappa in [2.0, 3.0, 5.0, 9.5] {
        let med = match MediumParams::from_kappa(kappa) {
            Ok(m) => m,
            Err(e) => {
                ch.below::<String>(format!("medium κ={kappa}"), Err(e.to_string()), 0.0);
                continue;
            }
        };
        let gram = make_entropic_triad(med).map(|t| {
            let g = t.gram();
            let mut e = 0.0f64;
            for (i, row) in g.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    let want = if i == j { 1.0 } else { -1.0 / kappa };
                    e = e.max((v - want).abs());
                }
            }
            e
        });
        ch.below(format!("entropic triad Gram κ={kappa}"), gram, 1e-12);
        let mut worst = 0.0f64;
        let mut err = None;
        for _ in 0..8 {
            let state = FlowState {
                a: rng.gen_range(0.2..2.0),
                u: [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)],
            };
            let e = {
                let v: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
                let n = crate::flow::norm(v);
                crate::flow::scale(1.0 / n, v)
            };
            let m = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            for wv in [entropic_wave_vector(e, 1.0, state), entropic_wave_vector(e, -1.0, state), acoustic_wave_vector(e, m, state)] {
                match wv {
                    Ok(w) => {
                        let scale = 1.0 + w.lambda0.abs().powi(4) + crate::flow::norm(w.lambda_vec).powi(4);
                        worst = worst.max(dispersion(&w, state).abs() / scale);
                    }
                    Err(e) => err = Some(e.to_string()),
                }
            }
        }
        ch.below(format!("wave vectors on the characteristic cone κ={kappa}"), err.map_or(Ok(worst), Err), 1e-12);
    }
    ch.out
}

fn table3_checks() -> Vec<CheckResult> {
    let mut ch = Checks::new("table3");
    let (cc, k0) = (0.9, 0.7);
    for case in ReductionCase::all() {
        let sol = reduced_solution(case, cc, k0);
        let res = sol.map_err(|e| e.to_string()).and_then(|sol| {
            let mut worst = (0.0f64, 0.0f64);
            for k in 0..12 {
                let xi = 1.2 + 0.2 * k as f64;
                let r = kg_reduction_residual(case, &sol.h, xi).map_err(|e| e.to_string())?;
                let f = first_integral_residual(case, &sol.h, sol.constants, xi).map_err(|e| e.to_string())?;
                worst = (worst.0.max(r), worst.1.max(f));
            }
            Ok(worst)
        });
        ch.below(format!("reduced equation {case}"), res.clone().map(|w| w.0), 1e-6);
        ch.below(format!("first integral {case}"), res.map(|w| w.1), 1e-6);
    }
    // the periodic profile stays bounded: ℘ + 1/3 is bounded away from zero
    let c = resolved_c();
    let scan = Table3Profile::new(Table3Params::new(Family::Periodic1, c)).map_err(|e| e.to_string()).and_then(|p| {
        let half = 0.5 * p.real_period();
        let w = p.weierstrass().clone();
        boundedness_scan(move |x| w.wp_real(x).map(|v| v.0 + 1.0 / 3.0), (1e-3, half), 4000)
            .map(|r| r.min_val)
            .map_err(|e| e.to_string())
    });
    ch.above("min(℘ + 1/3) for the resolved periodic row", scan, 0.2);
    ch.out
}

/// Run a named suite. Deterministic: random samples use a fixed seed.
pub fn run_suite(suite: Suite) -> SuiteReport {
    let checks = match suite {
        Suite::Kernel => kernel_checks(),
        Suite::Modular => modular_checks(),
        Suite::Flow => flow_checks(),
        Suite::Table3 => table3_checks(),
        Suite::All => [kernel_checks(), modular_checks(), flow_checks(), table3_checks()].concat(),
    };
    SuiteReport { suite, checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass() {
        let rep = run_suite(Suite::All);
        let bad: Vec<_> = rep.failures().collect();
        assert!(bad.is_empty(), "{bad:#?}");
        assert!(rep.checks.len() > 20);
    }

    #[test]
    fn suite_names_round_trip() {
        for s in [Suite::Kernel, Suite::Modular, Suite::Flow, Suite::Table3, Suite::All] {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}
