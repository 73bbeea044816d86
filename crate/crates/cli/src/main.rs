//! `ellflow` command line front end.

mod config;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use ellflow::elliptic::cubic_roots;
use ellflow::families::resolved_c;
use ellflow::flow::{add, make_entropic_triad};
use ellflow::verify::{run_suite, Suite, DEFAULT_MAX_SKIPPED};
use ellflow::{
    boundedness_scan, pde_residual, periods_from_invariants, rank3_eval, wp_zeros_physical, ComplexValue, Family,
    FamilyError, FlowError, G3Convention, GridSpec, Invariants, KernelError, MediumParams, Rank3Config, SolverError,
    Vec3, VerifyError, Weierstrass, ZeroError, ZeroMethod,
};

use config::ConfigFile;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Zero(#[from] ZeroError),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("{failed} of {total} grid points failed")]
    EvalFailures { failed: usize, total: usize },
    #[error("verification failed: {0}")]
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Kernel(_) | CliError::Zero(_) => 2,
            CliError::EvalFailures { .. } => 3,
            CliError::Flow(_) => 4,
            CliError::Family(FamilyError::Flow(_)) => 4,
            CliError::Family(FamilyError::Solver(_)) | CliError::Solver(_) => 6,
            CliError::Family(FamilyError::Kernel(_)) => 2,
            CliError::Family(_) => 5,
            CliError::Usage(_) | CliError::Io(_) => 7,
            CliError::Verify(_) => 8,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "ellflow", version, about = "Elliptic solutions of the isentropic Euler equations")]
struct Cli {
    /// Flat `key = value` file; flags given on the command line win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Periods, τ, cubic roots and discriminant for (g2, g3).
    #[command(allow_negative_numbers = true)]
    Periods(InvArgs),
    /// Zeros ±z0 of ℘.
    #[command(allow_negative_numbers = true)]
    Zeros(ZerosArgs),
    /// Evaluate a rank-3 solution on a grid and write CSV.
    #[command(allow_negative_numbers = true)]
    Eval(EvalArgs),
    /// System residual of a rank-3 solution on a grid.
    #[command(allow_negative_numbers = true)]
    Residual(ResidualArgs),
    /// Scan ℘(r) + shift over a real interval.
    #[command(allow_negative_numbers = true)]
    Scan(ScanArgs),
    /// Run a named self-check suite.
    #[command(allow_negative_numbers = true)]
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct InvArgs {
    #[arg(long)]
    g2: Option<f64>,
    #[arg(long)]
    g3: Option<f64>,
}

#[derive(Args, Debug)]
struct ZerosArgs {
    #[command(flatten)]
    inv: InvArgs,
    /// hypergeometric, newton or both
    #[arg(long)]
    method: Option<String>,
    /// Restrict the hypergeometric formula to |s| < 1, |1 − s| < 1.
    #[arg(long)]
    strict: bool,
}

#[derive(Args, Debug)]
struct FamilyArgs {
    /// 1, 2a, 2b, 2c or 3
    #[arg(long)]
    family: Option<String>,
    /// Amplitudes C1,C2,C3 (a single value applies to all three).
    #[arg(long = "C")]
    c: Option<String>,
    #[arg(long)]
    k0: Option<f64>,
    #[arg(long)]
    e0: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    /// first-integral or tabulated
    #[arg(long)]
    convention: Option<String>,
    /// t0:t1:nt,lo:hi:nx
    #[arg(long)]
    grid: Option<String>,
    /// Offset x,y,z added to every spatial grid point.
    #[arg(long)]
    origin: Option<String>,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[command(flatten)]
    fam: FamilyArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ResidualArgs {
    #[command(flatten)]
    fam: FamilyArgs,
    #[arg(long)]
    fd_step: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_skipped: Option<f64>,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[command(flatten)]
    inv: InvArgs,
    #[arg(long)]
    shift: Option<f64>,
    /// lo:hi, defaults to [0.01, ω1 − 0.01]
    #[arg(long)]
    interval: Option<String>,
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// kernel, modular, flow, table3 or all
    #[arg(long)]
    suite: Option<String>,
}

fn cjson(z: ComplexValue) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn print(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable record"));
}

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("{what}: cannot parse `{s}` as a number")))
}

fn parse_list(s: &str, what: &str) -> Result<Vec<f64>> {
    s.split(',').map(|p| parse_f64(p, what)).collect()
}

fn parse_count(s: &str, what: &str) -> Result<usize> {
    s.trim().parse::<usize>().map_err(|_| CliError::Usage(format!("{what}: cannot parse `{s}` as a count")))
}

/// `t0:t1:nt,lo:hi:nx`.
fn parse_grid(s: &str) -> Result<(f64, f64, usize, f64, f64, usize)> {
    let bad = || CliError::Usage(format!("--grid `{s}`: expected t0:t1:nt,lo:hi:nx"));
    let (tp, xp) = s.split_once(',').ok_or_else(bad)?;
    let tp: Vec<&str> = tp.split(':').collect();
    let xp: Vec<&str> = xp.split(':').collect();
    if tp.len() != 3 || xp.len() != 3 {
        return Err(bad());
    }
    let g = (
        parse_f64(tp[0], "--grid")?,
        parse_f64(tp[1], "--grid")?,
        parse_count(tp[2], "--grid")?,
        parse_f64(xp[0], "--grid")?,
        parse_f64(xp[1], "--grid")?,
        parse_count(xp[2], "--grid")?,
    );
    if g.2 == 0 || g.5 == 0 {
        return Err(CliError::Usage("--grid: point counts must be positive".into()));
    }
    Ok(g)
}

fn invariants(args: &InvArgs, conf: &ConfigFile) -> Result<Invariants> {
    let g2 = conf.pick(args.g2, "g2")?.unwrap_or(4.0 / 3.0);
    let g3 = conf.pick(args.g3, "g3")?.unwrap_or(1.0);
    if !g2.is_finite() || !g3.is_finite() {
        return Err(CliError::Usage("invariants must be finite".into()));
    }
    Ok(Invariants::new(g2, g3))
}

fn cmd_periods(args: InvArgs, conf: &ConfigFile) -> Result<Value> {
    let inv = invariants(&args, conf)?;
    let lat = periods_from_invariants(inv)?;
    let roots = cubic_roots(inv);
    Ok(json!({
        "g2": inv.g2,
        "g3": inv.g3,
        "discriminant": inv.discriminant(),
        "omega1": cjson(lat.omega1),
        "omega2": cjson(lat.omega2),
        "tau": cjson(lat.tau),
        "roots": [cjson(roots.e1), cjson(roots.e2), cjson(roots.e3)],
    }))
}

fn zero_record(inv: Invariants, method: ZeroMethod) -> Result<(Value, ComplexValue)> {
    let zs = wp_zeros_physical(inv, method)?;
    let lat = periods_from_invariants(inv)?;
    // representative with Im z0 ≥ 0 and Re z0 in (−ω1/2, ω1/2]; ω1 is real here
    let mut z = lat.reduce_nearest(zs.z0);
    if z.im < 0.0 {
        z = -z;
    }
    let om = lat.omega1.re;
    z.re = z.re.rem_euclid(om);
    if z.re > 0.5 * om * (1.0 + 1e-9) {
        z.re -= om;
    }
    let name = match zs.method {
        ZeroMethod::Hypergeometric => "hypergeometric",
        ZeroMethod::Continued => "hypergeometric-continued",
        ZeroMethod::Newton => "newton",
    };
    let rec = json!({
        "method": name,
        "z0": cjson(z),
        "minus_z0": cjson(-z),
        "conjugate_z0": cjson(z.conj()),
        "residual": zs.residual,
    });
    Ok((rec, z))
}

fn cmd_zeros(args: ZerosArgs, conf: &ConfigFile) -> Result<Value> {
    let inv = invariants(&args.inv, conf)?;
    let method = conf.pick_str(args.method, "method")?.unwrap_or_else(|| "both".into());
    let strict = args.strict || conf.pick::<bool>(None, "strict")?.unwrap_or(false);
    let formula = if strict { ZeroMethod::Hypergeometric } else { ZeroMethod::Continued };
    let lat = periods_from_invariants(inv)?;
    let base = json!({ "g2": inv.g2, "g3": inv.g3, "omega1": cjson(lat.omega1), "omega2": cjson(lat.omega2) });
    let mut out = base.as_object().cloned().unwrap_or_default();
    match method.as_str() {
        "hypergeometric" => {
            out.insert("hypergeometric".into(), zero_record(inv, formula)?.0);
        }
        "newton" => {
            out.insert("newton".into(), zero_record(inv, ZeroMethod::Newton)?.0);
        }
        "both" => {
            let (h, zh) = zero_record(inv, formula)?;
            let (n, zn) = zero_record(inv, ZeroMethod::Newton)?;
            // ±z0 are both zeros, so the disagreement is up to sign and periods
            let d = lat.reduce_nearest(zh - zn).norm().min(lat.reduce_nearest(zh + zn).norm());
            out.insert("hypergeometric".into(), h);
            out.insert("newton".into(), n);
            out.insert("disagreement".into(), json!(d));
        }
        other => return Err(CliError::Usage(format!("--method `{other}`: expected hypergeometric, newton or both"))),
    }
    Ok(Value::Object(out))
}

struct Setup {
    cfg: Rank3Config,
    grid: GridSpec,
    origin: Vec3,
}

fn setup(fam: &FamilyArgs, conf: &ConfigFile, default_grid: &str) -> Result<Setup> {
    let family: Family = conf
        .pick_str(fam.family.clone(), "family")?
        .unwrap_or_else(|| "1".into())
        .parse()
        .map_err(|e: FamilyError| CliError::Usage(format!("--family: {e}")))?;
    let c = match conf.pick_str(fam.c.clone(), "C")? {
        Some(s) => match parse_list(&s, "--C")?.as_slice() {
            [v] => [*v; 3],
            [a, b, c] => [*a, *b, *c],
            _ => return Err(CliError::Usage("--C takes one or three values".into())),
        },
        None => [resolved_c(); 3],
    };
    let k0 = conf.pick(fam.k0, "k0")?.unwrap_or(1.0);
    let e0 = conf.pick(fam.e0, "e0")?.unwrap_or(1.0 / (12.0 * k0 * k0));
    let kappa = conf.pick(fam.kappa, "kappa")?.unwrap_or(5.0);
    let convention = match conf.pick_str(fam.convention.clone(), "convention")?.as_deref() {
        None | Some("first-integral") => G3Convention::FirstIntegral,
        Some("tabulated") => G3Convention::Tabulated,
        Some(other) => {
            return Err(CliError::Usage(format!("--convention `{other}`: expected first-integral or tabulated")))
        }
    };
    let med = MediumParams::from_kappa(kappa)?;
    let triad = make_entropic_triad(med)?;
    let cfg = Rank3Config::new(family, c, k0, e0, convention, triad, med)?;
    let grid_s = conf.pick_str(fam.grid.clone(), "grid")?.unwrap_or_else(|| default_grid.into());
    let (t0, t1, n_t, lo, hi, n_x) = parse_grid(&grid_s)?;
    let origin = match conf.pick_str(fam.origin.clone(), "origin")? {
        Some(s) => match parse_list(&s, "--origin")?.as_slice() {
            [a, b, c] => [*a, *b, *c],
            _ => return Err(CliError::Usage("--origin takes three values".into())),
        },
        None => [0.0; 3],
    };
    let grid = GridSpec { t0, t1, x_lo: add(origin, [lo; 3]), x_hi: add(origin, [hi; 3]), n_t, n_x, fd_step: 1e-3 };
    Ok(Setup { cfg, grid, origin })
}

fn cmd_eval(args: EvalArgs, conf: &ConfigFile) -> Result<Value> {
    let Setup { cfg, grid, .. } = setup(&args.fam, conf, "0:0:1,-1:1:21")?;
    let out = conf
        .pick_str(args.out.map(|p| p.to_string_lossy().into_owned()), "out")?
        .ok_or_else(|| CliError::Usage("eval needs --out PATH".into()))?;
    let rows: Vec<_> = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let (t, x) = grid.point(idx);
            (t, x, rank3_eval(&cfg, t, x))
        })
        .collect();
    let mut w = BufWriter::new(File::create(&out)?);
    writeln!(w, "t,x1,x2,x3,r1,r2,r3,a,u1,u2,u3,status")?;
    let (mut failed, mut max_a, mut max_u) = (0usize, 0.0f64, 0.0f64);
    for (t, x, res) in &rows {
        match res {
            Ok((s, r)) => {
                max_a = max_a.max(s.a.abs());
                max_u = max_u.max(ellflow::flow::norm(s.u));
                writeln!(
                    w,
                    "{t},{},{},{},{},{},{},{},{},{},{},ok",
                    x[0], x[1], x[2], r[0], r[1], r[2], s.a, s.u[0], s.u[1], s.u[2]
                )?;
            }
            Err(_) => {
                failed += 1;
                writeln!(w, "{t},{},{},{},NaN,NaN,NaN,NaN,NaN,NaN,NaN,fail", x[0], x[1], x[2])?;
            }
        }
    }
    w.flush()?;
    let total = rows.len();
    if failed as f64 > 0.01 * total as f64 {
        return Err(CliError::EvalFailures { failed, total });
    }
    Ok(json!({
        "out": out,
        "family": cfg.family.tag(),
        "rows": total,
        "failed": failed,
        "max_abs_a": max_a,
        "max_abs_u": max_u,
    }))
}

fn cmd_residual(args: ResidualArgs, conf: &ConfigFile) -> Result<Value> {
    let Setup { cfg, grid, origin } = setup(&args.fam, conf, "0:0.1:9,-0.25:0.25:9")?;
    let h = conf.pick(args.fd_step, "fd_step")?.unwrap_or(1e-3);
    let tol = conf.pick(args.tol, "tol")?.unwrap_or(1e-5);
    let max_skipped = conf.pick(args.max_skipped, "max_skipped")?.unwrap_or(DEFAULT_MAX_SKIPPED);
    let med = cfg.med;
    let sol = |t: f64, x: Vec3| rank3_eval(&cfg, t, x).map(|p| p.0);
    let rep = pde_residual(sol, med, grid.with_fd_step(h))?;
    let passed = rep.passes(tol, max_skipped);
    let mut v = json!({
        "family": cfg.family.tag(),
        "origin": origin,
        "fd_step": h,
        "tol": tol,
        "passed": passed,
        "report": rep,
    });
    if let Some(list) = v.pointer_mut("/report/skipped").and_then(Value::as_array_mut) {
        list.truncate(20);
    }
    if !passed {
        print(&v);
        return Err(CliError::Failed(format!(
            "max residual {:e} (tol {tol:e}), skipped fraction {}",
            rep.max_abs,
            rep.skipped_fraction()
        )));
    }
    Ok(v)
}

fn cmd_scan(args: ScanArgs, conf: &ConfigFile) -> Result<Value> {
    let inv = invariants(&args.inv, conf)?;
    let w = Weierstrass::from_invariants(inv)?;
    let shift = conf.pick(args.shift, "shift")?.unwrap_or(1.0 / 3.0);
    let samples = conf.pick(args.samples, "samples")?.unwrap_or(1000);
    let om = w.lattice().omega1.re;
    let (lo, hi) = match conf.pick_str(args.interval, "interval")? {
        Some(s) => {
            let (a, b) = s.split_once(':').ok_or_else(|| CliError::Usage(format!("--interval `{s}`: expected lo:hi")))?;
            (parse_f64(a, "--interval")?, parse_f64(b, "--interval")?)
        }
        None => (0.01, om - 0.01),
    };
    if !(lo < hi) {
        return Err(CliError::Usage(format!("--interval: need lo < hi, got {lo}:{hi}")));
    }
    let rep = boundedness_scan(|x| w.wp_real(x).map(|p| p.0 + shift), (lo, hi), samples)?;
    Ok(json!({ "g2": inv.g2, "g3": inv.g3, "shift": shift, "interval": [lo, hi], "report": rep }))
}

fn cmd_verify(args: VerifyArgs, conf: &ConfigFile) -> Result<Value> {
    let suite: Suite = conf
        .pick_str(args.suite, "suite")?
        .unwrap_or_else(|| "all".into())
        .parse()
        .map_err(CliError::Usage)?;
    let rep = run_suite(suite);
    let v = json!({ "suite": suite.name(), "passed": rep.passed(), "checks": rep.checks });
    if let Some(first) = rep.failures().next() {
        print(&v);
        return Err(CliError::Failed(format!("{}: {} (value {}, bound {})", first.suite, first.name, first.value, first.tolerance)));
    }
    Ok(v)
}

fn run(cli: Cli) -> Result<Value> {
    let conf = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    match cli.cmd {
        Cmd::Periods(a) => cmd_periods(a, &conf),
        Cmd::Zeros(a) => cmd_zeros(a, &conf),
        Cmd::Eval(a) => cmd_eval(a, &conf),
        Cmd::Residual(a) => cmd_residual(a, &conf),
        Cmd::Scan(a) => cmd_scan(a, &conf),
        Cmd::Verify(a) => cmd_verify(a, &conf),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 7 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(v) => {
            print(&v);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
