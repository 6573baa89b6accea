//! Batch command-line interface. Every subcommand writes CSV to a file or to
//! standard output.
//!
//! Exit codes: `0` success, `1` invalid input or a failed verification row,
//! `2` numerical non-convergence.

use std::collections::HashMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::asymlag::{
    fluctuation_determinant, saddle_density, saddle_point, saddle_regime_map, tail_constant, tail_density, SaddleInput,
};
use crate::error::Error;
use crate::fracops::{diffusion_residual, dpdt_quadrature, frac_laplacian, GridFunction};
use crate::hfox::{hfox_scale_identity_check, stable_density_hfox, HFoxSpec};
use crate::mcstable::{hill_tail_index, ks_against_numeric, sample, stability_check, GENERATOR_ID};
use crate::params::{EvalResult, Method, StableParams};
use crate::propagator::{
    cdf_1d, density_1d, density_1d_ibp, density_3d_derivative, density_nd, peak_value, peak_value_nd, DensityQuery,
};

/// Environment variable holding the default worker count.
pub const THREADS_ENV: &str = "LEVYPROP_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Subcommand {
    Density,
    Table,
    Verify,
    Sample,
    Residual,
    SaddleRegime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodChoice {
    Auto,
    Quad,
    Hfox,
    Tail,
    Peak,
    Saddle,
}

#[derive(Debug, Parser)]
#[command(name = "levyprop", version, about = "Propagators of symmetric alpha-stable Levy flights")]
struct Args {
    #[arg(value_enum)]
    subcommand: Subcommand,
    /// Stability index in (0, 2].
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    /// Reduced scale a > 0.
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    /// Spatial dimension.
    #[arg(long)]
    dim: Option<u32>,
    /// Evaluation points: `x1,x2,...` or `start:stop:step`.
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    #[arg(long, value_enum)]
    method: Option<MethodChoice>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    count: Option<usize>,
    /// Output CSV path; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Key=value file mirroring the flags; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Verification suite (verify only).
    #[arg(long)]
    suite: Option<String>,
    /// Finite-difference step in a (residual, verify).
    #[arg(long)]
    delta: Option<f64>,
    /// Grid size per axis (saddle-regime).
    #[arg(long)]
    grid: Option<usize>,
    /// Worker threads; overrides the environment default.
    #[arg(long)]
    threads: Option<usize>,
}

/// A fully resolved run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub subcommand: Subcommand,
    pub alpha: Option<f64>,
    pub a: f64,
    pub dim: u32,
    pub points: Vec<f64>,
    pub method: MethodChoice,
    pub tol: f64,
    pub seed: u64,
    pub count: Option<usize>,
    pub output: Option<PathBuf>,
    pub suite: String,
    pub delta: f64,
    pub grid: usize,
    pub threads: Option<usize>,
}

#[derive(Debug)]
enum CliError {
    Invalid(String),
    Numeric(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Convergence { .. } => CliError::Numeric(e),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn invalid<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Invalid(msg.into()))
}

/// Parses a point list: comma-separated values or `start:stop:step`.
pub fn parse_points(s: &str) -> std::result::Result<Vec<f64>, String> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("bad number '{}' in points", t.trim()));
    let pts = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("range '{s}' must be start:stop:step"));
        }
        let (start, stop, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if !(step > 0.0) || stop < start {
            return Err(format!("invalid range '{s}'"));
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
        if n > 10_000_000 {
            return Err(format!("range '{s}' has too many points"));
        }
        (0..n).map(|i| start + step * i as f64).collect()
    } else {
        s.split(',').map(num).collect::<std::result::Result<Vec<_>, _>>()?
    };
    if pts.is_empty() || pts.iter().any(|x| !x.is_finite()) {
        return Err(format!("invalid points '{s}'"));
    }
    Ok(pts)
}

fn read_config_file(path: &PathBuf) -> CliResult<HashMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .or_else(|e| invalid(format!("cannot read config {}: {e}", path.display())))?;
    let mut map = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return invalid(format!("{}:{}: expected key=value", path.display(), i + 1));
        };
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn from_file<T: std::str::FromStr>(map: &mut HashMap<String, String>, key: &str) -> CliResult<Option<T>> {
    match map.remove(key) {
        None => Ok(None),
        Some(v) => v.parse().map(Some).or_else(|_| invalid(format!("config: bad value '{v}' for {key}"))),
    }
}

fn resolve(args: Args) -> CliResult<RunConfig> {
    let mut file = match &args.config {
        Some(p) => read_config_file(p)?,
        None => HashMap::new(),
    };
    let subcommand = match from_file::<String>(&mut file, "subcommand")? {
        Some(s) if Subcommand::from_str(&s, true).ok() != Some(args.subcommand) => {
            return invalid(format!("config names subcommand '{s}', command line '{:?}'", args.subcommand));
        }
        _ => args.subcommand,
    };
    let alpha = args.alpha.or(from_file(&mut file, "alpha")?);
    let a = args.a.or(from_file(&mut file, "a")?).unwrap_or(1.0);
    let dim = args.dim.or(from_file(&mut file, "dim")?).unwrap_or(1);
    let x = args.x.or(from_file(&mut file, "x")?);
    let method = match args.method {
        Some(m) => m,
        None => match from_file::<String>(&mut file, "method")? {
            Some(s) => MethodChoice::from_str(&s, true).or_else(|_| invalid(format!("config: unknown method '{s}'")))?,
            None => MethodChoice::Auto,
        },
    };
    let tol = args.tol.or(from_file(&mut file, "tol")?).unwrap_or(1e-10);
    let seed = args.seed.or(from_file(&mut file, "seed")?).unwrap_or(0);
    let count = args.count.or(from_file(&mut file, "count")?);
    let output = args.output.or(from_file(&mut file, "output")?);
    let suite = args.suite.or(from_file(&mut file, "suite")?).unwrap_or_else(|| "all".into());
    let delta = args.delta.or(from_file(&mut file, "delta")?).unwrap_or(1e-4);
    let grid = args.grid.or(from_file(&mut file, "grid")?).unwrap_or(20);
    let threads = args.threads.or(from_file(&mut file, "threads")?);
    if let Some(k) = file.keys().min() {
        return invalid(format!("config: unknown key '{k}'"));
    }

    let points = match x {
        Some(s) => parse_points(&s).or_else(invalid)?,
        None => Vec::new(),
    };
    if let Some(al) = alpha {
        StableParams::new(al, a)?;
    } else if !(a > 0.0 && a.is_finite()) {
        return invalid(format!("a must be positive and finite, got {a}"));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return invalid(format!("tol must be positive, got {tol}"));
    }
    if dim < 1 {
        return invalid("dim must be >= 1");
    }
    if threads == Some(0) {
        return invalid("threads must be >= 1");
    }
    let needs_alpha = !matches!(subcommand, Subcommand::Verify | Subcommand::SaddleRegime);
    if needs_alpha && alpha.is_none() {
        return invalid("--alpha is required");
    }
    if matches!(subcommand, Subcommand::Density | Subcommand::Table | Subcommand::Residual) && points.is_empty() {
        return invalid("--x is required");
    }
    if subcommand == Subcommand::Sample && count.unwrap_or(0) < 1 {
        return invalid("sample requires --count >= 1");
    }
    if method == MethodChoice::Saddle && !alpha.is_some_and(|al| al > 1.0 && al <= 2.0) {
        return invalid("method=saddle requires 1 < alpha <= 2");
    }
    if matches!(method, MethodChoice::Hfox | MethodChoice::Tail | MethodChoice::Saddle) && dim != 1 {
        return invalid("this method is one-dimensional; use --dim 1");
    }
    if method == MethodChoice::Peak && points.iter().any(|&x| x != 0.0) {
        return invalid("method=peak evaluates only x=0");
    }
    if grid < 2 {
        return invalid("grid must be >= 2");
    }
    Ok(RunConfig {
        subcommand,
        alpha,
        a,
        dim,
        points,
        method,
        tol,
        seed,
        count,
        output,
        suite,
        delta,
        grid,
        threads,
    })
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Evaluates at every point in parallel, keeping input order.
fn par_rows<F>(points: &[f64], f: F) -> CliResult<Vec<String>>
where
    F: Fn(f64) -> CliResult<String> + Sync,
{
    points.par_iter().map(|&x| f(x)).collect()
}

fn params(cfg: &RunConfig) -> CliResult<StableParams> {
    let alpha = cfg.alpha.ok_or_else(|| CliError::Invalid("--alpha is required".into()))?;
    Ok(StableParams::new(alpha, cfg.a)?)
}

/// The density at one point by the requested route.
pub fn evaluate(x: f64, params: &StableParams, dim: u32, method: MethodChoice, tol: f64) -> crate::Result<EvalResult> {
    let alpha = params.alpha();
    let r = x.abs();
    let quad = || {
        let q = DensityQuery::new(r, dim, *params, tol)?;
        if dim == 1 {
            density_1d(&q)
        } else {
            density_nd(&q)
        }
    };
    let peak = || {
        let v = if dim == 1 { peak_value(params) } else { peak_value_nd(params, dim)? };
        Ok(EvalResult::exact(v, Method::Peak))
    };
    match method {
        MethodChoice::Auto => {
            if x == 0.0 {
                peak()
            } else if dim == 1 && alpha > 1.0 && r / params.width() <= 10.0 {
                stable_density_hfox(x, params)
            } else {
                quad()
            }
        }
        MethodChoice::Quad => quad(),
        MethodChoice::Hfox => stable_density_hfox(x, params),
        MethodChoice::Peak => peak(),
        MethodChoice::Tail => Ok(EvalResult {
            value: tail_density(x, params)?,
            abs_err_estimate: f64::INFINITY,
            method: Method::Tail,
            degenerate: false,
        }),
        MethodChoice::Saddle => saddle_density(x, params),
    }
}

fn cmd_density(cfg: &RunConfig) -> CliResult<String> {
    let p = params(cfg)?;
    let rows = par_rows(&cfg.points, |x| {
        let e = evaluate(x, &p, cfg.dim, cfg.method, cfg.tol)?;
        Ok(format!("{},{},{},{}\n", num(x), num(e.value), num(e.abs_err_estimate), e.method))
    })?;
    Ok(format!("x,value,abs_err,method\n{}", rows.concat()))
}

fn cmd_table(cfg: &RunConfig) -> CliResult<String> {
    let p = params(cfg)?;
    if cfg.dim != 1 {
        return invalid("table is one-dimensional; use --dim 1");
    }
    let rows = par_rows(&cfg.points, |x| {
        let mut line = num(x);
        for m in [MethodChoice::Quad, MethodChoice::Hfox, MethodChoice::Tail, MethodChoice::Saddle] {
            line.push(',');
            match evaluate(x, &p, 1, m, cfg.tol) {
                Ok(e) => line.push_str(&num(e.value)),
                Err(e @ Error::Convergence { .. }) if m == MethodChoice::Quad => return Err(CliError::Numeric(e)),
                Err(_) => {}
            }
        }
        line.push('\n');
        Ok(line)
    })?;
    Ok(format!("x,quad,hfox,tail,saddle\n{}", rows.concat()))
}

fn cmd_sample(cfg: &RunConfig) -> CliResult<String> {
    let alpha = cfg.alpha.unwrap_or(f64::NAN);
    let count = cfg.count.unwrap_or(0);
    let batch = sample(alpha, cfg.a, count, cfg.seed)?;
    let mut out = String::with_capacity(24 * count + 128);
    writeln!(
        out,
        "# alpha={},a={},seed={},count={},generator={}",
        num(alpha),
        num(cfg.a),
        cfg.seed,
        count,
        GENERATOR_ID
    )
    .ok();
    out.push_str("draw\n");
    for d in &batch.draws {
        out.push_str(&num(*d));
        out.push('\n');
    }
    Ok(out)
}

fn cmd_residual(cfg: &RunConfig) -> CliResult<String> {
    let p = params(cfg)?;
    let d = cfg.delta;
    if !(d > 0.0 && d < cfg.a) {
        return invalid(format!("delta must lie in (0, a), got {d}"));
    }
    let tol = cfg.tol.min(1e-13);
    let (up, down) = (p.with_scale(cfg.a + d)?, p.with_scale(cfg.a - d)?);
    let rows = par_rows(&cfg.points, |x| {
        let pu = density_1d(&DensityQuery::one_d(x, up, tol)?)?.value;
        let pd = density_1d(&DensityQuery::one_d(x, down, tol)?)?.value;
        let fd = (pu - pd) / (2.0 * d);
        let q = dpdt_quadrature(x, &p, tol)?;
        Ok(format!("{},{},{},{}\n", num(x), num(fd), num(q), num((fd - q).abs())))
    })?;
    Ok(format!("x,fd_dt,quad_dt,abs_diff\n{}", rows.concat()))
}

/// Default axes of the saddle-regime map: α evenly on `[1.05, 2]`, ρ
/// log-spaced on `[10^{-2}, 10^2]`.
pub fn regime_axes(grid: usize) -> (Vec<f64>, Vec<f64>) {
    let g = (grid - 1) as f64;
    let alphas = (0..grid).map(|i| 1.05 + 0.95 * i as f64 / g).collect();
    let rhos = (0..grid).map(|i| 10f64.powf(-2.0 + 4.0 * i as f64 / g)).collect();
    (alphas, rhos)
}

fn cmd_saddle_regime(cfg: &RunConfig) -> CliResult<String> {
    let (alphas, rhos) = regime_axes(cfg.grid);
    let blocks: Vec<CliResult<String>> = alphas
        .par_iter()
        .map(|&al| {
            let mut s = String::new();
            for c in saddle_regime_map(&[al], &rhos, cfg.a, cfg.tol)? {
                writeln!(s, "{},{},{}", num(c.alpha), num(c.rho), num(c.rel_err)).ok();
            }
            Ok(s)
        })
        .collect();
    let body: Vec<String> = blocks.into_iter().collect::<CliResult<_>>()?;
    Ok(format!("alpha,rho,rel_error\n{}", body.concat()))
}

/// One row of a verification suite.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub observed: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `observed <= threshold`.
    fn at_most(name: impl Into<String>, observed: f64, threshold: f64) -> Self {
        Self { name: name.into(), observed, threshold, pass: observed <= threshold }
    }
}

pub const SUITES: [&str; 8] = ["peak", "gaussian", "routes", "tail", "normalization", "fracops", "saddle", "mc"];

fn quad_1d(x: f64, p: StableParams, tol: f64) -> crate::Result<f64> {
    Ok(density_1d(&DensityQuery::one_d(x, p, tol)?)?.value)
}

fn max_over<F: Fn(f64) -> crate::Result<f64> + Sync>(xs: &[f64], f: F) -> crate::Result<f64> {
    let v: Vec<f64> = xs.par_iter().map(|&x| f(x)).collect::<crate::Result<_>>()?;
    Ok(v.into_iter().fold(0.0, f64::max))
}

/// Runs one named suite at `(alpha, a)`.
pub fn run_suite(suite: &str, alpha: f64, a: f64, seed: u64, count: usize, delta: f64) -> crate::Result<Vec<Check>> {
    let p = StableParams::new(alpha, a)?;
    let tol = 1e-12;
    let mut out = Vec::new();
    match suite {
        "peak" => {
            let d = (quad_1d(0.0, p, tol)? - peak_value(&p)).abs();
            out.push(Check::at_most("peak_abs_err", d, 1e-10));
        }
        "gaussian" => {
            let g = StableParams::new(2.0, a)?;
            for n in [1u32, 2, 3, 5] {
                let e = max_over(&[0.0, 0.5, 1.0, 2.0], |r| {
                    let exact = (4.0 * std::f64::consts::PI * a).powf(-0.5 * n as f64) * (-r * r / (4.0 * a)).exp();
                    let v = if r == 0.0 {
                        peak_value_nd(&g, n)?
                    } else {
                        density_nd(&DensityQuery::new(r, n, g, tol)?)?.value
                    };
                    Ok(((v - exact) / exact).abs())
                })?;
                out.push(Check::at_most(format!("gaussian_nd_rel_err_n{n}"), e, 1e-8));
            }
        }
        "routes" => {
            if alpha > 1.0 {
                let e = max_over(&[0.0, 0.5, 1.0, 2.0, 5.0, 10.0], |x| {
                    Ok((stable_density_hfox(x, &p)?.value - quad_1d(x, p, tol)?).abs())
                })?;
                out.push(Check::at_most("hfox_vs_quad_abs", e, 1e-8));
                let spec = HFoxSpec::stable_density(alpha)?;
                let s = hfox_scale_identity_check(&spec, 0.8, alpha)?;
                out.push(Check::at_most("hfox_scale_identity", s, 1e-8));
            }
            let e = max_over(&[0.5, 1.0, 2.0, 5.0], |x| {
                Ok((density_1d_ibp(&DensityQuery::one_d(x, p, tol)?)?.value - quad_1d(x, p, tol)?).abs())
            })?;
            out.push(Check::at_most("ibp_vs_quad_abs", e, 1e-8));
            let e = max_over(&[0.5, 1.0, 2.0], |r| {
                let q = DensityQuery::new(r, 3, p, tol)?;
                Ok((density_3d_derivative(&q)?.value - density_nd(&q)?.value).abs())
            })?;
            out.push(Check::at_most("nd3_derivative_vs_hankel_abs", e, 1e-6));
        }
        "tail" => {
            if alpha > 1.0 && alpha < 2.0 {
                let errs: Vec<f64> = [20.0, 30.0, 50.0]
                    .par_iter()
                    .map(|&x| {
                        let exact = quad_1d(x, p, tol)?;
                        Ok(((tail_density(x, &p)? - exact) / exact).abs())
                    })
                    .collect::<crate::Result<_>>()?;
                out.push(Check::at_most("tail_rel_err_x20", errs[0], 0.01));
                out.push(Check::at_most("tail_rel_err_x50", errs[2], 0.002));
                let mono = errs[0] > errs[1] && errs[1] > errs[2];
                out.push(Check { name: "tail_rel_err_decreasing".into(), observed: mono as u8 as f64, threshold: 1.0, pass: mono });
            }
        }
        "normalization" => {
            if alpha > 1.0 && alpha < 2.0 {
                out.push(Check::at_most("normalization_abs_err", normalization_error(&p, 50.0, tol)?, 1e-6));
            }
        }
        "fracops" => {
            let l = 2.0 * std::f64::consts::PI;
            let g = GridFunction::from_fn(l, 64, |x| Complex64::from_polar(1.0, 3.0 * x))?;
            let lap = frac_laplacian(&g, alpha)?;
            let lam = 3f64.powf(alpha);
            let e = lap.values().iter().zip(g.values()).map(|(u, v)| (u - v * lam).norm()).fold(0.0, f64::max);
            out.push(Check::at_most("plane_wave_eigen_err", e, 1e-12));
            if delta < a {
                let r = diffusion_residual(&p, &[0.0, 0.5, 1.0, 2.0, 5.0], delta)?;
                out.push(Check::at_most("diffusion_residual", r, 1e-6));
            }
        }
        "saddle" => {
            if alpha > 1.0 && alpha <= 2.0 {
                let s = SaddleInput::with_gaussian_end(alpha, 1.0)?;
                out.push(Check::at_most("saddle_residual", saddle_point(&s).residual(&s).norm(), 1e-12));
            }
            let g = StableParams::new(2.0, a)?;
            let e = max_over(&[0.5, 1.0, 2.0, 5.0], |x| {
                let exact = (4.0 * std::f64::consts::PI * a).powf(-0.5) * (-x * x / (4.0 * a)).exp();
                Ok(((saddle_density(x, &g)?.value - exact) / exact).abs())
            })?;
            out.push(Check::at_most("saddle_gaussian_rel_err", e, 1e-12));
            let mut worst = 0.0f64;
            for n in 2..=64 {
                worst = worst.max((fluctuation_determinant(n)? - n as f64).abs());
            }
            out.push(Check::at_most("fluctuation_determinant_err", worst, 1e-9));
        }
        "mc" => {
            let batch = sample(alpha, a, count, seed)?;
            out.push(Check::at_most("ks_vs_cdf", ks_against_numeric(&batch, 1e-10)?, 0.002));
            out.push(Check::at_most("stability_ks_m2", stability_check(alpha, 2, count, seed)?, 0.003));
            if alpha > 1.0 && alpha < 2.0 {
                let h = hill_tail_index(&batch.draws, 0.01)?;
                out.push(Check::at_most("hill_abs_err", (h - alpha).abs(), 0.1));
            }
        }
        other => return Err(Error::Domain(format!("unknown suite '{other}'"))),
    }
    Ok(out)
}

/// `|∫_{−L}^{L} P + 2∫_L^∞ tail − 1|`, the tail taken from the leading
/// power law.
pub fn normalization_error(p: &StableParams, l: f64, tol: f64) -> crate::Result<f64> {
    let inner = 2.0 * cdf_1d(l, p, tol)? - 1.0;
    let alpha = p.alpha();
    let tails = 2.0 * p.a() * tail_constant(alpha)? / (alpha * l.powf(alpha));
    Ok((inner + tails - 1.0).abs())
}

fn cmd_verify(cfg: &RunConfig) -> CliResult<(String, bool)> {
    if cfg.suite == "saddle-regime" {
        return Ok((cmd_saddle_regime(cfg)?, true));
    }
    let alpha = cfg.alpha.unwrap_or(1.5);
    let suites: Vec<&str> = if cfg.suite == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&cfg.suite.as_str()) {
        vec![cfg.suite.as_str()]
    } else {
        return invalid(format!("unknown suite '{}'", cfg.suite));
    };
    let count = cfg.count.unwrap_or(1_000_000);
    if suites.contains(&"mc") && count < 10_000 {
        return invalid("the mc suite needs --count >= 10000");
    }
    let mut out = String::from("check_name,observed,threshold,pass\n");
    let mut all = true;
    for s in suites {
        for c in run_suite(s, alpha, cfg.a, cfg.seed, count, cfg.delta)? {
            all &= c.pass;
            writeln!(out, "{},{},{},{}", c.name, num(c.observed), num(c.threshold), c.pass).ok();
        }
    }
    Ok((out, all))
}

fn execute(cfg: &RunConfig) -> CliResult<i32> {
    let (csv, ok) = match cfg.subcommand {
        Subcommand::Density => (cmd_density(cfg)?, true),
        Subcommand::Table => (cmd_table(cfg)?, true),
        Subcommand::Sample => (cmd_sample(cfg)?, true),
        Subcommand::Residual => (cmd_residual(cfg)?, true),
        Subcommand::SaddleRegime => (cmd_saddle_regime(cfg)?, true),
        Subcommand::Verify => cmd_verify(cfg)?,
    };
    match &cfg.output {
        Some(path) => std::fs::write(path, csv).or_else(|e| invalid(format!("cannot write {}: {e}", path.display())))?,
        None => {
            use std::io::Write;
            let mut so = std::io::stdout().lock();
            so.write_all(csv.as_bytes()).and_then(|_| so.flush()).or_else(|e| invalid(format!("stdout: {e}")))?;
        }
    }
    if ok {
        Ok(0)
    } else {
        eprintln!("levyprop: one or more checks failed");
        Ok(1)
    }
}

fn worker_count(cfg: &RunConfig) -> CliResult<Option<usize>> {
    if let Some(t) = cfg.threads {
        return Ok(Some(t));
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => invalid(format!("{THREADS_ENV} must be a positive integer, got '{v}'")),
        },
        Err(_) => Ok(None),
    }
}

/// Parses `args` (including the program name), runs, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let parsed = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let msg = e.to_string();
            eprintln!("levyprop: {}", msg.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: "));
            return 1;
        }
    };
    let result = resolve(parsed).and_then(|cfg| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(worker_count(&cfg)?.unwrap_or(0))
            .build()
            .or_else(|e| invalid(format!("thread pool: {e}")))?;
        pool.install(|| execute(&cfg))
    });
    match result {
        Ok(code) => code,
        Err(CliError::Invalid(m)) => {
            eprintln!("levyprop: {m}");
            1
        }
        Err(CliError::Numeric(e)) => {
            eprintln!("levyprop: {e}");
            2
        }
    }
}
