//! Experiment sweeps producing CSV: convergence, conditioning, exit times, single solves.
//!
//! Sweeps over `(scheme, α, N)` run in parallel; rows are always emitted in
//! sorted order so output is byte-identical between runs.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Deserialize;

use crate::assembly::{assemble, AssembledSystem, AssemblyOptions, SchemeId};
use crate::error::{Error, Result};
use crate::fraccalc::{DiffusionSpec, Evaluable};
use crate::numerics::{condition_number, fit_growth, fit_rate, l2_error, solve_system, NumericalSolution};
use crate::problems::{catalog_problem, getoor_exact, laplacian_problem, manufactured_problem, ProblemSpec};

pub const DEFAULT_NS: [usize; 7] = [8, 12, 16, 24, 32, 48, 64];
pub const DEFAULT_ALPHAS: [f64; 4] = [0.2, 0.7, 1.3, 1.8];
pub const MFET_GRID: usize = 201;
pub const MFET_DEFAULT_N: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Convergence,
    Condition,
    Mfet,
    Solve,
}

/// Source term of an inline problem.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    /// `rhs ≡ c` in the normalized equation.
    Constant(f64),
    /// `(-Δ)^{α/2} u = c`; the exact solution is `c` times the Getoor profile.
    Laplacian(f64),
    /// `u = (1+x)^a (1-x)^b` with its manufactured right-hand side.
    Manufactured([f64; 2]),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InlineProblem {
    #[serde(default)]
    pub p: Option<f64>,
    #[serde(default)]
    pub q: Option<f64>,
    #[serde(default)]
    pub d: f64,
    pub source: Source,
}

/// Drift value for exit-time runs: a number or `"cos"` for `cos(πα/2)`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Drift {
    Value(f64),
    Named(String),
}

impl Drift {
    fn resolve(&self, alpha: f64) -> Result<f64> {
        match self {
            Drift::Value(v) => Ok(*v),
            Drift::Named(s) if s == "cos" => Ok((std::f64::consts::PI * alpha / 2.0).cos()),
            Drift::Named(s) => Err(Error::Config {
                key: "drift".into(),
                msg: format!("expected a number or \"cos\", got \"{s}\""),
            }),
        }
    }

    fn label(&self) -> String {
        match self {
            Drift::Value(v) => format!("{v:.16e}"),
            Drift::Named(s) => s.clone(),
        }
    }
}

/// JSON experiment description. Every key is optional except where a command needs it.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Option<Command>,
    pub schemes: Option<Vec<u8>>,
    pub alphas: Option<Vec<f64>>,
    #[serde(rename = "N")]
    pub ns: Option<Vec<usize>>,
    pub problem: Option<String>,
    pub inline: Option<InlineProblem>,
    pub output: Option<String>,
    pub quadrature_slack: Option<usize>,
    pub drifts: Option<Vec<Drift>>,
}

fn config_err(key: &str, msg: impl Into<String>) -> Error {
    Error::Config {
        key: key.into(),
        msg: msg.into(),
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            let msg = e.to_string();
            let key = msg
                .split('`')
                .nth(1)
                .filter(|_| msg.starts_with("unknown field"))
                .unwrap_or("<document>")
                .to_string();
            Error::Config { key, msg }
        })
    }

    pub fn schemes(&self) -> Result<Vec<SchemeId>> {
        match &self.schemes {
            None => Ok(SchemeId::ALL.to_vec()),
            Some(v) if v.is_empty() => Err(config_err("schemes", "empty list")),
            Some(v) => v
                .iter()
                .map(|&n| SchemeId::from_number(n).ok_or_else(|| config_err("schemes", format!("unknown scheme {n}"))))
                .collect(),
        }
    }

    pub fn alphas(&self) -> Result<Vec<f64>> {
        let v = self.alphas.clone().unwrap_or_else(|| DEFAULT_ALPHAS.to_vec());
        if v.is_empty() {
            return Err(config_err("alphas", "empty list"));
        }
        for &a in &v {
            if !(a > 0.0 && a < 2.0) || a == 1.0 {
                return Err(config_err("alphas", format!("{a} is outside (0, 2) or equal to 1")));
            }
        }
        Ok(v)
    }

    pub fn ns(&self) -> Result<Vec<usize>> {
        let v = self.ns.clone().unwrap_or_else(|| DEFAULT_NS.to_vec());
        if v.is_empty() || v[0] == 0 {
            return Err(config_err("N", "needs positive entries"));
        }
        if v.windows(2).any(|w| w[0] >= w[1]) {
            return Err(config_err("N", "must be strictly increasing"));
        }
        Ok(v)
    }

    pub fn options(&self) -> AssemblyOptions {
        let mut o = AssemblyOptions::default();
        if let Some(s) = self.quadrature_slack {
            o.load_slack = s;
        }
        o
    }

    /// The problem at `alpha`, from the catalog label or the inline block.
    pub fn problem_at(&self, alpha: f64) -> Result<ProblemSpec<f64>> {
        match (&self.problem, &self.inline) {
            (Some(_), Some(_)) => Err(config_err("inline", "give either `problem` or `inline`, not both")),
            (Some(label), None) => catalog_problem(label, alpha),
            (None, Some(ip)) => inline_problem(ip, alpha),
            (None, None) => Err(config_err("problem", "missing problem label or inline problem")),
        }
    }
}

fn inline_problem(ip: &InlineProblem, alpha: f64) -> Result<ProblemSpec<f64>> {
    let p = ip.p.unwrap_or(0.5);
    let q = ip.q.unwrap_or(1.0 - p);
    let spec = DiffusionSpec { alpha, p, q, d: ip.d };
    let mut prob = match ip.source {
        Source::Constant(c) => ProblemSpec::new("inline", spec, Evaluable::constant(c), None)?,
        Source::Laplacian(c) => {
            let mut lp = laplacian_problem(alpha, Evaluable::constant(c))?;
            if ip.p.is_some() || ip.q.is_some() {
                return Err(config_err("inline", "a laplacian source fixes p = q = 1/2"));
            }
            lp.d = ip.d;
            if ip.d == 0.0 {
                lp.exact = Some(getoor_exact(alpha).scaled(c));
            }
            lp
        }
        Source::Manufactured([a, b]) => manufactured_problem(a, b, spec)?,
    };
    prob.label = "inline".into();
    Ok(prob)
}

/// Assembles and solves one problem.
pub fn solve_problem(
    scheme: SchemeId,
    problem: &ProblemSpec<f64>,
    n: usize,
    opts: AssemblyOptions,
) -> Result<(AssembledSystem<f64>, NumericalSolution<f64>)> {
    let sys = assemble(scheme, problem.diffusion(), &problem.rhs, n, opts)?;
    let sol = solve_system(&sys)?;
    Ok((sys, sol))
}

/// Weight exponents absorbing the trial basis singularity at `-1` in L2 errors.
pub fn error_exponents(scheme: SchemeId, alpha: f64) -> (f64, f64) {
    (f64::min(0.0, 2.0 * scheme.trial_order(alpha)), 0.0)
}

/// L2 error of a solve against the problem's exact solution.
pub fn solution_error(problem: &ProblemSpec<f64>, sol: &NumericalSolution<f64>) -> Result<f64> {
    let exact = problem
        .exact
        .as_ref()
        .ok_or_else(|| config_err("problem", format!("`{}` has no exact solution", problem.label)))?;
    l2_error(sol, exact, error_exponents(sol.scheme, sol.alpha))
}

/// Runs `f` on a pool sized by `FRACSPEC_THREADS` when set.
pub fn with_thread_pool<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    let threads = std::env::var("FRACSPEC_THREADS")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0);
    match threads.and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}

fn grid(schemes: &[SchemeId], alphas: &[f64], ns: &[usize]) -> Vec<(SchemeId, f64, usize)> {
    let mut g = Vec::new();
    for &s in schemes {
        for &a in alphas {
            for &n in ns {
                g.push((s, a, n));
            }
        }
    }
    g
}

fn sorted_alphas(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| a.partial_cmp(b).expect("validated alpha"));
    v.dedup();
    v
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

/// One row of a convergence sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub scheme: SchemeId,
    pub alpha: f64,
    pub n: usize,
    pub l2_error: f64,
    pub boundary_residual: f64,
    /// Fit over this and all smaller `N` of the same series (≥ 3 samples).
    pub fitted_rate: Option<f64>,
}

pub fn convergence_rows(cfg: &ExperimentConfig) -> Result<Vec<ConvergenceRow>> {
    let schemes = cfg.schemes()?;
    let alphas = sorted_alphas(cfg.alphas()?);
    let ns = cfg.ns()?;
    let opts = cfg.options();
    for &a in &alphas {
        let p = cfg.problem_at(a)?;
        if p.exact.is_none() {
            return Err(config_err("problem", format!("`{}` has no exact solution", p.label)));
        }
    }
    let tasks = grid(&schemes, &alphas, &ns);
    let results: Vec<Result<(f64, f64)>> = with_thread_pool(|| {
        tasks
            .par_iter()
            .map(|&(s, a, n)| {
                let p = cfg.problem_at(a)?;
                let (_, sol) = solve_problem(s, &p, n, opts)?;
                Ok((solution_error(&p, &sol)?, sol.boundary_residual()))
            })
            .collect()
    });
    let mut rows = Vec::with_capacity(tasks.len());
    for (&(scheme, alpha, n), r) in tasks.iter().zip(results) {
        let (e, b) = r?;
        rows.push(ConvergenceRow {
            scheme,
            alpha,
            n,
            l2_error: e,
            boundary_residual: b,
            fitted_rate: None,
        });
    }
    for chunk in rows.chunks_mut(ns.len()) {
        for i in 0..chunk.len() {
            if i >= 2 {
                let nn: Vec<usize> = chunk[..=i].iter().map(|r| r.n).collect();
                let ee: Vec<f64> = chunk[..=i].iter().map(|r| r.l2_error).collect();
                chunk[i].fitted_rate = fit_rate(&nn, &ee).ok();
            }
        }
    }
    Ok(rows)
}

pub fn run_convergence(cfg: &ExperimentConfig) -> Result<String> {
    let mut out = String::from("scheme,alpha,N,l2_error,boundary_residual_at_+1,fitted_rate_so_far\n");
    for r in convergence_rows(cfg)? {
        let rate = r.fitted_rate.map(fmt).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.scheme,
            fmt(r.alpha),
            r.n,
            fmt(r.l2_error),
            fmt(r.boundary_residual),
            rate
        );
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionRow {
    pub scheme: SchemeId,
    pub alpha: f64,
    pub n: usize,
    pub kappa2: f64,
    /// Fit over this and all smaller `N` of the same series (≥ 2 samples).
    pub fitted_growth: Option<f64>,
}

/// Stiffness matrix conditioning. Without a problem the drifted two-sided
/// operator `p = q = 1/2, d = 1` is used.
pub fn condition_rows(cfg: &ExperimentConfig) -> Result<Vec<ConditionRow>> {
    let schemes = cfg.schemes()?;
    let alphas = sorted_alphas(cfg.alphas()?);
    let ns = cfg.ns()?;
    let opts = cfg.options();
    let problem_at = |a: f64| -> Result<ProblemSpec<f64>> {
        if cfg.problem.is_none() && cfg.inline.is_none() {
            let spec = DiffusionSpec { alpha: a, p: 0.5, q: 0.5, d: 1.0 };
            ProblemSpec::new("drifted", spec, Evaluable::zero(), None)
        } else {
            cfg.problem_at(a)
        }
    };
    for &a in &alphas {
        problem_at(a)?;
    }
    let tasks = grid(&schemes, &alphas, &ns);
    let results: Vec<Result<f64>> = with_thread_pool(|| {
        tasks
            .par_iter()
            .map(|&(s, a, n)| {
                let p = problem_at(a)?;
                let sys = assemble(s, p.diffusion(), &p.rhs, n, opts)?;
                Ok(condition_number(&sys.stiffness))
            })
            .collect()
    });
    let mut rows = Vec::with_capacity(tasks.len());
    for (&(scheme, alpha, n), r) in tasks.iter().zip(results) {
        rows.push(ConditionRow {
            scheme,
            alpha,
            n,
            kappa2: r?,
            fitted_growth: None,
        });
    }
    for chunk in rows.chunks_mut(ns.len()) {
        for i in 1..chunk.len() {
            let nn: Vec<usize> = chunk[..=i].iter().map(|r| r.n).collect();
            let kk: Vec<f64> = chunk[..=i].iter().map(|r| r.kappa2).collect();
            chunk[i].fitted_growth = fit_growth(&nn, &kk).ok();
        }
    }
    Ok(rows)
}

pub fn run_condition(cfg: &ExperimentConfig) -> Result<String> {
    let mut out = String::from("scheme,alpha,N,kappa2,fitted_growth_exponent\n");
    for r in condition_rows(cfg)? {
        let g = r.fitted_growth.map(fmt).unwrap_or_default();
        let _ = writeln!(out, "{},{},{},{},{}", r.scheme, fmt(r.alpha), r.n, fmt(r.kappa2), g);
    }
    Ok(out)
}

/// `n` uniformly spaced points strictly inside `(-1, 1)`, symmetric about 0.
pub fn interior_grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| -1.0 + 2.0 * (i + 1) as f64 / (n + 1) as f64).collect()
}

/// One exit-time profile.
#[derive(Debug, Clone, PartialEq)]
pub struct MfetProfile {
    pub alpha: f64,
    pub drift: f64,
    pub drift_label: String,
    pub x: Vec<f64>,
    pub u: Vec<f64>,
}

/// Exit-time profiles with scheme 3 on the 201-point interior grid.
pub fn mfet_profiles(cfg: &ExperimentConfig) -> Result<Vec<MfetProfile>> {
    let alphas = sorted_alphas(cfg.alphas()?);
    let n = match &cfg.ns {
        Some(_) => *cfg.ns()?.last().expect("validated non-empty"),
        None => MFET_DEFAULT_N,
    };
    let scheme = match &cfg.schemes {
        None => SchemeId::Mixed3,
        Some(_) => cfg.schemes()?[0],
    };
    let drifts = cfg
        .drifts
        .clone()
        .unwrap_or_else(|| vec![Drift::Value(0.0), Drift::Named("cos".into())]);
    let opts = cfg.options();
    let mut tasks = Vec::new();
    for &a in &alphas {
        for d in &drifts {
            tasks.push((a, d.resolve(a)?, d.label()));
        }
    }
    let xs = interior_grid(MFET_GRID);
    let results: Vec<Result<Vec<f64>>> = with_thread_pool(|| {
        tasks
            .par_iter()
            .map(|(a, d, _)| {
                let p = crate::problems::mfet_problem(*a, *d)?;
                let (_, sol) = solve_problem(scheme, &p, n, opts)?;
                Ok(xs.iter().map(|&x| sol.eval(x)).collect())
            })
            .collect()
    });
    tasks
        .into_iter()
        .zip(results)
        .map(|((alpha, drift, drift_label), u)| {
            Ok(MfetProfile {
                alpha,
                drift,
                drift_label,
                x: xs.clone(),
                u: u?,
            })
        })
        .collect()
}

pub fn run_mfet(cfg: &ExperimentConfig) -> Result<String> {
    let mut out = String::from("alpha,d,x,u\n");
    for p in mfet_profiles(cfg)? {
        for (x, u) in p.x.iter().zip(&p.u) {
            let _ = writeln!(out, "{},{},{},{}", fmt(p.alpha), fmt(p.drift), fmt(*x), fmt(*u));
        }
    }
    Ok(out)
}

/// Result of a single solve: CSV samples plus a summary block.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub csv: String,
    pub summary: String,
    pub max_abs_error: Option<f64>,
}

/// Solves the first configured `(scheme, α)` at the largest configured `N`.
pub fn run_solve(cfg: &ExperimentConfig) -> Result<SolveReport> {
    let scheme = cfg.schemes()?[0];
    let alpha = cfg.alphas()?[0];
    let n = *cfg.ns()?.last().expect("validated non-empty");
    let p = cfg.problem_at(alpha)?;
    let (sys, sol) = solve_problem(scheme, &p, n, cfg.options())?;
    let kappa = condition_number(&sys.stiffness);
    let xs = interior_grid(MFET_GRID);
    let mut csv = String::from(if p.exact.is_some() { "x,u,exact\n" } else { "x,u\n" });
    let mut max_err: Option<f64> = None;
    for &x in &xs {
        let u = sol.eval(x);
        match &p.exact {
            Some(e) => {
                let ue = e.eval(x);
                max_err = Some(max_err.unwrap_or(0.0).max((u - ue).abs()));
                let _ = writeln!(csv, "{},{},{}", fmt(x), fmt(u), fmt(ue));
            }
            None => {
                let _ = writeln!(csv, "{},{}", fmt(x), fmt(u));
            }
        }
    }
    let mut summary = String::new();
    let _ = writeln!(summary, "problem = {}", p.label);
    let _ = writeln!(summary, "scheme = {scheme}");
    let _ = writeln!(summary, "alpha = {}", fmt(alpha));
    let _ = writeln!(summary, "N = {n}");
    let _ = writeln!(summary, "kappa2 = {}", fmt(kappa));
    let _ = writeln!(summary, "residual = {}", fmt(sol.residual));
    let _ = writeln!(summary, "boundary_residual_at_+1 = {}", fmt(sol.boundary_residual()));
    if let Some(e) = max_err {
        let _ = writeln!(summary, "max_abs_error = {}", fmt(e));
    }
    Ok(SolveReport {
        csv,
        summary,
        max_abs_error: max_err,
    })
}

/// Runs `command`, returning CSV text and an optional summary for stdout.
pub fn run(command: Command, cfg: &ExperimentConfig) -> Result<(String, Option<String>)> {
    match command {
        Command::Convergence => run_convergence(cfg).map(|c| (c, None)),
        Command::Condition => run_condition(cfg).map(|c| (c, None)),
        Command::Mfet => run_mfet(cfg).map(|c| (c, None)),
        Command::Solve => run_solve(cfg).map(|r| (r.csv, Some(r.summary))),
    }
}
