//! End-to-end level-set solves: bracket the root of `phi(lambda) = rho`, run
//! the chosen root finder with sieving-accelerated evaluations (each solve
//! seeded with the support of the previous one), and return `(lambda*, x*)`.
//! Also generates solution paths over decreasing `rho` with warm starts.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::data::{Dataset, LeastSquares, ProblemData};
use crate::inner::{phi_eval, InnerConfig, InnerSolveResult};
use crate::linalg::norm1;
use crate::regularizer::Regularizer;
use crate::rootfind::{
    bisection_solve, bracket_init, eta, hs_derivative_l1, hybrid_secant_solve, newton_hybrid_solve,
    IterRecord, RootConfig, RootOutcome, Sample,
};
use crate::sieve::SieveConfig;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Safeguarded secant.
    Smop,
    /// Bisection.
    Bmop,
    /// Safeguarded semismooth Newton (l1 only).
    Nmop,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Method::Smop => "smop",
            Method::Bmop => "bmop",
            Method::Nmop => "nmop",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "smop" => Ok(Method::Smop),
            "bmop" => Ok(Method::Bmop),
            "nmop" => Ok(Method::Nmop),
            other => Err(Error::InvalidParameter(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmopConfig {
    pub method: Method,
    pub stoptol: f64,
    /// Everything but `stoptol`, which is taken from above.
    pub root: RootConfig,
    pub sieve: SieveConfig,
    pub inner: InnerConfig,
    pub sieving: bool,
    /// Inner KKT tolerance; `None` uses
    /// `min(1e-8, 0.01 · stoptol · max(1, rho))`.
    pub inner_tol: Option<f64>,
}

impl Default for SmopConfig {
    fn default() -> Self {
        SmopConfig {
            method: Method::Smop,
            stoptol: 1e-6,
            root: RootConfig::default(),
            sieve: SieveConfig::default(),
            inner: InnerConfig::default(),
            sieving: true,
            inner_tol: None,
        }
    }
}

impl SmopConfig {
    pub fn new(method: Method, stoptol: f64) -> Self {
        SmopConfig {
            method,
            stoptol,
            ..Default::default()
        }
    }

    pub fn effective_inner_tol(&self, rho: f64) -> f64 {
        self.inner_tol
            .unwrap_or_else(|| InnerConfig::for_root_tolerance(self.stoptol, rho).kkt_tol)
    }

    fn check(&self, reg: &Regularizer) -> Result<()> {
        if self.method == Method::Nmop && !reg.is_l1() {
            return Err(Error::Unsupported("NMOP supports l1 only".into()));
        }
        if !(self.stoptol >= 0.0) {
            return Err(Error::InvalidParameter("stoptol must be >= 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SmopResult {
    pub method: Method,
    pub rho: f64,
    pub lambda_star: f64,
    pub lambda_inf: f64,
    pub x: Vec<f64>,
    pub phi: f64,
    pub eta: f64,
    pub nnz: usize,
    /// Number of regularized-problem solves (value-function evaluations).
    pub n_subproblems: usize,
    pub inner_iters_total: usize,
    pub wall_ms: f64,
    pub converged: bool,
    pub inner_tol: f64,
    pub log: Vec<IterRecord>,
}

/// `min { k : Σ_{i≤k} |x|_(i) ≥ 0.999 ‖x‖₁ }`, with `nnz(0) = 0`.
pub fn nnz(x: &[f64]) -> usize {
    let total = norm1(x);
    if total == 0.0 {
        return 0;
    }
    let mut mags: Vec<f64> = x.iter().map(|v| v.abs()).collect();
    mags.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let target = 0.999 * total;
    let mut acc = 0.0;
    for (k, m) in mags.iter().enumerate() {
        acc += m;
        if acc >= target {
            return k + 1;
        }
    }
    mags.len()
}

/// Value-function oracle: each call solves the regularized problem at
/// `lambda`, warm-started from (and sieving seeded by the support of) the
/// previous solution.
pub struct Evaluator<'a> {
    ls: LeastSquares<'a>,
    reg: &'a Regularizer,
    inner: InnerConfig,
    sieve: Option<SieveConfig>,
    warm: Option<Vec<f64>>,
    pub evals: usize,
    pub inner_iters: usize,
    observer: Option<&'a mut dyn FnMut(f64, &InnerSolveResult)>,
}

impl<'a> Evaluator<'a> {
    pub fn new(ls: LeastSquares<'a>, reg: &'a Regularizer, cfg: &SmopConfig, inner_tol: f64) -> Self {
        let mut inner = cfg.inner.clone();
        inner.kkt_tol = inner_tol;
        let sieve = cfg.sieving.then(|| SieveConfig {
            eps: inner_tol,
            ..cfg.sieve.clone()
        });
        Evaluator {
            ls,
            reg,
            inner,
            sieve,
            warm: None,
            evals: 0,
            inner_iters: 0,
            observer: None,
        }
    }

    pub fn with_observer(mut self, obs: &'a mut dyn FnMut(f64, &InnerSolveResult)) -> Self {
        self.observer = Some(obs);
        self
    }

    pub fn set_warm(&mut self, x: Option<Vec<f64>>) {
        self.warm = x;
    }

    pub fn eval(&mut self, lambda: f64) -> Result<Sample> {
        let res = phi_eval(
            self.ls,
            self.reg,
            lambda,
            self.warm.as_deref(),
            &self.inner,
            self.sieve.as_ref(),
        )?;
        self.evals += 1;
        self.inner_iters += res.iters;
        if !res.converged {
            log::warn!("inner solve at lambda = {lambda} did not reach tolerance");
        }
        if let Some(obs) = self.observer.as_mut() {
            obs(lambda, &res);
        }
        self.warm = Some(res.x.clone());
        Ok(Sample {
            lambda,
            phi: res.phi,
            x: res.x,
            inner_iters: res.iters,
        })
    }
}

fn run_root_finder(
    ev: &mut Evaluator<'_>,
    a: &crate::data::SparseMatrix,
    rho: f64,
    lower: Sample,
    upper: Sample,
    cfg: &SmopConfig,
) -> Result<RootOutcome> {
    let root = RootConfig {
        stoptol: cfg.stoptol,
        ..cfg.root.clone()
    };
    let phi = |l: f64| ev.eval(l);
    match cfg.method {
        Method::Smop => hybrid_secant_solve(phi, rho, lower, upper, &root),
        Method::Bmop => bisection_solve(phi, rho, lower, upper, &root),
        Method::Nmop => {
            let deriv = |s: &Sample| hs_derivative_l1(&s.x, a, s.lambda, s.phi);
            newton_hybrid_solve(phi, deriv, rho, lower, upper, &root)
        }
    }
}

fn assemble(
    data: &ProblemData,
    cfg: &SmopConfig,
    lambda_inf: f64,
    inner_tol: f64,
    ev: &Evaluator<'_>,
    mut log: Vec<IterRecord>,
    prefix: Vec<IterRecord>,
    outcome: RootOutcome,
    started: Instant,
) -> SmopResult {
    let x = outcome.sample.x;
    let phi = outcome.sample.phi;
    let mut full_log = prefix;
    full_log.append(&mut log);
    for (k, r) in full_log.iter_mut().enumerate() {
        r.k = k;
    }
    SmopResult {
        method: cfg.method,
        rho: data.rho,
        lambda_star: outcome.lambda,
        lambda_inf,
        nnz: nnz(&x),
        phi,
        eta: eta(phi, data.rho),
        x,
        n_subproblems: ev.evals,
        inner_iters_total: ev.inner_iters,
        wall_ms: started.elapsed().as_secs_f64() * 1e3,
        converged: outcome.converged,
        inner_tol,
        log: full_log,
    }
}

/// Solves `min p(x) s.t. ‖Ax − b‖ ≤ rho` with the configured root finder.
pub fn smop_solve(data: &ProblemData, reg: &Regularizer, cfg: &SmopConfig) -> Result<SmopResult> {
    let mut noop = |_: f64, _: &InnerSolveResult| {};
    smop_solve_observed(data, reg, cfg, &mut noop)
}

/// [`smop_solve`] reporting every regularized solve to `observer`.
pub fn smop_solve_observed(
    data: &ProblemData,
    reg: &Regularizer,
    cfg: &SmopConfig,
    observer: &mut dyn FnMut(f64, &InnerSolveResult),
) -> Result<SmopResult> {
    cfg.check(reg)?;
    let started = Instant::now();
    let lambda_inf = reg.lambda_inf(&data.a, &data.b)?;
    let inner_tol = cfg.effective_inner_tol(data.rho);
    let mut ev = Evaluator::new(data.ls(), reg, cfg, inner_tol).with_observer(observer);
    let br = bracket_init(|l| ev.eval(l), data.rho, data.bnorm, lambda_inf, cfg.stoptol)?;
    let outcome = run_root_finder(&mut ev, &data.a, data.rho, br.lower, br.upper, cfg)?;
    let log = outcome.state.log.clone();
    Ok(assemble(
        data,
        cfg,
        lambda_inf,
        inner_tol,
        &ev,
        log,
        Vec::new(),
        outcome,
        started,
    ))
}

/// Noise levels `rho_i = c_i · c · ‖b‖`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSpec {
    pub c: f64,
    pub multipliers: Vec<f64>,
}

impl PathSpec {
    /// `c_i = 1.5 − 0.5 (i − 1)/(T − 1)`, `i = 1..T`; a single-point path
    /// uses `c_1 = 1`.
    pub fn standard(c: f64, count: usize) -> Self {
        let multipliers = match count {
            0 => Vec::new(),
            1 => vec![1.0],
            t => (0..t)
                .map(|i| 1.5 - 0.5 * i as f64 / (t - 1) as f64)
                .collect(),
        };
        PathSpec { c, multipliers }
    }

    pub fn rhos(&self, bnorm: f64) -> Vec<f64> {
        self.multipliers.iter().map(|ci| ci * self.c * bnorm).collect()
    }
}

#[derive(Debug, Clone)]
pub struct PathEntry {
    pub index: usize,
    pub rho: f64,
    pub result: std::result::Result<SmopResult, String>,
}

#[derive(Debug, Clone)]
pub struct PathResult {
    pub entries: Vec<PathEntry>,
    pub wall_ms: f64,
}

impl PathResult {
    pub fn successes(&self) -> impl Iterator<Item = &SmopResult> {
        self.entries.iter().filter_map(|e| e.result.as_ref().ok())
    }

    /// Mean value-function evaluations over successful solves.
    pub fn mean_subproblems(&self) -> f64 {
        let (sum, cnt) = self
            .successes()
            .fold((0usize, 0usize), |(s, c), r| (s + r.n_subproblems, c + 1));
        if cnt == 0 {
            f64::NAN
        } else {
            sum as f64 / cnt as f64
        }
    }
}

/// Warm-started bracket around the previous root: the previous sample is the
/// upper end whenever `phi_prev > rho` (no new evaluation); the lower end
/// starts at half the previous root and halves until `phi < rho`.
fn warm_bracket(
    ev: &mut Evaluator<'_>,
    prev: &Sample,
    rho: f64,
    lambda_inf: f64,
    stoptol: f64,
) -> Result<(Sample, Sample)> {
    let meets = |s: &Sample| eta(s.phi, rho) <= stoptol;
    let mut upper = prev.clone();
    let mut guard = 0;
    while !(upper.phi > rho || meets(&upper)) {
        let next = (1.5 * upper.lambda).min(lambda_inf);
        upper = ev.eval(next)?;
        guard += 1;
        if next >= lambda_inf || guard > 40 {
            break;
        }
    }
    if !(upper.phi > rho || meets(&upper)) {
        return Err(Error::RhoTooSmall);
    }
    ev.set_warm(Some(prev.x.clone()));
    let mut lower = ev.eval(0.5 * prev.lambda.min(upper.lambda))?;
    let mut guard = 0;
    while !(lower.phi < rho || meets(&lower)) {
        guard += 1;
        if guard > 40 {
            return Err(Error::RhoTooSmall);
        }
        lower = ev.eval(0.5 * lower.lambda)?;
    }
    Ok((lower, upper))
}

/// Solves the constrained problem for every `rho_i` of `spec` in order,
/// warm-starting each solve's bracket and support from the previous
/// solution. A failed solve is recorded and the path continues cold.
pub fn solve_path(
    data: &Dataset,
    reg: &Regularizer,
    spec: &PathSpec,
    cfg: &SmopConfig,
) -> Result<PathResult> {
    cfg.check(reg)?;
    let started = Instant::now();
    let bnorm = crate::linalg::norm2(&data.b);
    let rhos = spec.rhos(bnorm);
    if rhos.is_empty() {
        return Err(Error::InvalidParameter("empty path".into()));
    }
    for &rho in &rhos {
        if !(rho > 0.0 && rho < bnorm) {
            return Err(Error::InvalidRho { rho, bnorm });
        }
    }
    let lambda_inf = reg.lambda_inf(&data.a, &data.b)?;
    let mut entries = Vec::with_capacity(rhos.len());
    let mut prev: Option<Sample> = None;

    for (index, &rho) in rhos.iter().enumerate() {
        let pd = ProblemData {
            a: data.a.clone(),
            b: data.b.clone(),
            rho,
            bnorm,
        };
        let t0 = Instant::now();
        let inner_tol = cfg.effective_inner_tol(rho);
        let result = (|| -> Result<SmopResult> {
            let mut ev = Evaluator::new(pd.ls(), reg, cfg, inner_tol);
            let (lower, upper, prefix) = match &prev {
                Some(p) => {
                    ev.set_warm(Some(p.x.clone()));
                    let (lo, hi) = warm_bracket(&mut ev, p, rho, lambda_inf, cfg.stoptol)?;
                    (lo, hi, Vec::new())
                }
                None => {
                    let br = bracket_init(|l| ev.eval(l), rho, bnorm, lambda_inf, cfg.stoptol)?;
                    (br.lower, br.upper, Vec::new())
                }
            };
            let outcome = run_root_finder(&mut ev, &pd.a, rho, lower, upper, cfg)?;
            let log = outcome.state.log.clone();
            Ok(assemble(&pd, cfg, lambda_inf, inner_tol, &ev, log, prefix, outcome, t0))
        })();
        match &result {
            Ok(r) if r.converged => {
                prev = Some(Sample {
                    lambda: r.lambda_star,
                    phi: r.phi,
                    x: r.x.clone(),
                    inner_iters: 0,
                });
            }
            Ok(_) => prev = None,
            Err(e) => {
                log::warn!("path step {index} (rho = {rho}) failed: {e}");
                prev = None;
            }
        }
        entries.push(PathEntry {
            index,
            rho,
            result: result.map_err(|e| e.to_string()),
        });
    }
    Ok(PathResult {
        entries,
        wall_ms: started.elapsed().as_secs_f64() * 1e3,
    })
}

/// Serializable summary of one solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDoc {
    pub method: Method,
    pub reg: String,
    pub rho: f64,
    pub lambda_star: f64,
    pub lambda_inf: f64,
    pub phi: f64,
    pub eta: f64,
    pub nnz: usize,
    pub n_subproblems: usize,
    pub inner_iters_total: usize,
    pub converged: bool,
    pub wall_ms: f64,
    /// Nonzero entries of `x*` as `(index, value)`, 0-based.
    pub x: Vec<(usize, f64)>,
    pub n: usize,
}

impl ResultDoc {
    pub fn from_result(r: &SmopResult, reg: &Regularizer) -> Self {
        ResultDoc {
            method: r.method,
            reg: reg.name().to_string(),
            rho: r.rho,
            lambda_star: r.lambda_star,
            lambda_inf: r.lambda_inf,
            phi: r.phi,
            eta: r.eta,
            nnz: r.nnz,
            n_subproblems: r.n_subproblems,
            inner_iters_total: r.inner_iters_total,
            converged: r.converged,
            wall_ms: r.wall_ms,
            x: r
                .x
                .iter()
                .enumerate()
                .filter(|(_, v)| **v != 0.0)
                .map(|(i, v)| (i, *v))
                .collect(),
            n: r.x.len(),
        }
    }

    pub fn dense_x(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.n];
        for &(i, v) in &self.x {
            x[i] = v;
        }
        x
    }

    /// Recomputes `eta` from the stored `x*` and the data.
    pub fn revalidate_eta(&self, a: &crate::data::SparseMatrix, b: &[f64]) -> Result<f64> {
        let x = self.dense_x();
        let y = LeastSquares::new(a, b).residual(&x);
        Ok(eta(crate::linalg::norm2(&y), self.rho))
    }
}
