//! Command-line front end. Every subcommand returns a process exit code:
//! 0 on success, 2 when a solve did not reach its tolerance, 1 on usage or
//! input errors.

use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::data::{libsvm_read, synth_instance, Dataset, SynthSpec};
use crate::driver::{smop_solve, solve_path, Method, PathSpec, ResultDoc, SmopConfig, SmopResult};
use crate::regularizer::{Regularizer, WeightSchedule};
use crate::rootfind::{
    eval_beta_fn, eval_constructed_fn, q_order_estimate, secant_solve, write_iterate_csv,
};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NONCONVERGED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "smop", version, about = "Level-set solver for sparse constrained least squares")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve min p(x) s.t. ‖Ax − b‖ ≤ rho for one rho.
    Solve(SolveArgs),
    /// Solve along rho_i = c_i · c · ‖b‖ with warm starts.
    Path(PathArgs),
    /// Plain secant runs on the one-dimensional test functions.
    Rootdemo(RootdemoArgs),
    /// Compare root finders over a seeded synthetic suite.
    Bench(BenchArgs),
}

#[derive(Debug, Args, Clone)]
pub struct DataArgs {
    /// LIBSVM-format data file.
    #[arg(long, conflicts_with = "synth", required_unless_present = "synth")]
    pub input: Option<PathBuf>,
    /// Synthetic instance, e.g. `m=200,n=2000,s=20,sigma=0.01,seed=1`.
    #[arg(long)]
    pub synth: Option<String>,
}

#[derive(Debug, Args, Clone)]
pub struct ModelArgs {
    /// Penalty: `l1` or `slope`.
    #[arg(long, default_value = "l1")]
    pub reg: String,
    /// Sorted-l1 weight schedule: `linear` or `constant`.
    #[arg(long, default_value = "linear")]
    pub gamma: String,
    /// Root finder: `smop`, `bmop` or `nmop`.
    #[arg(long, default_value = "smop")]
    pub method: String,
    #[arg(long, default_value_t = 1e-6)]
    pub stoptol: f64,
    /// Inner KKT tolerance (default derived from stoptol and rho).
    #[arg(long)]
    pub inner_tol: Option<f64>,
    /// Solve every subproblem at full dimension.
    #[arg(long)]
    pub no_sieve: bool,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    /// rho = c ‖b‖.
    #[arg(long, conflicts_with = "rho", required_unless_present = "rho")]
    pub c: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
    /// Write the result JSON here as well as to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the root-finder iterate log as CSV.
    #[arg(long)]
    pub iterates: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PathArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub c: f64,
    /// Number of path points T.
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    /// Per-point CSV (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Result documents for every point plus a summary, as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RootdemoArgs {
    /// `beta:1.1`, `beta:1.5`, `beta:2.1` or `constructed`.
    pub name: String,
    /// Compare the printed iterates with the reference table.
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Instance template; `seed` is taken from `--seeds`.
    #[arg(long, default_value = "m=200,n=2000,s=20,sigma=0.01")]
    pub suite: String,
    /// Comma-separated seeds or a range `a..b` (inclusive).
    #[arg(long, default_value = "1..5")]
    pub seeds: String,
    #[arg(long, default_value = "smop,bmop")]
    pub methods: String,
    #[arg(long, default_value = "l1")]
    pub reg: String,
    #[arg(long, default_value = "linear")]
    pub gamma: String,
    #[arg(long, default_value_t = 0.1)]
    pub c: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub stoptol: f64,
    /// Run a path of `T` points per instance instead of a single solve.
    #[arg(long, value_name = "T=N")]
    pub path: Option<String>,
    /// Per-run CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Summary CSV (stdout when absent).
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// Worker threads; instances are independent.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

/// Parses `m=4,n=8,s=2,seed=7[,sigma=0.01]`; `sigma` defaults to 0.01 and
/// `seed` to 1.
pub fn parse_synth(spec: &str) -> Result<SynthSpec> {
    let mut out = SynthSpec::new(0, 0, 0, 0.01, 1);
    let (mut has_m, mut has_n, mut has_s) = (false, false, false);
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, val) = part
            .split_once('=')
            .ok_or_else(|| Error::InvalidParameter(format!("expected key=value, got {part:?}")))?;
        let bad = || Error::InvalidParameter(format!("bad value for {key}: {val:?}"));
        match key.trim() {
            "m" => (out.m, has_m) = (val.parse().map_err(|_| bad())?, true),
            "n" => (out.n, has_n) = (val.parse().map_err(|_| bad())?, true),
            "s" => (out.s, has_s) = (val.parse().map_err(|_| bad())?, true),
            "sigma" => out.sigma = val.parse().map_err(|_| bad())?,
            "seed" => out.seed = val.parse().map_err(|_| bad())?,
            other => return Err(Error::InvalidParameter(format!("unknown synth key {other:?}"))),
        }
    }
    if !(has_m && has_n && has_s) {
        return Err(Error::InvalidParameter("synth spec needs m, n and s".into()));
    }
    Ok(out)
}

fn parse_seeds(s: &str) -> Result<Vec<u64>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    let bad = || Error::InvalidParameter(format!("bad seed list {s:?}"));
    if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim().parse().map_err(|_| bad())?;
        return Ok((a..=b).collect());
    }
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| bad()))
        .collect()
}

fn parse_methods(s: &str) -> Result<Vec<Method>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(Method::from_str)
        .collect()
}

fn parse_path_count(s: &str) -> Result<usize> {
    let v = s.trim().strip_prefix("T=").unwrap_or(s.trim());
    match v.parse::<usize>() {
        Ok(t) if t > 0 => Ok(t),
        _ => Err(Error::InvalidParameter(format!("bad path spec {s:?}; expected T=N"))),
    }
}

fn build_reg(kind: &str, gamma: &str, n: usize) -> Result<Regularizer> {
    match kind {
        "l1" => Ok(Regularizer::L1),
        "slope" | "sorted-l1" => {
            let schedule = match gamma {
                "linear" => WeightSchedule::Linear,
                "constant" => WeightSchedule::Constant,
                other => {
                    return Err(Error::InvalidParameter(format!("unknown gamma schedule {other:?}")))
                }
            };
            Regularizer::slope(schedule, n)
        }
        other => Err(Error::InvalidParameter(format!("unknown penalty {other:?}"))),
    }
}

fn load_data(args: &DataArgs) -> Result<Dataset> {
    match (&args.input, &args.synth) {
        (Some(path), None) => libsvm_read(path),
        (None, Some(spec)) => Ok(synth_instance(&parse_synth(spec)?)?.0),
        _ => Err(Error::InvalidParameter("give exactly one of --input, --synth".into())),
    }
}

fn build_config(m: &ModelArgs, reg: &Regularizer) -> Result<SmopConfig> {
    let method: Method = m.method.parse()?;
    if method == Method::Nmop && !reg.is_l1() {
        return Err(Error::Unsupported("NMOP supports l1 only".into()));
    }
    if !(m.stoptol > 0.0) {
        return Err(Error::InvalidParameter("stoptol must be > 0".into()));
    }
    let mut cfg = SmopConfig::new(method, m.stoptol);
    cfg.sieving = !m.no_sieve;
    cfg.inner_tol = m.inner_tol;
    Ok(cfg)
}

fn write_text(path: &PathBuf, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.clone(),
        source,
    })
}

fn report(e: &Error) -> i32 {
    eprintln!("error: {e}");
    EXIT_USAGE
}

/// Parses `args` (including the program name) and dispatches.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::Solve(a) => run_solve(&a),
        Command::Path(a) => run_path(&a),
        Command::Rootdemo(a) => run_rootdemo(&a),
        Command::Bench(a) => run_bench(&a),
    }
}

/// Result JSON for one solve; wall time is the only non-deterministic field.
pub fn result_json(r: &SmopResult, reg: &Regularizer) -> Result<String> {
    Ok(serde_json::to_string_pretty(&ResultDoc::from_result(r, reg))?)
}

pub fn run_solve(args: &SolveArgs) -> i32 {
    let prepared = (|| -> Result<_> {
        let data = load_data(&args.data)?;
        let reg = build_reg(&args.model.reg, &args.model.gamma, data.a.cols())?;
        let cfg = build_config(&args.model, &reg)?;
        let problem = match (args.c, args.rho) {
            (Some(c), None) => data.with_ratio(c)?,
            (None, Some(rho)) => data.with_rho(rho)?,
            _ => return Err(Error::InvalidParameter("give exactly one of --c, --rho".into())),
        };
        Ok((problem, reg, cfg))
    })();
    let (problem, reg, cfg) = match prepared {
        Ok(p) => p,
        Err(e) => return report(&e),
    };
    let outcome = (|| -> Result<SmopResult> {
        let r = smop_solve(&problem, &reg, &cfg)?;
        let json = result_json(&r, &reg)?;
        println!("{json}");
        if let Some(path) = &args.out {
            write_text(path, &json)?;
        }
        if let Some(path) = &args.iterates {
            write_iterate_csv(&r.log, path)?;
        }
        Ok(r)
    })();
    match outcome {
        Ok(r) if r.converged => EXIT_OK,
        Ok(r) => {
            eprintln!("not converged: eta = {:e} > stoptol = {:e}", r.eta, cfg.stoptol);
            EXIT_NONCONVERGED
        }
        Err(e) => report(&e),
    }
}

#[derive(Debug, Serialize)]
struct PathRow {
    index: usize,
    rho: f64,
    lambda_star: f64,
    eta: f64,
    nnz: usize,
    n_subproblems: usize,
    inner_iters_total: usize,
    wall_ms: f64,
    converged: bool,
    error: String,
}

fn path_rows(res: &crate::driver::PathResult) -> Vec<PathRow> {
    res.entries
        .iter()
        .map(|e| match &e.result {
            Ok(r) => PathRow {
                index: e.index + 1,
                rho: e.rho,
                lambda_star: r.lambda_star,
                eta: r.eta,
                nnz: r.nnz,
                n_subproblems: r.n_subproblems,
                inner_iters_total: r.inner_iters_total,
                wall_ms: r.wall_ms,
                converged: r.converged,
                error: String::new(),
            },
            Err(msg) => PathRow {
                index: e.index + 1,
                rho: e.rho,
                lambda_star: f64::NAN,
                eta: f64::NAN,
                nnz: 0,
                n_subproblems: 0,
                inner_iters_total: 0,
                wall_ms: 0.0,
                converged: false,
                error: msg.clone(),
            },
        })
        .collect()
}

fn write_csv_rows<S: Serialize>(rows: &[S], path: Option<&PathBuf>) -> Result<()> {
    let sink: Box<dyn Write> = match path {
        Some(p) => Box::new(std::fs::File::create(p).map_err(|source| Error::Io {
            path: p.clone(),
            source,
        })?),
        None => Box::new(std::io::stdout()),
    };
    let mut w = csv::Writer::from_writer(sink);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|source| Error::Io {
        path: path.cloned().unwrap_or_else(|| "<stdout>".into()),
        source,
    })?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct PathSummary {
    points: usize,
    converged: usize,
    mean_subproblems: f64,
    wall_ms: f64,
}

#[derive(Debug, Serialize)]
struct PathDoc {
    results: Vec<ResultDoc>,
    summary: PathSummary,
}

pub fn path_json(res: &crate::driver::PathResult, reg: &Regularizer) -> Result<String> {
    let results: Vec<ResultDoc> = res.successes().map(|r| ResultDoc::from_result(r, reg)).collect();
    let doc = PathDoc {
        summary: PathSummary {
            points: res.entries.len(),
            converged: results.iter().filter(|r| r.converged).count(),
            mean_subproblems: res.mean_subproblems(),
            wall_ms: res.wall_ms,
        },
        results,
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

pub fn run_path(args: &PathArgs) -> i32 {
    let outcome = (|| -> Result<bool> {
        let data = load_data(&args.data)?;
        let reg = build_reg(&args.model.reg, &args.model.gamma, data.a.cols())?;
        let cfg = build_config(&args.model, &reg)?;
        if args.count == 0 {
            return Err(Error::InvalidParameter("--count must be > 0".into()));
        }
        let res = solve_path(&data, &reg, &PathSpec::standard(args.c, args.count), &cfg)?;
        let rows = path_rows(&res);
        write_csv_rows(&rows, args.out.as_ref())?;
        if let Some(p) = &args.json {
            write_text(p, &path_json(&res, &reg)?)?;
        }
        log::info!(
            "path: {} points, mean {:.2} subproblems, {:.1} ms",
            rows.len(),
            res.mean_subproblems(),
            res.wall_ms
        );
        Ok(rows.iter().all(|r| r.converged))
    })();
    match outcome {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_NONCONVERGED,
        Err(e) => report(&e),
    }
}

/// Reference iterates (two significant digits) for the built-in demos.
pub struct DemoTable {
    pub x: &'static [&'static str],
    pub f: Option<&'static [&'static str]>,
}

pub fn demo_table(name: &str) -> Option<DemoTable> {
    let x: &'static [&'static str] = match name {
        "beta:1.1" => &[
            "-5.1e-5", "-4.3e-6", "2.2e-10", "-2.2e-11", "-1.8e-12", "4.1e-23", "-4.1e-24", "-3.4e-25",
        ],
        "beta:1.5" => &[
            "-5.1e-5", "-1.7e-5", "8.4e-10", "-4.2e-10", "-1.1e-10", "4.5e-20", "-2.2e-20", "-5.6e-21",
        ],
        "beta:2.1" => &[
            "-5.1e-5", "-2.6e-5", "1.3e-9", "-1.5e-9", "-5.1e-10", "7.4e-19", "-8.2e-19", "-2.8e-19",
        ],
        "constructed" => &[
            "1.7e-1", "3.6e-2", "4.0e-3", "1.0e-4", "2.7e-7", "2.0e-11", "4.0e-18", "6.1e-29",
        ],
        _ => return None,
    };
    let f: Option<&'static [&'static str]> = (name == "constructed").then_some(&[
        "1.9e-1", "3.7e-2", "4.0e-3", "1.0e-4", "2.7e-7", "2.0e-11", "4.0e-18", "6.1e-29",
    ]);
    Some(DemoTable { x, f })
}

/// Eight plain-secant iterates (and values) for a named demo.
pub fn demo_run(name: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let run = if let Some(beta) = name.strip_prefix("beta:") {
        let beta: f64 = match beta {
            "1.1" | "1.5" | "2.1" => beta.parse().unwrap(),
            _ => return Err(Error::InvalidParameter(format!("unknown demo {name:?}"))),
        };
        secant_solve(|x| eval_beta_fn(x, beta), 0.01, 0.005, 0.0, 8)?
    } else if name == "constructed" {
        secant_solve(|x| eval_constructed_fn(x, 1.0), 0.545, 0.5, 0.0, 8)?
    } else {
        return Err(Error::InvalidParameter(format!("unknown demo {name:?}")));
    };
    Ok((run.iterates, run.values))
}

/// Compact scientific notation with one decimal: `-5.1e-5`.
pub fn sci2(v: f64) -> String {
    format!("{v:.1e}")
}

pub fn run_rootdemo(args: &RootdemoArgs) -> i32 {
    let (xs, fs) = match demo_run(&args.name) {
        Ok(r) => r,
        Err(e) => return report(&e),
    };
    let table = demo_table(&args.name).expect("known demo");
    let header: Vec<String> = (1..=xs.len()).map(|k| k.to_string()).collect();
    println!("iter\t{}", header.join("\t"));
    let xs_s: Vec<String> = xs.iter().map(|&v| sci2(v)).collect();
    let fs_s: Vec<String> = fs.iter().map(|&v| sci2(v)).collect();
    println!("x\t{}", xs_s.join("\t"));
    if table.f.is_some() {
        println!("f(x)\t{}", fs_s.join("\t"));
        if let Ok(q) = q_order_estimate(&xs.iter().map(|v| v.abs()).collect::<Vec<_>>()) {
            println!("q-order\t{q:.3}");
        }
    }
    if !args.check {
        return EXIT_OK;
    }
    let mut ok = xs_s.len() == table.x.len() && xs_s.iter().zip(table.x).all(|(a, b)| a == b);
    if let Some(f) = table.f {
        ok &= fs_s.len() == f.len() && fs_s.iter().zip(f).all(|(a, b)| a == b);
    }
    if ok {
        println!("check: match");
        EXIT_OK
    } else {
        eprintln!("check: mismatch against reference table");
        EXIT_USAGE
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub seed: u64,
    pub method: Method,
    pub path_index: usize,
    pub rho: f64,
    pub lambda_star: f64,
    pub eta: f64,
    pub nnz: usize,
    pub n_subproblems: usize,
    pub inner_iters_total: usize,
    pub wall_ms: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchSummary {
    pub method: Method,
    pub runs: usize,
    pub median_evals: f64,
    pub mean_evals: f64,
    pub median_wall_ms: f64,
    /// Median wall time relative to SMOP's (NaN without an SMOP run).
    pub time_ratio_vs_smop: f64,
    pub all_converged: bool,
}

pub fn median(v: &mut [f64]) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

pub fn summarize(rows: &[BenchRow], methods: &[Method]) -> Vec<BenchSummary> {
    let stats = |m: Method| {
        let sel: Vec<&BenchRow> = rows.iter().filter(|r| r.method == m).collect();
        let mut evals: Vec<f64> = sel.iter().map(|r| r.n_subproblems as f64).collect();
        let mut times: Vec<f64> = sel.iter().map(|r| r.wall_ms).collect();
        let mean = evals.iter().sum::<f64>() / evals.len().max(1) as f64;
        (sel.len(), median(&mut evals), mean, median(&mut times), sel.iter().all(|r| r.converged))
    };
    let smop_time = stats(Method::Smop).3;
    methods
        .iter()
        .map(|&m| {
            let (runs, med, mean, t, conv) = stats(m);
            BenchSummary {
                method: m,
                runs,
                median_evals: med,
                mean_evals: mean,
                median_wall_ms: t,
                time_ratio_vs_smop: t / smop_time,
                all_converged: conv,
            }
        })
        .collect()
}

fn bench_instance(
    template: &SynthSpec,
    seed: u64,
    args: &BenchArgs,
    methods: &[Method],
    path: Option<usize>,
) -> Result<Vec<BenchRow>> {
    let spec = SynthSpec { seed, ..*template };
    let (data, _) = synth_instance(&spec)?;
    let reg = build_reg(&args.reg, &args.gamma, data.a.cols())?;
    let mut rows = Vec::new();
    for &method in methods {
        let cfg = SmopConfig::new(method, args.stoptol);
        let results: Vec<(usize, f64, SmopResult)> = match path {
            None => {
                let r = smop_solve(&data.clone().with_ratio(args.c)?, &reg, &cfg)?;
                vec![(1, r.rho, r)]
            }
            Some(t) => solve_path(&data, &reg, &PathSpec::standard(args.c, t), &cfg)?
                .entries
                .into_iter()
                .map(|e| e.result.map(|r| (e.index + 1, e.rho, r)).map_err(Error::InvalidParameter))
                .collect::<Result<_>>()?,
        };
        for (path_index, rho, r) in results {
            rows.push(BenchRow {
                seed,
                method,
                path_index,
                rho,
                lambda_star: r.lambda_star,
                eta: r.eta,
                nnz: r.nnz,
                n_subproblems: r.n_subproblems,
                inner_iters_total: r.inner_iters_total,
                wall_ms: r.wall_ms,
                converged: r.converged,
            });
        }
    }
    Ok(rows)
}

/// Runs every method on every seed of the suite; rows come back in
/// (seed, method, path index) order regardless of `jobs`.
pub fn bench(args: &BenchArgs) -> Result<(Vec<BenchRow>, Vec<BenchSummary>)> {
    let template = parse_synth(&format!("{},seed=0", args.suite))?;
    let seeds = parse_seeds(&args.seeds)?;
    let methods = parse_methods(&args.methods)?;
    if seeds.is_empty() || methods.is_empty() {
        return Err(Error::InvalidParameter("empty suite".into()));
    }
    if methods.contains(&Method::Nmop) && args.reg != "l1" {
        return Err(Error::Unsupported("NMOP supports l1 only".into()));
    }
    let path = args.path.as_deref().map(parse_path_count).transpose()?;
    let jobs = args.jobs.max(1).min(seeds.len());
    let mut per_seed: Vec<Option<Result<Vec<BenchRow>>>> = (0..seeds.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        for (w, chunk) in per_seed.chunks_mut(seeds.len().div_ceil(jobs)).enumerate() {
            let start = w * seeds.len().div_ceil(jobs);
            let (seeds, methods, template) = (&seeds, &methods, &template);
            scope.spawn(move || {
                for (off, slot) in chunk.iter_mut().enumerate() {
                    *slot = Some(bench_instance(template, seeds[start + off], args, methods, path));
                }
            });
        }
    });
    let mut rows = Vec::new();
    for r in per_seed {
        rows.extend(r.expect("every seed ran")?);
    }
    let summary = summarize(&rows, &methods);
    Ok((rows, summary))
}

pub fn run_bench(args: &BenchArgs) -> i32 {
    let outcome = (|| -> Result<bool> {
        let (rows, summary) = bench(args)?;
        if let Some(p) = &args.out {
            write_csv_rows(&rows, Some(p))?;
        }
        write_csv_rows(&summary, args.summary.as_ref())?;
        Ok(rows.iter().all(|r| r.converged))
    })();
    match outcome {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_NONCONVERGED,
        Err(e) => report(&e),
    }
}
