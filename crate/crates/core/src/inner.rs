//! Solver for the regularized problem
//!
//! ```text
//! minimize 0.5 ||Ax - b||^2 + lambda p(x)
//! ```
//!
//! over all coordinates or over an index subset `I` (coordinates outside `I`
//! fixed at zero), and evaluation of the value function
//! `phi(lambda) = ||A x(lambda) - b||`.
//!
//! The solver is accelerated proximal gradient with a fixed step `1/L`
//! (`L` from power iteration on `AᵀA`) and function-value restart. It stops
//! on the inexactness certificate
//!
//! ```text
//! || z - p + grad(p) - grad(z) || <= eps,   p = prox_{lambda p}(z - grad(z)),
//! ```
//!
//! and returns the polished point `p`, which solves the problem perturbed by
//! a vector of norm at most `eps`. By nonexpansiveness of the prox this also
//! bounds the proximal residual `||R(p)||` by `eps`.

use std::path::Path;

use serde::Serialize;

use crate::data::LeastSquares;
use crate::linalg::{dist2, gather, norm2, scatter};
use crate::regularizer::Regularizer;
use crate::sieve::{sieve_solve, SieveConfig};
use crate::{Error, Result};

const POWER_ITERS: usize = 20;
const LIPSCHITZ_SAFETY: f64 = 1.1;
/// Certificate checks happen every this many iterations (and at iteration 0).
const CHECK_EVERY: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct InnerConfig {
    pub kkt_tol: f64,
    pub max_iters: usize,
    /// Function-value restart of the momentum sequence.
    pub restart: bool,
    /// Record `(iter, objective, eta_l)` at every iteration.
    pub trace: bool,
}

impl Default for InnerConfig {
    fn default() -> Self {
        InnerConfig {
            kkt_tol: 1e-8,
            max_iters: 20_000,
            restart: true,
            trace: false,
        }
    }
}

impl InnerConfig {
    pub fn with_tol(kkt_tol: f64) -> Self {
        InnerConfig {
            kkt_tol,
            ..Default::default()
        }
    }

    /// Inner tolerance used under a root-finding tolerance `stoptol`:
    /// `min(1e-8, 0.01 · stoptol · max(1, rho))`.
    pub fn for_root_tolerance(stoptol: f64, rho: f64) -> Self {
        Self::with_tol(1e-8_f64.min(0.01 * stoptol * rho.max(1.0)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InnerTraceRow {
    pub iter: usize,
    pub objective: f64,
    pub eta_l: f64,
}

#[derive(Debug, Clone)]
pub struct InnerSolveResult {
    /// Full-length solution (zero outside the solved index set).
    pub x: Vec<f64>,
    /// `b − Ax`
    pub y: Vec<f64>,
    /// `‖b − Ax‖`
    pub phi: f64,
    pub eta_l: f64,
    pub iters: usize,
    /// `½‖Ax − b‖² + λ p(x)` with the full penalty.
    pub objective: f64,
    /// Final stopping quantity: the certificate for a single reduced solve,
    /// the full proximal residual norm after sieving.
    pub residual_norm: f64,
    pub converged: bool,
    pub trace: Vec<InnerTraceRow>,
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!("lambda = {lambda} must be > 0")));
    }
    Ok(())
}

/// Proximal residual `R(x) = x − prox_{λp}(x − ∇Φ(x))`, with `grad = ∇Φ(x)`
/// supplied by the caller.
pub fn residual_r(x: &[f64], grad: &[f64], reg: &Regularizer, lambda: f64) -> Result<Vec<f64>> {
    if grad.len() != x.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: grad.len(),
        });
    }
    let v: Vec<f64> = x.iter().zip(grad).map(|(a, g)| a - g).collect();
    let p = reg.prox(&v, lambda)?;
    Ok(x.iter().zip(&p).map(|(a, b)| a - b).collect())
}

/// Full-dimension `R(x)` from scratch.
pub fn full_residual(ls: LeastSquares<'_>, reg: &Regularizer, lambda: f64, x: &[f64]) -> Result<Vec<f64>> {
    let (_, g) = ls.residual_and_gradient(x);
    residual_r(x, &g, reg, lambda)
}

/// Relative KKT residual `‖R(x)‖ / (1 + ‖x‖ + ‖Ax − b‖)`.
pub fn eta_l(x: &[f64], ls: LeastSquares<'_>, reg: &Regularizer, lambda: f64) -> Result<f64> {
    if x.len() != ls.n() {
        return Err(Error::DimensionMismatch {
            expected: ls.n(),
            got: x.len(),
        });
    }
    let (y, g) = ls.residual_and_gradient(x);
    let r = residual_r(x, &g, reg, lambda)?;
    Ok(norm2(&r) / (1.0 + norm2(x) + norm2(&y)))
}

/// `½‖Ax − b‖² + λ p(x)`
pub fn objective(ls: LeastSquares<'_>, reg: &Regularizer, lambda: f64, x: &[f64]) -> Result<f64> {
    let y = ls.residual(x);
    Ok(0.5 * norm2(&y).powi(2) + lambda * reg.value(x)?)
}

/// Assembles a result for a full-length `x`, recomputing `y`, `phi`,
/// `eta_l` and the objective from scratch.
pub(crate) fn finish(
    ls: LeastSquares<'_>,
    reg: &Regularizer,
    lambda: f64,
    x: Vec<f64>,
    iters: usize,
    residual_norm: f64,
    converged: bool,
    trace: Vec<InnerTraceRow>,
) -> Result<InnerSolveResult> {
    let (y, g) = ls.residual_and_gradient(&x);
    let r = residual_r(&x, &g, reg, lambda)?;
    let phi = norm2(&y);
    let eta_l = norm2(&r) / (1.0 + norm2(&x) + phi);
    let objective = 0.5 * phi * phi + lambda * reg.value(&x)?;
    Ok(InnerSolveResult {
        x,
        y,
        phi,
        eta_l,
        iters,
        objective,
        residual_norm,
        converged,
        trace,
    })
}

/// Working state of a reduced problem: `A_{:I}`, `b`, the restricted penalty.
struct Reduced<'a> {
    a: crate::data::SparseMatrix,
    b: &'a [f64],
    reg: Regularizer,
    lambda: f64,
}

impl Reduced<'_> {
    fn m(&self) -> usize {
        self.a.rows()
    }

    fn k(&self) -> usize {
        self.a.cols()
    }

    /// `∇Φ(z)` from `Az`
    fn gradient(&self, az: &[f64]) -> Vec<f64> {
        let r: Vec<f64> = az.iter().zip(self.b).map(|(v, b)| v - b).collect();
        let mut g = vec![0.0; self.k()];
        self.a.rmatvec_into(&r, &mut g);
        g
    }

    fn objective(&self, z: &[f64], az: &[f64]) -> f64 {
        let fit: f64 = az
            .iter()
            .zip(self.b)
            .map(|(v, b)| (v - b) * (v - b))
            .sum::<f64>();
        // restricted penalty has matching length by construction
        0.5 * fit + self.lambda * self.reg.value(z).unwrap_or(f64::INFINITY)
    }

    fn matvec(&self, z: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.m()];
        self.a.matvec_into(z, &mut out);
        out
    }

    /// Certificate value and polished point at `z`.
    fn certificate(&self, z: &[f64], az: &[f64]) -> (f64, Vec<f64>) {
        let g = self.gradient(az);
        let v: Vec<f64> = z.iter().zip(&g).map(|(a, b)| a - b).collect();
        let mut p = vec![0.0; self.k()];
        self.reg.prox_into(&v, self.lambda, &mut p);
        let ap = self.matvec(&p);
        let gp = self.gradient(&ap);
        let cert = z
            .iter()
            .zip(&p)
            .zip(gp.iter().zip(&g))
            .map(|((zi, pi), (gpi, gi))| {
                let d = zi - pi + gpi - gi;
                d * d
            })
            .sum::<f64>()
            .sqrt();
        (cert, p)
    }

    fn rel_residual(&self, z: &[f64], az: &[f64]) -> f64 {
        let g = self.gradient(az);
        let v: Vec<f64> = z.iter().zip(&g).map(|(a, b)| a - b).collect();
        let mut p = vec![0.0; self.k()];
        self.reg.prox_into(&v, self.lambda, &mut p);
        let fit = az
            .iter()
            .zip(self.b)
            .map(|(v, b)| (v - b) * (v - b))
            .sum::<f64>()
            .sqrt();
        dist2(z, &p) / (1.0 + norm2(z) + fit)
    }
}

/// Solves the regularized problem restricted to the coordinates `idx`.
///
/// `warm` is a full-length starting point (its entries outside `idx` are
/// ignored). An empty `idx` returns the evaluation at `x = 0`. When
/// `max_iters` is exhausted the last polished iterate is returned with
/// `converged = false`.
pub fn solve_reduced(
    ls: LeastSquares<'_>,
    reg: &Regularizer,
    lambda: f64,
    idx: &[usize],
    warm: Option<&[f64]>,
    cfg: &InnerConfig,
) -> Result<InnerSolveResult> {
    check_lambda(lambda)?;
    let n = ls.n();
    if let Some(w) = warm {
        if w.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: w.len(),
            });
        }
    }
    if let Regularizer::SortedL1 { weights } = reg {
        if weights.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: weights.len(),
            });
        }
    }
    if idx.iter().any(|&i| i >= n) {
        return Err(Error::InvalidParameter("index set out of range".into()));
    }
    if idx.is_empty() {
        let x = vec![0.0; n];
        let (_, g) = ls.residual_and_gradient(&x);
        let r = residual_r(&x, &g, reg, lambda)?;
        return finish(ls, reg, lambda, x, 0, norm2(&r), true, Vec::new());
    }

    let sub = Reduced {
        a: ls.a.select_columns(idx),
        b: ls.b,
        reg: reg.restrict(idx.len()),
        lambda,
    };
    let mut lip = sub.a.lipschitz_estimate(POWER_ITERS, LIPSCHITZ_SAFETY);
    if lip <= 0.0 {
        lip = 1.0;
    }

    let mut z = match warm {
        Some(w) => gather(w, idx),
        None => vec![0.0; idx.len()],
    };
    let mut az = sub.matvec(&z);
    let mut f_z = sub.objective(&z, &az);
    let mut w = z.clone();
    let mut aw = az.clone();
    let mut t = 1.0f64;
    let mut plain = true;
    let mut trace = Vec::new();
    let mut zn = vec![0.0; sub.k()];
    let mut step_in = vec![0.0; sub.k()];

    let mut iter = 0usize;
    loop {
        if iter % CHECK_EVERY == 0 || iter == cfg.max_iters {
            let (cert, p) = sub.certificate(&z, &az);
            if cert <= cfg.kkt_tol || iter >= cfg.max_iters {
                let converged = cert <= cfg.kkt_tol;
                let x = scatter(&p, idx, n);
                return finish(ls, reg, lambda, x, iter, cert, converged, trace);
            }
        }
        iter += 1;

        let g = sub.gradient(&aw);
        for ((s, wi), gi) in step_in.iter_mut().zip(&w).zip(&g) {
            *s = wi - gi / lip;
        }
        sub.reg.prox_into(&step_in, lambda / lip, &mut zn);
        let azn = sub.matvec(&zn);
        let f_new = sub.objective(&zn, &azn);

        if f_new > f_z + 1e-14 * (1.0 + f_z.abs()) {
            if plain {
                // A plain proximal-gradient step can only increase the
                // objective when 1/L is too long.
                lip *= 2.0;
            } else if cfg.restart {
                w.copy_from_slice(&z);
                aw.copy_from_slice(&az);
                t = 1.0;
                plain = true;
            } else {
                // without restart, keep the momentum but never accept an
                // increase
                w.copy_from_slice(&z);
                aw.copy_from_slice(&az);
                plain = true;
            }
            continue;
        }

        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        let beta = (t - 1.0) / t_next;
        for i in 0..w.len() {
            w[i] = zn[i] + beta * (zn[i] - z[i]);
        }
        for i in 0..aw.len() {
            aw[i] = azn[i] + beta * (azn[i] - az[i]);
        }
        plain = beta == 0.0;
        t = t_next;
        z.copy_from_slice(&zn);
        az = azn;
        f_z = f_new;

        if cfg.trace {
            trace.push(InnerTraceRow {
                iter,
                objective: f_z,
                eta_l: sub.rel_residual(&z, &az),
            });
        }
    }
}

/// Evaluates `phi(lambda)` by a full-dimension solve, through adaptive
/// sieving when `sieve` is given (initial index set = support of `warm`).
pub fn phi_eval(
    ls: LeastSquares<'_>,
    reg: &Regularizer,
    lambda: f64,
    warm: Option<&[f64]>,
    cfg: &InnerConfig,
    sieve: Option<&SieveConfig>,
) -> Result<InnerSolveResult> {
    check_lambda(lambda)?;
    match sieve {
        Some(sc) => {
            let i0 = warm.map(crate::linalg::support).unwrap_or_default();
            let (res, _) = sieve_solve(ls, reg, lambda, &i0, warm, sc, cfg)?;
            Ok(res)
        }
        None => {
            let all: Vec<usize> = (0..ls.n()).collect();
            solve_reduced(ls, reg, lambda, &all, warm, cfg)
        }
    }
}

/// Writes an inner iteration trace as CSV (`iter,objective,eta_l`).
pub fn write_trace_csv(rows: &[InnerTraceRow], path: impl AsRef<Path>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
