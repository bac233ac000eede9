//! Adaptive sieving: solve the regularized problem through reduced problems
//! on a growing index set.
//!
//! Each round solves the problem restricted to `I_s`, computes the full
//! proximal residual `R(x^s)`, and adds to `I_s` the (at most `k_max`)
//! outside coordinates with the largest nonzero `|R_j|`. The loop ends once
//! `‖R(x^s)‖ ≤ eps` at full dimension.

use std::path::Path;

use serde::Serialize;

use crate::data::LeastSquares;
use crate::inner::{finish, full_residual, solve_reduced, InnerConfig, InnerSolveResult};
use crate::linalg::norm2;
use crate::regularizer::Regularizer;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SieveConfig {
    /// Outer tolerance on the full proximal residual norm; also the
    /// tolerance of each reduced solve.
    pub eps: f64,
    pub k_max: usize,
    pub max_rounds: usize,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig {
            eps: 1e-8,
            k_max: 500,
            max_rounds: 100,
        }
    }
}

impl SieveConfig {
    pub fn with_eps(eps: f64) -> Self {
        SieveConfig {
            eps,
            ..Default::default()
        }
    }

    /// Entries with `|R_j|` above this count as nonzero when building `J`.
    pub fn nonzero_threshold(&self) -> f64 {
        1e-12_f64.max(1e-3 * self.eps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SieveRound {
    pub round: usize,
    /// `|I_s|`
    pub index_size: usize,
    /// `‖R(x^s)‖`
    pub residual_norm: f64,
    /// `|J_{s+1}|`, the outside coordinates with nonzero residual.
    pub candidates: usize,
    /// Coordinates moved into the index set after this round.
    pub added: usize,
    pub inner_iters: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SieveTrace {
    pub rounds: Vec<SieveRound>,
}

impl SieveTrace {
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        for r in &self.rounds {
            w.serialize(r)?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }
}

/// `J = { j ∉ I : |R_j| > threshold }`, ascending.
pub fn create_j(residual: &[f64], in_set: &[bool], threshold: f64) -> Vec<usize> {
    residual
        .iter()
        .zip(in_set)
        .enumerate()
        .filter(|(_, (r, inside))| !**inside && r.abs() > threshold)
        .map(|(j, _)| j)
        .collect()
}

/// The `k` members of `candidates` with the largest `|residual_j|`, ties
/// broken by smaller index. Returned in selection order.
pub fn select_top_k(residual: &[f64], candidates: &[usize], k: usize) -> Vec<usize> {
    let mut c = candidates.to_vec();
    c.sort_by(|&i, &j| {
        residual[j]
            .abs()
            .partial_cmp(&residual[i].abs())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(i.cmp(&j))
    });
    c.truncate(k);
    c
}

/// Adaptive sieving solve at `lambda` from the initial index set `i0`.
///
/// An empty `i0` starts from `x = 0` without a reduced solve. If
/// `max_rounds` runs out the last iterate is returned with
/// `converged = false`.
pub fn sieve_solve(
    ls: LeastSquares<'_>,
    reg: &Regularizer,
    lambda: f64,
    i0: &[usize],
    warm: Option<&[f64]>,
    cfg: &SieveConfig,
    inner: &InnerConfig,
) -> Result<(InnerSolveResult, SieveTrace)> {
    if !(cfg.eps >= 0.0) || cfg.k_max == 0 {
        return Err(Error::InvalidParameter(
            "sieving needs eps >= 0 and k_max >= 1".into(),
        ));
    }
    let n = ls.n();
    if i0.iter().any(|&i| i >= n) {
        return Err(Error::InvalidParameter("initial index set out of range".into()));
    }
    let mut in_set = vec![false; n];
    for &i in i0 {
        in_set[i] = true;
    }
    let mut index: Vec<usize> = (0..n).filter(|&i| in_set[i]).collect();

    let mut reduced_cfg = inner.clone();
    reduced_cfg.kkt_tol = cfg.eps;
    reduced_cfg.trace = false;

    let zero = vec![0.0; n];
    let mut x = zero.clone();
    let mut total_iters = 0;
    if !index.is_empty() {
        let r = solve_reduced(ls, reg, lambda, &index, warm.or(Some(&zero)), &reduced_cfg)?;
        total_iters += r.iters;
        x = r.x;
    }
    let mut res = full_residual(ls, reg, lambda, &x)?;
    let mut res_norm = norm2(&res);
    let threshold = cfg.nonzero_threshold();
    let mut trace = SieveTrace::default();
    let mut round_iters = total_iters;

    loop {
        if res_norm <= cfg.eps {
            trace.rounds.push(SieveRound {
                round: trace.rounds.len(),
                index_size: index.len(),
                residual_norm: res_norm,
                candidates: 0,
                added: 0,
                inner_iters: round_iters,
            });
            break;
        }
        let j = create_j(&res, &in_set, threshold);
        let added = if j.is_empty() {
            // Residual lives on I_s: the reduced solve was not tight enough.
            reduced_cfg.kkt_tol = (reduced_cfg.kkt_tol / 10.0).max(1e-15);
            0
        } else {
            let k = j.len().min(cfg.k_max);
            for i in select_top_k(&res, &j, k) {
                in_set[i] = true;
            }
            index = (0..n).filter(|&i| in_set[i]).collect();
            k
        };
        trace.rounds.push(SieveRound {
            round: trace.rounds.len(),
            index_size: index.len() - added,
            residual_norm: res_norm,
            candidates: j.len(),
            added,
            inner_iters: round_iters,
        });
        if trace.rounds.len() > cfg.max_rounds {
            log::warn!("sieving hit max_rounds = {} at lambda = {lambda}", cfg.max_rounds);
            let out = finish(ls, reg, lambda, x, total_iters, res_norm, false, Vec::new())?;
            return Ok((out, trace));
        }
        let r = solve_reduced(ls, reg, lambda, &index, Some(&x), &reduced_cfg)?;
        round_iters = r.iters;
        total_iters += r.iters;
        x = r.x;
        res = full_residual(ls, reg, lambda, &x)?;
        res_norm = norm2(&res);
    }
    let out = finish(ls, reg, lambda, x, total_iters, res_norm, true, Vec::new())?;
    Ok((out, trace))
}
