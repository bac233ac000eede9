//! Univariate root finding on the value function `phi(lambda) = rho`.
//!
//! * [`secant_solve`]: the plain two-point secant iteration, no safeguard.
//! * [`hybrid_secant_solve`]: secant steps inside the initial bracket,
//!   accepted while they keep making progress, bisection otherwise.
//! * [`bisection_solve`]: classic bisection.
//! * [`newton_hybrid_solve`]: the same safeguard around semismooth Newton
//!   steps, with the l1 generalized derivative from [`hs_derivative_l1`].
//!
//! The safeguarded solvers work on [`Sample`]s, so a solver can hand back the
//! primal solution at the accepted root without re-solving.

mod hs;
mod hybrid;
mod order;
mod secant;
mod testfns;

use std::path::Path;

use serde::Serialize;

pub use hs::hs_derivative_l1;
pub use hybrid::{bisection_solve, hybrid_secant_solve, newton_hybrid_solve};
pub use order::q_order_estimate;
pub use secant::{secant_solve, secant_step, SecantRun};
pub use testfns::{eval_beta_fn, eval_constructed_fn};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RootConfig {
    /// Stop once `|phi − rho| / max(1, rho) ≤ stoptol`.
    pub stoptol: f64,
    /// Sufficient-decrease factor for accepting a third consecutive secant step.
    pub mu: f64,
    pub max_outer: usize,
}

impl Default for RootConfig {
    fn default() -> Self {
        RootConfig {
            stoptol: 1e-6,
            mu: 0.5,
            max_outer: 200,
        }
    }
}

impl RootConfig {
    pub fn with_tol(stoptol: f64) -> Self {
        RootConfig {
            stoptol,
            ..Default::default()
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if !(self.mu > 0.0 && self.mu < 1.0) {
            return Err(Error::InvalidParameter(format!("mu = {} not in (0, 1)", self.mu)));
        }
        if !(self.stoptol >= 0.0) {
            return Err(Error::InvalidParameter("stoptol must be >= 0".into()));
        }
        Ok(())
    }
}

/// Relative constraint residual `|phi − rho| / max(1, rho)`.
pub fn eta(phi: f64, rho: f64) -> f64 {
    (phi - rho).abs() / rho.max(1.0)
}

/// One evaluation of the value function.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub lambda: f64,
    pub phi: f64,
    /// Primal solution at `lambda`; may be empty for plain 1-D functions.
    pub x: Vec<f64>,
    pub inner_iters: usize,
}

impl Sample {
    pub fn scalar(lambda: f64, phi: f64) -> Self {
        Sample {
            lambda,
            phi,
            x: Vec::new(),
            inner_iters: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    /// Bracket endpoint supplied to the solver.
    Initial,
    Secant,
    Newton,
    /// Trial point evaluated and then rejected by the safeguard.
    Rejected,
    Bisection,
}

/// One row of the per-evaluation log.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IterRecord {
    pub k: usize,
    pub lambda: f64,
    pub phi: f64,
    pub eta: f64,
    pub step: StepKind,
    pub inner_iters: usize,
    pub support: usize,
    /// Bracket after processing this evaluation.
    pub lower: f64,
    pub upper: f64,
}

/// Bracket, accepted iterate history and safeguard counter of a
/// safeguarded solve.
#[derive(Debug, Clone, Default)]
pub struct RootState {
    pub lower: f64,
    pub upper: f64,
    /// Accepted iterates `(lambda_k, phi_k − rho)`, starting with the two
    /// bracket endpoints.
    pub history: Vec<(f64, f64)>,
    /// Consecutive accepted fast (secant / Newton) steps since the last
    /// bisection.
    pub safeguard: usize,
    pub log: Vec<IterRecord>,
    /// Value-function evaluations performed by the solver (bracket endpoints
    /// excluded).
    pub evals: usize,
}

impl RootState {
    fn new(lower: &Sample, upper: &Sample, rho: f64) -> Self {
        let mut st = RootState {
            lower: lower.lambda,
            upper: upper.lambda,
            history: vec![(lower.lambda, lower.phi - rho), (upper.lambda, upper.phi - rho)],
            ..Default::default()
        };
        st.record(lower, rho, StepKind::Initial);
        st.record(upper, rho, StepKind::Initial);
        st
    }

    /// Shrinks the bracket with a fresh evaluation.
    fn update_bracket(&mut self, s: &Sample, rho: f64) {
        if s.phi > rho {
            self.upper = self.upper.min(s.lambda);
        } else {
            self.lower = self.lower.max(s.lambda);
        }
    }

    fn record(&mut self, s: &Sample, rho: f64, step: StepKind) {
        self.log.push(IterRecord {
            k: self.log.len(),
            lambda: s.lambda,
            phi: s.phi,
            eta: eta(s.phi, rho),
            step,
            inner_iters: s.inner_iters,
            support: s.x.iter().filter(|v| **v != 0.0).count(),
            lower: self.lower,
            upper: self.upper,
        });
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        write_iterate_csv(&self.log, path)
    }
}

/// Writes the iterate log as CSV.
pub fn write_iterate_csv(log: &[IterRecord], path: impl AsRef<Path>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in log {
        w.serialize(r)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[derive(Debug, Clone)]
pub struct RootOutcome {
    pub lambda: f64,
    /// The sample at `lambda` (the best one seen when not converged).
    pub sample: Sample,
    pub state: RootState,
    pub converged: bool,
}

/// A validated bracket `phi(lower) < rho < phi(upper)`.
#[derive(Debug, Clone)]
pub struct Bracket {
    pub lower: Sample,
    pub upper: Sample,
    /// Evaluations spent building the bracket.
    pub evals: usize,
}

/// Builds the initial bracket: `lambda_0 = 0.95 lambda_inf` (or `lambda_inf`
/// if that is not above `rho`), then `lambda_{-1} = lambda_0 / 10^j` for the
/// first `j ≤ 12` with `phi < rho`.
///
/// An endpoint whose `eta` already meets `stoptol` is accepted on its side
/// even if it sits marginally across `rho`.
pub fn bracket_init<F>(
    mut phi: F,
    rho: f64,
    bnorm: f64,
    lambda_inf: f64,
    stoptol: f64,
) -> Result<Bracket>
where
    F: FnMut(f64) -> Result<Sample>,
{
    if !(rho > 0.0 && rho < bnorm) {
        return Err(Error::InvalidRho { rho, bnorm });
    }
    let mut evals = 0;
    let mut upper = phi(0.95 * lambda_inf)?;
    evals += 1;
    if !(upper.phi > rho || eta(upper.phi, rho) <= stoptol) {
        upper = phi(lambda_inf)?;
        evals += 1;
    }
    for j in 1..=12 {
        let s = phi(upper.lambda / 10f64.powi(j))?;
        evals += 1;
        if s.phi < rho || eta(s.phi, rho) <= stoptol {
            return Ok(Bracket {
                lower: s,
                upper,
                evals,
            });
        }
    }
    Err(Error::RhoTooSmall)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_examples() {
        assert!((eta(0.30001, 0.3) - 1e-5).abs() < 1e-15);
        assert_eq!(eta(0.3, 0.3), 0.0);
        assert!((eta(2.2, 2.0) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn bracket_on_scalar_closed_form() {
        // φ(λ) = min(λ, 1), ‖b‖ = 1
        let f = |l: f64| Ok(Sample::scalar(l, l.min(1.0)));
        let br = bracket_init(f, 0.3, 1.0, 1.0, 1e-6).unwrap();
        assert!((br.upper.lambda - 0.95).abs() < 1e-15);
        assert!((br.lower.lambda - 0.095).abs() < 1e-15);
        assert_eq!(br.evals, 2);
        assert!(matches!(
            bracket_init(f, 1.0, 1.0, 1.0, 1e-6),
            Err(Error::InvalidRho { .. })
        ));
    }

    #[test]
    fn bracket_near_bnorm_falls_back_to_lambda_inf() {
        let f = |l: f64| Ok(Sample::scalar(l, l.min(1.0)));
        let br = bracket_init(f, 0.99, 1.0, 1.0, 1e-9).unwrap();
        assert_eq!(br.upper.lambda, 1.0);
        assert!(br.lower.phi < 0.99 && br.upper.phi > 0.99);
    }

    #[test]
    fn bracket_gives_up_when_rho_is_tiny() {
        let f = |l: f64| Ok(Sample::scalar(l, 1.0 + l));
        assert!(matches!(
            bracket_init(f, 0.5, 3.0, 1.0, 1e-9),
            Err(Error::RhoTooSmall)
        ));
    }

    #[test]
    fn config_validation() {
        assert!(RootConfig::default().validate().is_ok());
        let bad = RootConfig {
            mu: 1.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
