//! Safeguarded root finders on a bracket `phi(lower) < rho < phi(upper)`.

use super::{eta, secant_step, RootConfig, RootOutcome, RootState, Sample, StepKind};
use crate::{Error, Result};

fn validate_bracket(lower: &Sample, upper: &Sample, rho: f64) -> Result<()> {
    let (fl, fu) = (lower.phi - rho, upper.phi - rho);
    if !(lower.lambda < upper.lambda && fl < 0.0 && fu > 0.0) {
        return Err(Error::InvalidBracket {
            lower: lower.lambda,
            upper: upper.lambda,
            f_lower: fl,
            f_upper: fu,
        });
    }
    Ok(())
}

/// Returns an endpoint outright when it already meets the tolerance.
fn endpoint_root(lower: &Sample, upper: &Sample, rho: f64, cfg: &RootConfig) -> Option<Sample> {
    let (eu, el) = (eta(upper.phi, rho), eta(lower.phi, rho));
    if eu <= cfg.stoptol && eu <= el {
        Some(upper.clone())
    } else if el <= cfg.stoptol {
        Some(lower.clone())
    } else {
        None
    }
}

fn done(sample: Sample, state: RootState, converged: bool) -> RootOutcome {
    RootOutcome {
        lambda: sample.lambda,
        sample,
        state,
        converged,
    }
}

fn keep_best(best: &mut Sample, s: &Sample, rho: f64) {
    if (s.phi - rho).abs() < (best.phi - rho).abs() {
        *best = s.clone();
    }
}

/// Where a fast step's proposal comes from.
enum Proposal<'a, D> {
    Secant,
    Newton(&'a mut D),
}

/// Shared safeguard loop. A fast proposal inside the *initial* bracket is
/// evaluated; it is accepted for the first two consecutive fast steps, and
/// from the third on only if `|phi − rho|` dropped by the factor `mu`
/// relative to three accepted iterates back. Otherwise (or when the proposal
/// falls outside) the current bracket is bisected.
fn safeguarded<F, D>(
    mut phi: F,
    rho: f64,
    lower: Sample,
    upper: Sample,
    cfg: &RootConfig,
    mut proposal: Proposal<'_, D>,
) -> Result<RootOutcome>
where
    F: FnMut(f64) -> Result<Sample>,
    D: FnMut(&Sample) -> Result<f64>,
{
    cfg.validate()?;
    let mut state = RootState::new(&lower, &upper, rho);
    if let Some(s) = endpoint_root(&lower, &upper, rho, cfg) {
        return Ok(done(s, state, true));
    }
    validate_bracket(&lower, &upper, rho)?;
    let (init_lo, init_hi) = (lower.lambda, upper.lambda);
    let fast_kind = match proposal {
        Proposal::Secant => StepKind::Secant,
        Proposal::Newton(_) => StepKind::Newton,
    };

    let mut best = if (lower.phi - rho).abs() < (upper.phi - rho).abs() {
        lower.clone()
    } else {
        upper.clone()
    };
    // latest accepted iterate, with its primal point (for Newton derivatives)
    let mut current = upper;

    for _ in 0..cfg.max_outer {
        let h = &state.history;
        let (lam_k, f_k) = h[h.len() - 1];
        let (lam_km1, f_km1) = h[h.len() - 2];
        let candidate = match &mut proposal {
            Proposal::Secant => secant_step(lam_k, lam_km1, f_k, f_km1).ok(),
            Proposal::Newton(deriv) => match deriv(&current) {
                Ok(v) if v > 0.0 && v.is_finite() => Some(lam_k - f_k / v),
                Ok(v) => {
                    log::debug!("unusable derivative {v} at lambda = {lam_k}");
                    None
                }
                Err(e) => {
                    log::debug!("derivative failed at lambda = {lam_k}: {e}");
                    None
                }
            },
        }
        .filter(|l| l.is_finite() && *l >= init_lo && *l <= init_hi);

        let mut next = None;
        if let Some(lam) = candidate {
            let s = phi(lam)?;
            state.evals += 1;
            state.safeguard += 1;
            keep_best(&mut best, &s, rho);
            let accept = state.safeguard < 3 || {
                let (_, f_km2) = state.history[state.history.len() - 3];
                (s.phi - rho).abs() <= cfg.mu * f_km2.abs()
            };
            if eta(s.phi, rho) <= cfg.stoptol {
                state.update_bracket(&s, rho);
                state.record(&s, rho, fast_kind);
                state.history.push((s.lambda, s.phi - rho));
                return Ok(done(s, state, true));
            }
            if accept {
                next = Some((s, fast_kind));
            } else {
                state.update_bracket(&s, rho);
                state.record(&s, rho, StepKind::Rejected);
            }
        }
        let (s, kind) = match next {
            Some(v) => v,
            None => {
                let mid = 0.5 * (state.lower + state.upper);
                let s = phi(mid)?;
                state.evals += 1;
                state.safeguard = 0;
                keep_best(&mut best, &s, rho);
                (s, StepKind::Bisection)
            }
        };
        state.update_bracket(&s, rho);
        state.record(&s, rho, kind);
        state.history.push((s.lambda, s.phi - rho));
        if eta(s.phi, rho) <= cfg.stoptol {
            return Ok(done(s, state, true));
        }
        current = s;
    }
    log::warn!("root finder hit max_outer = {}", cfg.max_outer);
    Ok(done(best, state, false))
}

/// Globally convergent secant method on `phi(lambda) = rho` from a valid
/// bracket. Stops when `|phi − rho| / max(1, rho) ≤ stoptol`.
pub fn hybrid_secant_solve<F>(
    phi: F,
    rho: f64,
    lower: Sample,
    upper: Sample,
    cfg: &RootConfig,
) -> Result<RootOutcome>
where
    F: FnMut(f64) -> Result<Sample>,
{
    safeguarded::<F, fn(&Sample) -> Result<f64>>(phi, rho, lower, upper, cfg, Proposal::Secant)
}

/// Semismooth Newton steps `lambda − (phi − rho)/v` under the same safeguard;
/// `deriv` supplies `v` at the latest accepted sample. A failed or
/// nonpositive derivative falls back to bisection.
pub fn newton_hybrid_solve<F, D>(
    phi: F,
    mut deriv: D,
    rho: f64,
    lower: Sample,
    upper: Sample,
    cfg: &RootConfig,
) -> Result<RootOutcome>
where
    F: FnMut(f64) -> Result<Sample>,
    D: FnMut(&Sample) -> Result<f64>,
{
    safeguarded(phi, rho, lower, upper, cfg, Proposal::Newton(&mut deriv))
}

/// Classic bisection on `phi(lambda) − rho`.
pub fn bisection_solve<F>(
    mut phi: F,
    rho: f64,
    lower: Sample,
    upper: Sample,
    cfg: &RootConfig,
) -> Result<RootOutcome>
where
    F: FnMut(f64) -> Result<Sample>,
{
    cfg.validate()?;
    let mut state = RootState::new(&lower, &upper, rho);
    if let Some(s) = endpoint_root(&lower, &upper, rho, cfg) {
        return Ok(done(s, state, true));
    }
    validate_bracket(&lower, &upper, rho)?;
    let mut best = if (lower.phi - rho).abs() < (upper.phi - rho).abs() {
        lower
    } else {
        upper
    };
    for _ in 0..cfg.max_outer {
        let mid = 0.5 * (state.lower + state.upper);
        let s = phi(mid)?;
        state.evals += 1;
        state.update_bracket(&s, rho);
        state.record(&s, rho, StepKind::Bisection);
        state.history.push((s.lambda, s.phi - rho));
        if eta(s.phi, rho) <= cfg.stoptol {
            return Ok(done(s, state, true));
        }
        keep_best(&mut best, &s, rho);
    }
    Ok(done(best, state, false))
}
