use crate::{Error, Result};

/// Secant proposal through `(x_k, f_k)` and `(x_prev, f_prev)`.
pub fn secant_step(x_k: f64, x_prev: f64, f_k: f64, f_prev: f64) -> Result<f64> {
    if f_k == f_prev {
        return Err(Error::DegenerateSecant { x: x_k });
    }
    Ok(x_k - (x_k - x_prev) / (f_k - f_prev) * f_k)
}

/// Iterates of a plain secant run, excluding the two starting points.
#[derive(Debug, Clone, PartialEq)]
pub struct SecantRun {
    pub iterates: Vec<f64>,
    pub values: Vec<f64>,
    pub converged: bool,
}

/// Plain secant iteration from `x_prev`, `x0` until `|f(x_k)| ≤ stoptol` or
/// `max_iter` steps. No safeguard: a zero divided difference is an error.
pub fn secant_solve<F>(mut f: F, x_prev: f64, x0: f64, stoptol: f64, max_iter: usize) -> Result<SecantRun>
where
    F: FnMut(f64) -> f64,
{
    let (mut xp, mut fp) = (x_prev, f(x_prev));
    let (mut xk, mut fk) = (x0, f(x0));
    let mut run = SecantRun {
        iterates: Vec::new(),
        values: Vec::new(),
        converged: fk.abs() <= stoptol,
    };
    while !run.converged && run.iterates.len() < max_iter {
        let next = secant_step(xk, xp, fk, fp)?;
        xp = xk;
        fp = fk;
        xk = next;
        fk = f(xk);
        run.iterates.push(xk);
        run.values.push(fk);
        run.converged = fk.abs() <= stoptol;
    }
    Ok(run)
}
