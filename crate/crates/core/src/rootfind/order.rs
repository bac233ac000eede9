use crate::{Error, Result};

/// Empirical Q-order of a convergent error sequence: the least-squares slope
/// of `log e_{k+1}` against `log e_k` over the last (up to) four pairs.
pub fn q_order_estimate(errors: &[f64]) -> Result<f64> {
    if errors.len() < 4 {
        return Err(Error::InvalidParameter(
            "need at least 4 error magnitudes".into(),
        ));
    }
    let pairs = (errors.len() - 1).min(4);
    let tail = &errors[errors.len() - pairs - 1..];
    if tail.iter().any(|e| !(*e > 0.0) || !e.is_finite()) {
        return Err(Error::InvalidParameter("errors must be positive".into()));
    }
    if tail.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParameter(
            "errors must be strictly decreasing".into(),
        ));
    }
    let xs: Vec<f64> = tail[..pairs].iter().map(|e| e.ln()).collect();
    let ys: Vec<f64> = tail[1..].iter().map(|e| e.ln()).collect();
    let np = pairs as f64;
    let mx = xs.iter().sum::<f64>() / np;
    let my = ys.iter().sum::<f64>() / np;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}
