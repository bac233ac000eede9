use nalgebra::{DMatrix, DVector};

use crate::data::SparseMatrix;
use crate::{Error, Result};

/// Generalized derivative of the l1 value function at `lambda`:
///
/// ```text
/// v = lambda ||h||^2 / phi,   h = A_J (A_Jᵀ A_J)^{-1} s,
/// ```
///
/// with `J = supp(x)` and `s = sign(x_J)`, so `||h||² = sᵀ (A_Jᵀ A_J)^{-1} s`.
/// A numerically singular Gram matrix gets a ridge of `1e-10 · trace`; the
/// value is then only a step proposal.
pub fn hs_derivative_l1(x: &[f64], a: &SparseMatrix, lambda: f64, phi: f64) -> Result<f64> {
    if x.len() != a.cols() {
        return Err(Error::DimensionMismatch {
            expected: a.cols(),
            got: x.len(),
        });
    }
    if !(phi > 0.0) {
        return Err(Error::InvalidParameter(format!("phi = {phi} must be > 0")));
    }
    let support: Vec<usize> = (0..x.len()).filter(|&i| x[i] != 0.0).collect();
    if support.is_empty() {
        return Err(Error::ZeroSupport);
    }
    let m = a.rows();
    let k = support.len();
    let mut aj = DMatrix::<f64>::zeros(m, k);
    for (c, &j) in support.iter().enumerate() {
        let (idx, val) = a.column(j);
        for (&i, &v) in idx.iter().zip(val) {
            aj[(i, c)] = v;
        }
    }
    let gram = aj.transpose() * &aj;
    let s = DVector::from_iterator(k, support.iter().map(|&j| x[j].signum()));

    let h2 = match gram.clone().cholesky() {
        Some(ch) if k <= m => {
            let u = ch.solve(&s);
            s.dot(&u)
        }
        _ => {
            let ridge = 1e-10 * gram.trace().max(f64::MIN_POSITIVE);
            log::debug!("rank-deficient A_J (|J| = {k}, m = {m}); ridge {ridge:e}");
            let reg = gram + DMatrix::<f64>::identity(k, k) * ridge;
            let ch = reg.cholesky().ok_or_else(|| {
                Error::InvalidParameter("Gram matrix not positive definite after ridge".into())
            })?;
            s.dot(&ch.solve(&s))
        }
    };
    Ok(lambda * h2 / phi)
}
