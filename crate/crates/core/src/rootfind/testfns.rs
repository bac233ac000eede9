//! One-dimensional test functions with a root at zero.

/// Piecewise quadratic with lateral derivatives 1 (left) and `beta` (right)
/// at the root:
/// `x(x + 1)` for `x < 0`, `−beta·x(x − 1)` for `x ≥ 0`.
pub fn eval_beta_fn(x: f64, beta: f64) -> f64 {
    if x < 0.0 {
        x * (x + 1.0)
    } else {
        -beta * x * (x - 1.0)
    }
}

/// Continuous function with infinitely many kinks accumulating at the root
/// (strongly semismooth there, not piecewise smooth):
///
/// * `kappa·x` for `x < 0`,
/// * `−4^{−k}/3 + (1 + 2^{−k})·x` on `[2^{−(k+1)}, 2^{−k}]`, `k ≥ 0`,
/// * `2x − 1/3` for `x > 1`.
///
/// Dyadic boundary points go to the smaller `k`; both pieces agree there.
pub fn eval_constructed_fn(x: f64, kappa: f64) -> f64 {
    if x < 0.0 {
        return kappa * x;
    }
    if x == 0.0 {
        return 0.0;
    }
    if x > 1.0 {
        return 2.0 * x - 1.0 / 3.0;
    }
    let mut k = 0i32;
    let mut lo = 0.5f64;
    while x < lo {
        k += 1;
        lo *= 0.5;
    }
    let pow2 = 0.5f64.powi(k);
    -(pow2 * pow2) / 3.0 + (1.0 + pow2) * x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_values() {
        assert_eq!(eval_beta_fn(0.0, 1.5), 0.0);
        assert_eq!(eval_beta_fn(-0.5, 1.5), -0.25);
        assert_eq!(eval_beta_fn(0.5, 1.5), 0.375);
    }

    #[test]
    fn constructed_values() {
        assert!((eval_constructed_fn(0.5, 1.0) - 2.0 / 3.0).abs() < 1e-15);
        assert!((eval_constructed_fn(0.25, 1.0) - 0.291_666_666_666_666_7).abs() < 1e-15);
        assert_eq!(eval_constructed_fn(-1.0, 1.0), -1.0);
        assert_eq!(eval_constructed_fn(0.0, 1.0), 0.0);
        assert!((eval_constructed_fn(2.0, 1.0) - 11.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn constructed_is_continuous_at_breakpoints() {
        for k in 0..40 {
            let b = 0.5f64.powi(k);
            let left = eval_constructed_fn(b * (1.0 - 1e-12), 1.0);
            let right = eval_constructed_fn(b * (1.0 + 1e-12), 1.0);
            assert!((left - right).abs() <= 1e-11 * b.max(1e-300) + 1e-300, "k = {k}");
        }
    }
}
