//! Plain secant iterates on the one-sided-derivative test function (three
//! values of beta) and on the function with kinks accumulating at its root,
//! plus the empirical convergence order of the latter.

use smop::rootfind::{eval_beta_fn, eval_constructed_fn, q_order_estimate, secant_solve};

fn row(label: &str, v: &[f64]) {
    let cells: Vec<String> = v.iter().map(|x| format!("{x:>9.1e}")).collect();
    println!("{label:<10}{}", cells.join(""));
}

fn main() -> smop::Result<()> {
    for beta in [1.1, 1.5, 2.1] {
        let run = secant_solve(|x| eval_beta_fn(x, beta), 0.01, 0.005, 0.0, 8)?;
        row(&format!("beta {beta}"), &run.iterates);
    }

    let run = secant_solve(|x| eval_constructed_fn(x, 1.0), 0.545, 0.5, 0.0, 8)?;
    println!();
    row("x", &run.iterates);
    row("f(x)", &run.values);
    let mags: Vec<f64> = run.iterates.iter().map(|v| v.abs()).collect();
    println!("estimated Q-order: {:.3}", q_order_estimate(&mags)?);
    Ok(())
}
