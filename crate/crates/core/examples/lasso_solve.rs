//! Basis pursuit denoising on a synthetic instance:
//! min ‖x‖₁ s.t. ‖Ax − b‖ ≤ 0.1‖b‖, solved by the safeguarded secant method.

use smop::{smop_solve, Regularizer, SmopConfig, SynthSpec};

fn main() -> smop::Result<()> {
    let (data, x_true) = smop::data::synth_instance(&SynthSpec::new(200, 2000, 20, 0.01, 1))?;
    let problem = data.with_ratio(0.1)?;
    let r = smop_solve(&problem, &Regularizer::L1, &SmopConfig::default())?;

    println!("lambda* = {:.6e}  (lambda_inf = {:.4e})", r.lambda_star, r.lambda_inf);
    println!("phi = {:.10}  rho = {:.10}  eta = {:.2e}", r.phi, r.rho, r.eta);
    println!("{} subproblems, {} inner iterations, {:.1} ms", r.n_subproblems, r.inner_iters_total, r.wall_ms);

    let found: Vec<usize> = (0..r.x.len()).filter(|&j| r.x[j] != 0.0).collect();
    let truth: Vec<usize> = (0..x_true.len()).filter(|&j| x_true[j] != 0.0).collect();
    let hits = truth.iter().filter(|j| found.contains(j)).count();
    println!("nnz(x*) = {}, recovered {hits}/{} true support entries", r.nnz, truth.len());

    for rec in &r.log {
        println!(
            "  k={:<2} {:<10} lambda={:.8e} phi-rho={:+.3e} |J|={}",
            rec.k,
            format!("{:?}", rec.step),
            rec.lambda,
            rec.phi - r.rho,
            rec.support
        );
    }
    println!("{}", smop::cli::result_json(&r, &Regularizer::L1)?);
    Ok(())
}
