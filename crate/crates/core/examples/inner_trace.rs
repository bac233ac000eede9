//! One regularized least-squares solve with the accelerated proximal gradient
//! method, printing the objective and KKT residual trace.
//!
//! cargo run --example inner_trace -- [trace.csv]

use smop::inner::{solve_reduced, write_trace_csv};
use smop::{InnerConfig, Regularizer, SynthSpec};

fn main() -> smop::Result<()> {
    let (data, _) = smop::data::synth_instance(&SynthSpec::new(100, 300, 10, 0.01, 4))?;
    let reg = Regularizer::L1;
    let lambda = 0.05 * reg.lambda_inf(&data.a, &data.b)?;
    let mut cfg = InnerConfig::with_tol(1e-10);
    cfg.trace = true;
    let all: Vec<usize> = (0..data.a.cols()).collect();
    let r = solve_reduced(data.ls(), &reg, lambda, &all, None, &cfg)?;

    for row in r.trace.iter().step_by((r.trace.len() / 15).max(1)) {
        println!("{:>6}  {:.12e}  {:.2e}", row.iter, row.objective, row.eta_l);
    }
    println!("converged = {} after {} iterations, phi = {:.8}", r.converged, r.iters, r.phi);
    if let Some(path) = std::env::args().nth(1) {
        write_trace_csv(&r.trace, &path)?;
        println!("trace written to {path}");
    }
    Ok(())
}
