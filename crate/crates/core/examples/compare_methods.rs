//! SMOP vs BMOP vs NMOP on seeded synthetic lasso instances: value-function
//! evaluations, inner iterations and wall time per method.
//!
//! cargo run --release --example compare_methods -- [seeds] [stoptol]

use smop::{smop_solve, Method, Regularizer, SmopConfig, SynthSpec};

fn main() -> smop::Result<()> {
    let mut args = std::env::args().skip(1);
    let seeds: u64 = args.next().map(|s| s.parse().unwrap()).unwrap_or(3);
    let stoptol: f64 = args.next().map(|s| s.parse().unwrap()).unwrap_or(1e-8);

    println!("seed  method  lambda*          evals  inner   nnz  ms");
    for seed in 1..=seeds {
        let (data, _) = smop::data::synth_instance(&SynthSpec::new(200, 2000, 20, 0.01, seed))?;
        let problem = data.with_ratio(0.1)?;
        for method in [Method::Smop, Method::Bmop, Method::Nmop] {
            let r = smop_solve(&problem, &Regularizer::L1, &SmopConfig::new(method, stoptol))?;
            println!(
                "{seed:<5} {method:<7} {:<16.10e} {:<6} {:<7} {:<5} {:.1}",
                r.lambda_star, r.n_subproblems, r.inner_iters_total, r.nnz, r.wall_ms
            );
        }
    }
    Ok(())
}
