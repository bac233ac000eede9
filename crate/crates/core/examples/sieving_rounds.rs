//! Adaptive sieving on one regularized problem: index-set growth per round
//! compared with a full-dimension solve.

use std::time::Instant;

use smop::inner::solve_reduced;
use smop::sieve::sieve_solve;
use smop::{InnerConfig, Regularizer, SieveConfig, SynthSpec};

fn main() -> smop::Result<()> {
    let (data, _) = smop::data::synth_instance(&SynthSpec::new(300, 5000, 30, 0.01, 2))?;
    let reg = Regularizer::L1;
    let lambda = 0.1 * reg.lambda_inf(&data.a, &data.b)?;
    let inner = InnerConfig::with_tol(1e-9);

    let t = Instant::now();
    let (res, trace) = sieve_solve(data.ls(), &reg, lambda, &[], None, &SieveConfig::with_eps(1e-9), &inner)?;
    let sieved = t.elapsed();
    println!("round  |I|   ‖R‖        |J|    added  iters");
    for r in &trace.rounds {
        println!(
            "{:<6} {:<5} {:<10.3e} {:<6} {:<6} {}",
            r.round, r.index_size, r.residual_norm, r.candidates, r.added, r.inner_iters
        );
    }

    let t = Instant::now();
    let all: Vec<usize> = (0..data.a.cols()).collect();
    let full = solve_reduced(data.ls(), &reg, lambda, &all, None, &inner)?;
    let direct = t.elapsed();
    println!("objective sieved {:.12e} vs full {:.12e}", res.objective, full.objective);
    println!("time sieved {sieved:?} vs full {direct:?}");
    Ok(())
}
