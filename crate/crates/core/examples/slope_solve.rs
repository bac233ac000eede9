//! Sorted-l1 (SLOPE) constrained regression with the linear weight schedule.
//! No generalized Jacobian is needed: the secant method only uses values.

use smop::regularizer::WeightSchedule;
use smop::{smop_solve, Method, Regularizer, SmopConfig, SynthSpec};

fn main() -> smop::Result<()> {
    let (data, _) = smop::data::synth_instance(&SynthSpec::new(100, 1000, 10, 0.01, 3))?;
    let reg = Regularizer::slope(WeightSchedule::Linear, data.a.cols())?;
    let problem = data.with_ratio(0.1)?;

    for method in [Method::Smop, Method::Bmop] {
        let r = smop_solve(&problem, &reg, &SmopConfig::new(method, 1e-6))?;
        println!(
            "{method}: lambda* = {:.8e}, eta = {:.1e}, nnz = {}, {} subproblems, {:.1} ms",
            r.lambda_star, r.eta, r.nnz, r.n_subproblems, r.wall_ms
        );
    }
    match smop_solve(&problem, &reg, &SmopConfig::new(Method::Nmop, 1e-6)) {
        Err(e) => println!("nmop: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
