//! Warm-started solution path over rho_i = c_i · c · ‖b‖ with
//! c_i = 1.5 − 0.5 (i − 1)/(T − 1), secant versus bisection.

use smop::{solve_path, Method, PathSpec, Regularizer, SmopConfig, SynthSpec};

fn main() -> smop::Result<()> {
    let (data, _) = smop::data::synth_instance(&SynthSpec::new(200, 2000, 20, 0.01, 5))?;
    let spec = PathSpec::standard(0.1, 20);

    for method in [Method::Smop, Method::Bmop] {
        let path = solve_path(&data, &Regularizer::L1, &spec, &SmopConfig::new(method, 1e-6))?;
        println!(
            "{method}: {} points, mean {:.2} subproblems per point, {:.0} ms",
            path.entries.len(),
            path.mean_subproblems(),
            path.wall_ms
        );
        if method == Method::Smop {
            for r in path.successes().step_by(5) {
                println!("  rho = {:.5}  lambda* = {:.6e}  nnz = {}", r.rho, r.lambda_star, r.nnz);
            }
        }
    }
    Ok(())
}
