//! Writes a synthetic instance in LIBSVM format, reads it back and solves the
//! constrained problem from the file.
//!
//! cargo run --example libsvm_roundtrip -- [path]

use smop::data::{libsvm_read, libsvm_write};
use smop::{smop_solve, Regularizer, SmopConfig, SynthSpec};

fn main() -> smop::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| std::env::temp_dir().join("smop_example.svm").display().to_string());
    let (data, _) = smop::data::synth_instance(&SynthSpec::new(50, 400, 5, 0.01, 9))?;
    libsvm_write(&data, &path)?;
    let back = libsvm_read(&path)?;
    assert_eq!(back, data);
    println!("{path}: {} x {}, {} nonzeros, round trip exact", back.a.rows(), back.a.cols(), back.a.nnz());

    let r = smop_solve(&back.with_ratio(0.2)?, &Regularizer::L1, &SmopConfig::default())?;
    println!("lambda* = {:.6e}, nnz = {}, eta = {:.1e}", r.lambda_star, r.nnz, r.eta);
    Ok(())
}
