//! Level-set solver for sparse optimization with a least-squares constraint,
//!
//! ```text
//! minimize p(x)  subject to  ||Ax - b|| <= rho,
//! ```
//!
//! where `p` is a gauge (the l1 norm or the sorted l1 / SLOPE penalty).
//!
//! The constrained problem is solved by finding the root `lambda*` of
//! `phi(lambda) = rho`, where `phi(lambda) = ||A x(lambda) - b||` is the value
//! function of the regularized problem
//!
//! ```text
//! minimize 0.5 ||Ax - b||^2 + lambda p(x).
//! ```
//!
//! The pieces are layered bottom-up:
//!
//! * [`data`]: sparse column-major matrices, LIBSVM I/O, synthetic instances.
//! * [`regularizer`]: penalty values, proximal maps, polar gauges, `lambda_inf`.
//! * [`inner`]: accelerated proximal gradient for the (reduced) regularized problem.
//! * [`sieve`]: adaptive sieving, which grows an index set until the full
//!   proximal residual is small.
//! * [`rootfind`]: plain secant, the globally convergent safeguarded secant,
//!   bisection and the l1 semismooth Newton variant, plus 1-D test functions.
//! * [`driver`]: SMOP / BMOP / NMOP end-to-end solves and solution paths.
//! * [`cli`]: the `smop` command-line front end.

pub mod cli;
pub mod data;
pub mod driver;
mod error;
pub mod inner;
pub mod linalg;
pub mod regularizer;
pub mod rootfind;
pub mod sieve;

pub use data::{Dataset, ProblemData, SparseMatrix, SynthSpec};
pub use driver::{smop_solve, solve_path, Method, PathResult, PathSpec, SmopConfig, SmopResult};
pub use error::{Error, Result};
pub use inner::{InnerConfig, InnerSolveResult};
pub use regularizer::Regularizer;
pub use rootfind::RootConfig;
pub use sieve::{SieveConfig, SieveTrace};
