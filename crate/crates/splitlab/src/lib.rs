//! Positive decompositions, polar and pseudo-polar factorizations, proper
//! splittings of Hermitian operators and the stationary iteration they
//! induce for solving `T X = S`, together with a randomized verification
//! harness for the underlying operator-theoretic identities.
//!
//! Start with [`linalg::HermitianOperator`], then [`decomp`] for
//! factorizations, [`splitting`] for the splitting catalog and convergence
//! analysis, [`solver`] for the iteration, [`testgen`] for generators and
//! property suites, and [`cli`] / [`io`] for the command-line surface and
//! the CMX matrix file format. The `examples/` directory walks through each
//! capability.

pub mod cli;
pub mod decomp;
pub mod error;
pub mod io;
pub mod linalg;
pub mod solver;
pub mod splitting;
pub mod testgen;
