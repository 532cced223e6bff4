//! Deterministic mwp-flow analysis.
//!
//! Each function of a small imperative language gets one matrix of
//! polynomials over choice variables. Evaluating the matrix at an assignment
//! that yields no `∞` coefficient certifies a polynomial bound on every
//! variable. The delta graph decides whether such an assignment exists
//! without enumerating them.

pub mod analysis;
pub mod deltagraph;
pub mod frontend;
pub mod jk_oracle;
pub mod matrix;
pub mod polynomial;
pub mod report;
pub mod semiring;
