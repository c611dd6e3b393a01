//! Exact arithmetic: rationals, multivariate polynomials over ℚ, bundled
//! rewrite systems and fraction-free linear algebra.

pub mod linalg;
pub mod monomial;
pub mod poly;
pub mod rational;
pub mod rewrite;

pub use linalg::{PivotContext, PivotPolicy, PolyMatrix};
pub use monomial::{Monomial, Param, Var};
pub use poly::{Poly, Substitution};
pub use rational::Rational;
pub use rewrite::RewriteSystem;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("malformed rational `{0}`")]
    Rational(String),
    #[error("unknown variable `{0}`")]
    Var(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RewriteError {
    #[error("variable `{0}` eliminated twice")]
    DuplicateElimination(String),
    #[error("rule mentions eliminated variable `{0}`")]
    NotEliminating(String),
    #[error("rule does not decrease: {0}")]
    NotDecreasing(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    /// No pivot is provably nonzero under the declared side conditions.
    #[error("pivot `{entry}` may vanish on the branch")]
    UndecidedPivot { entry: String },
    #[error("fraction-free step produced an inexact division")]
    InexactDivision,
}
