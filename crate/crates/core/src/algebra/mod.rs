//! Squarefree polynomial algebra: real polynomials in which every variable
//! is idempotent (`x·x = x`), so a monomial is just a set of variables.

mod coeff;
mod poly;
mod varset;

use thiserror::Error;

pub use coeff::Coefficient;
pub use poly::{interpolate, SquarefreePoly, MAX_TABLE_VARS};
pub use varset::VarSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("variable x{0} occurs in its own replacement")]
    VariableInReplacement(usize),
    #[error("no value assigned to variable x{0}")]
    UnassignedVariable(usize),
    #[error("table has {got} entries, expected {expected}")]
    IncompleteTable { expected: usize, got: usize },
    #[error("variable x{0} listed twice")]
    DuplicateVariable(usize),
    #[error("{0} variables exceed the table limit")]
    TooManyVariables(usize),
}
