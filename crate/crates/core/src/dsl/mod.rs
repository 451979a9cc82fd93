//! The potential expression language: parsing, printing and evaluation of
//! Kähler potentials Φ(z¹, z², z̄¹, z̄²; parameters) into jets.

mod ast;
mod eval;
mod file;
mod lexer;
mod parser;
mod printer;

pub use ast::{BindingError, ParameterTable, PotentialExpr, Rational, Variable};
pub use eval::{
    check_reality, eval_jet, evaluate, evaluate_raw, evaluate_value, reality_residual, EvalError,
    EvalErrorKind,
};
pub use file::{parse_potential_file, FileError, PotentialFile};
pub use parser::parse;
pub use printer::print;

use thiserror::Error;

/// Positioned syntax diagnostic (1-based line and column).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub message: String,
}
