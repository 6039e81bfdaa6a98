//! The problem language: jet expressions, their parser and evaluator, and
//! validated problem descriptions.

mod ast;
mod eval;
mod parser;
mod problem;

pub use ast::{JetDependence, JetExpr, Names};
pub use eval::{eval_field, eval_initial, evaluate, JetAlgebra, SeriesAlgebra};
pub(crate) use eval::check_jet;
pub use parser::parse_expr;
pub use problem::{jet_order, ProblemFile, ProblemSpec};
