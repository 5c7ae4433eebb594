//! The indexical language: `X in r` rules, their parser, and their
//! compilation to kernel propagators.

pub mod ast;
pub mod compile;
pub mod parser;

pub use ast::{IndexicalDef, Param, ParamIndex, ParamKind, RangeExpr, Rule, TermExpr};
pub use compile::{
    analyze_dependencies, eval_range, eval_term, post_indexical, CompiledConstraint, CompiledRule, Eval,
    Program,
};
pub use parser::{parse_indexical, parse_indexicals, ParseError};
