//! Parsing, three-address normalization and call inlining for the input
//! language: integer functions over variables with `+`, `-`, `*`,
//! conditionals, `while` loops and bounded `loop X { … }` iteration.

pub mod ast;
pub mod inline;
pub mod lexer;
pub mod normalize;
pub mod parser;
pub mod pretty;

pub use ast::{walk_cmds, BinOp, Cmd, CmdKind, Expr, ExprKind, FunDecl, Program, Span};
pub use inline::{call_sites, inline_call};
pub use normalize::{collect_vars, normalize_function, normalize_three_address};
pub use parser::parse;
pub use pretty::{fundecl_to_string, program_to_string};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FrontendError {
    #[error("{span}: syntax error: expected {expected}, found {found}")]
    Syntax { span: Span, expected: String, found: String },
    #[error("{span}: unsupported construct: {construct}")]
    Unsupported { span: Span, construct: String },
    #[error("{span}: `{name}` is reserved (names containing `__` are used for generated variables)")]
    ReservedName { span: Span, name: String },
    #[error("cannot inline recursive function `{name}`")]
    RecursiveCallee { name: String },
    #[error("function `{name}` returns no value")]
    NoReturnValue { name: String },
    #[error("cannot inline at command {site}: {reason}")]
    InlineSite { site: usize, reason: String },
}

/// Parses and normalizes a source file.
pub fn load(source: &str) -> Result<Program, FrontendError> {
    Ok(normalize_three_address(&parse(source)?))
}
