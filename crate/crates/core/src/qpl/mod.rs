//! Flow-chart language: syntax, printing, and elaboration to superoperators.
//!
//! The grammar is documented in `docs/qpl-grammar.md` at the repository root.

pub mod ast;
pub mod context;
pub mod elaborate;
pub mod lexer;
pub mod library;
pub mod parser;
pub mod printer;
pub mod unitary;

pub use ast::{Builtin, Decl, Kind, Pos, Program, Stmt, StmtKind, UnitaryRef};
pub use context::TypingContext;
pub use elaborate::{elaborate, elaborate_program, elaborate_with, ElabOptions, Elaborated, Flow};
pub use library::{
    build_bell_stabilizer, build_coin, build_grover, build_grover_closed, coin_context,
    BellStabilizer,
};
pub use parser::{check_scope, parse};
pub use printer::{print, sexpr};
