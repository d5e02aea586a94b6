//! Text language for Stieltjes integration programs.
//!
//! A program is a sequence of `let` bindings and queries:
//!
//! ```text
//! let H = heaviside(c=1, at=0);
//! integrate H dH on [-1, 1];
//! ```
//!
//! [`parse`] validates names and literals and reports the first problem as
//! a positioned [`Diagnostic`]. The `Display` impl of [`Program`] prints
//! the canonical form, which parses back to the same program.

pub mod ast;
mod lexer;
mod materialize;
mod parser;

use std::fmt;

pub use ast::{Atom, Binding, Expr, Probe, Program, Query, QueryKind, SaltusLit, SumsArgs, Term};
pub use materialize::Scope;
pub use parser::{parse, parse_expr, to_poly, MAX_ROUNDS, RESERVED};

/// A parse failure located at the first offending character.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    /// 1-based.
    pub line: usize,
    /// 1-based, in characters.
    pub column: usize,
    pub message: String,
    /// Tokens that would have been accepted here; may be empty.
    pub expected: Vec<String>,
}

impl Diagnostic {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        Diagnostic { line, column, message: message.into(), expected: Vec::new() }
    }

    pub(crate) fn expecting<S: AsRef<str>>(mut self, expected: &[S]) -> Self {
        self.expected = expected.iter().map(|s| s.as_ref().to_string()).collect();
        self
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(" or "))?;
        }
        Ok(())
    }
}

impl std::error::Error for Diagnostic {}

/// Parses and prints: the canonical text of `src`.
pub fn canonicalize(src: &str) -> Result<String, Diagnostic> {
    parse(src).map(|p| p.to_string())
}
