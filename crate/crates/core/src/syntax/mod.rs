//! The text input language: expressions in `z`, point and divisor literals,
//! curve declarations, and pair documents. The grammar is in `docs/grammar.md`.

mod document;
mod expr;
mod lexer;
mod print;

use std::fmt;

pub use document::{parse_pair, PairDocument};
pub use expr::{parse_expr, parse_point, parse_rational, Expr};
pub use print::{print_poly, print_ratfn};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ParseErrorKind {
    Syntax,
    Semantic,
}

/// A diagnostic with a 1-based line and column (counted in characters).
#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn tag(&self) -> &'static str {
        match self.kind {
            ParseErrorKind::Syntax => "SyntaxError",
            ParseErrorKind::Semantic => "SemanticError",
        }
    }

    pub(crate) fn syntax(column: usize, message: impl Into<String>) -> Self {
        ParseError { kind: ParseErrorKind::Syntax, line: 1, column, message: message.into() }
    }

    pub(crate) fn semantic(column: usize, message: impl Into<String>) -> Self {
        ParseError { kind: ParseErrorKind::Semantic, line: 1, column, message: message.into() }
    }

    /// Moves a diagnostic computed on a fragment to its place in a document.
    pub(crate) fn relocate(mut self, line: usize, column_offset: usize) -> Self {
        self.line = line;
        self.column += column_offset;
        self
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ParseErrorKind::Syntax => "syntax error",
            ParseErrorKind::Semantic => "semantic error",
        };
        write!(f, "{}:{}: {kind}: {}", self.line, self.column, self.message)
    }
}
