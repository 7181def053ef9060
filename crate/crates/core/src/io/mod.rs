//! Concrete syntax: formulas, vocabularies, models, teams and proof scripts.
//!
//! All formats are line-oriented UTF-8 text where `#` starts a comment.
//!
//! Formula grammar (lowest precedence first; binary connectives associate to
//! the right):
//!
//! ```text
//! formula := disj [ "->" formula ]
//! disj    := conj [ "|" disj ]
//! conj    := unary [ "&" conj ]
//! unary   := "~" unary
//!          | ("forall" | "exists") var+ "." formula
//!          | "(" formula ")"
//!          | atom
//! atom    := "dep" "(" [ term { "," term } ] ")"
//!          | "=(" term { "," term } ")"
//!          | rel [ "(" term { "," term } ")" ]
//!          | term ( "=" | "!=" ) term
//! term    := var | const | fun "(" term { "," term } ")"
//! ```
//!
//! `∀ ∃ ¬ ∧ ∨ → ≠` are accepted as synonyms. `a -> b` is read as `~a | b`
//! and `s != t` as `~(s = t)`. Identifiers not declared in the vocabulary
//! are variables.

mod formula;
mod lexer;
mod model;
mod proof;
mod source;
mod team;

pub use formula::{parse_formula, parse_formula_at, print_formula, print_formula_with, Notation};
pub use model::{parse_model, parse_vocabulary, print_model};
pub use proof::parse_proof;
pub use source::{Diagnostic, Severity, SourceText, Span};
pub use team::{parse_team, print_team};

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    Vocabulary,
    NegationScope,
    DuplicateSymbol,
    PartialFunction,
    OutOfDomain,
    Arity,
    DuplicateVariable,
    DanglingReference,
    UnknownRule,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{diagnostic}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub diagnostic: Diagnostic,
}

impl ParseError {
    pub(crate) fn new(kind: ParseErrorKind, message: impl Into<String>, span: Span, origin: &str) -> Self {
        ParseError {
            kind,
            diagnostic: Diagnostic::error(message, span, origin),
        }
    }
}
