//! FOL surface syntax: lexer, parser, parse trees, and the canonical renderer.
//!
//! The parser accepts the annotation dialect used by the source dataset:
//! Unicode operators with ASCII aliases, heavily parenthesized, quantifier
//! bodies always grouped. Output text is always canonical Unicode.

mod lexer;
pub(crate) mod parser;
mod render;

pub use lexer::tokenize_fol;
pub use parser::{parse_fol, parse_fol_tree, ParseOutcome};
pub use render::render_fol;
pub(crate) use render::{emit_infix, InfixStyle};

use std::fmt;

use thiserror::Error;

use crate::formula::Formula;

/// Token kinds of the FOL surface syntax.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Ident,
    LParen,
    RParen,
    Comma,
    Forall,
    Exists,
    Not,
    And,
    Or,
    Xor,
    Implies,
    Iff,
    Eq,
}

/// One lexed token. `lexeme` is the exact source slice; `offset` is the
/// character index where it starts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceToken {
    pub kind: TokenKind,
    pub lexeme: String,
    pub offset: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FolError {
    #[error("unexpected character `{ch}` at offset {offset}")]
    Lex { offset: usize, ch: char },
    #[error("parse error at offset {offset}: expected {}", expected.join(" | "))]
    Parse { offset: usize, expected: Vec<String> },
    #[error("free variable `{var}`")]
    Scope { var: String },
}

/// Labels for parse-tree interior nodes. Each maps onto a nonterminal of the
/// shipped FOL grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeLabel {
    Formula,
    Quantified,
    Group,
    Negation,
    Atom,
    Equality,
    Predicate,
    Variable,
    Term,
    Arguments,
}

impl TreeLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            TreeLabel::Formula => "formula",
            TreeLabel::Quantified => "quantified",
            TreeLabel::Group => "group",
            TreeLabel::Negation => "negation",
            TreeLabel::Atom => "atom",
            TreeLabel::Equality => "equality",
            TreeLabel::Predicate => "predicate",
            TreeLabel::Variable => "variable",
            TreeLabel::Term => "term",
            TreeLabel::Arguments => "arguments",
        }
    }
}

/// Concrete parse tree: interior nodes are grammar nonterminals, leaves are
/// source tokens, and the in-order leaves reproduce the token stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseTree {
    Node { label: TreeLabel, children: Vec<ParseTree> },
    Leaf(SourceToken),
}

impl ParseTree {
    pub fn node(label: TreeLabel, children: Vec<ParseTree>) -> Self {
        ParseTree::Node { label, children }
    }

    pub fn leaf(token: SourceToken) -> Self {
        ParseTree::Leaf(token)
    }

    /// In-order token sequence.
    pub fn leaves(&self) -> Vec<&SourceToken> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a SourceToken>) {
        match self {
            ParseTree::Leaf(t) => out.push(t),
            ParseTree::Node { children, .. } => {
                for c in children {
                    c.collect_leaves(out);
                }
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_fol(self))
    }
}
