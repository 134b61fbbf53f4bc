//! Transpilation and evaluation tooling for first-order logical reasoning
//! datasets.
//!
//! The pipeline: FOL annotation strings are parsed into a canonical formula
//! AST ([`fol`]), emitted into five alternative formal grammars and validated
//! by BNF membership ([`transform`] over [`grammar`] and [`chart`]),
//! classified into syllogistic categories ([`sef`]), packaged into frozen
//! dataset splits ([`dataset`]), rendered as model prompts ([`prompt`]), and
//! scored against gold labels ([`metrics`]).

pub mod chart;
pub mod dataset;
pub mod fol;
pub mod formula;
pub mod grammar;
pub mod lang;
pub mod metrics;
pub mod prompt;
pub mod sef;
pub mod transform;

pub use formula::{connectives_of, free_variables, Connective, Formula, Label, Term, TermKind};
pub use lang::{DataLanguage, TargetLanguage};
