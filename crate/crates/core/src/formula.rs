//! Core formula AST: terms, first-order formulas, connectives, and gold labels.
//!
//! Every other module works over these types. Formulas are immutable trees;
//! all structural queries are pure functions.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Characters that may never appear in an identifier.
pub const RESERVED_PUNCTUATION: &[char] = &[
    '(', ')', ',', '¬', '∧', '∨', '⊕', '→', '↔', '∀', '∃',
];

/// Whether a term stands for a quantified variable or an individual constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TermKind {
    Variable,
    Constant,
}

/// An argument of an atom. Variables are exactly the identifiers bound by an
/// enclosing quantifier; everything else is a constant.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Term {
    pub kind: TermKind,
    pub name: String,
}

impl Term {
    pub fn variable(name: impl Into<String>) -> Self {
        Term { kind: TermKind::Variable, name: name.into() }
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Term { kind: TermKind::Constant, name: name.into() }
    }

    pub fn is_variable(&self) -> bool {
        self.kind == TermKind::Variable
    }

    /// Checks the identifier invariant: non-empty, no whitespace, no reserved
    /// punctuation. The equality predicate `=` is the one sanctioned exception
    /// (it names an atom, never a term).
    pub fn valid_identifier(name: &str) -> bool {
        !name.is_empty()
            && !name
                .chars()
                .any(|c| c.is_whitespace() || RESERVED_PUNCTUATION.contains(&c))
    }
}

/// Connective kinds reported by [`Formula::connectives`]. Quantifiers are not
/// connectives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Connective {
    Not,
    And,
    Or,
    Xor,
    Implies,
    Iff,
}

/// A first-order formula in the source dialect. Binary connectives are binary
/// nodes; `∀x ∀y φ` is represented as nested unary quantifier nodes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom { predicate: String, args: Vec<Term> },
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Xor(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    ForAll { var: String, body: Box<Formula> },
    Exists { var: String, body: Box<Formula> },
}

impl Formula {
    pub fn atom(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Formula::Atom { predicate: predicate.into(), args }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn xor(l: Formula, r: Formula) -> Self {
        Formula::Xor(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Self {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    pub fn iff(l: Formula, r: Formula) -> Self {
        Formula::Iff(Box::new(l), Box::new(r))
    }

    pub fn forall(var: impl Into<String>, body: Formula) -> Self {
        Formula::ForAll { var: var.into(), body: Box::new(body) }
    }

    pub fn exists(var: impl Into<String>, body: Formula) -> Self {
        Formula::Exists { var: var.into(), body: Box::new(body) }
    }

    /// The set of connective variants occurring anywhere in the formula.
    /// Quantifiers are excluded.
    pub fn connectives(&self) -> BTreeSet<Connective> {
        let mut out = BTreeSet::new();
        self.collect_connectives(&mut out);
        out
    }

    fn collect_connectives(&self, out: &mut BTreeSet<Connective>) {
        match self {
            Formula::Atom { .. } => {}
            Formula::Not(f) => {
                out.insert(Connective::Not);
                f.collect_connectives(out);
            }
            Formula::And(l, r) => {
                out.insert(Connective::And);
                l.collect_connectives(out);
                r.collect_connectives(out);
            }
            Formula::Or(l, r) => {
                out.insert(Connective::Or);
                l.collect_connectives(out);
                r.collect_connectives(out);
            }
            Formula::Xor(l, r) => {
                out.insert(Connective::Xor);
                l.collect_connectives(out);
                r.collect_connectives(out);
            }
            Formula::Implies(l, r) => {
                out.insert(Connective::Implies);
                l.collect_connectives(out);
                r.collect_connectives(out);
            }
            Formula::Iff(l, r) => {
                out.insert(Connective::Iff);
                l.collect_connectives(out);
                r.collect_connectives(out);
            }
            Formula::ForAll { body, .. } | Formula::Exists { body, .. } => {
                body.collect_connectives(out);
            }
        }
    }

    /// Identifiers of `Variable` terms not bound by any enclosing quantifier.
    /// Empty iff the formula is well-scoped.
    pub fn free_variables(&self) -> BTreeSet<String> {
        let mut bound = Vec::new();
        let mut free = BTreeSet::new();
        self.collect_free(&mut bound, &mut free);
        free
    }

    fn collect_free(&self, bound: &mut Vec<String>, free: &mut BTreeSet<String>) {
        match self {
            Formula::Atom { args, .. } => {
                for t in args {
                    if t.is_variable() && !bound.iter().any(|b| b == &t.name) {
                        free.insert(t.name.clone());
                    }
                }
            }
            Formula::Not(f) => f.collect_free(bound, free),
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Xor(l, r)
            | Formula::Implies(l, r)
            | Formula::Iff(l, r) => {
                l.collect_free(bound, free);
                r.collect_free(bound, free);
            }
            Formula::ForAll { var, body } | Formula::Exists { var, body } => {
                bound.push(var.clone());
                body.collect_free(bound, free);
                bound.pop();
            }
        }
    }

    pub fn is_well_scoped(&self) -> bool {
        self.free_variables().is_empty()
    }

    /// Number of atoms in the tree.
    pub fn atom_count(&self) -> usize {
        match self {
            Formula::Atom { .. } => 1,
            Formula::Not(f) => f.atom_count(),
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Xor(l, r)
            | Formula::Implies(l, r)
            | Formula::Iff(l, r) => l.atom_count() + r.atom_count(),
            Formula::ForAll { body, .. } | Formula::Exists { body, .. } => body.atom_count(),
        }
    }

    /// Number of connective nodes (Not plus the binaries).
    pub fn connective_count(&self) -> usize {
        match self {
            Formula::Atom { .. } => 0,
            Formula::Not(f) => 1 + f.connective_count(),
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Xor(l, r)
            | Formula::Implies(l, r)
            | Formula::Iff(l, r) => 1 + l.connective_count() + r.connective_count(),
            Formula::ForAll { body, .. } | Formula::Exists { body, .. } => body.connective_count(),
        }
    }

    /// Number of quantifier nodes.
    pub fn quantifier_count(&self) -> usize {
        match self {
            Formula::Atom { .. } => 0,
            Formula::Not(f) => f.quantifier_count(),
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Xor(l, r)
            | Formula::Implies(l, r)
            | Formula::Iff(l, r) => l.quantifier_count() + r.quantifier_count(),
            Formula::ForAll { body, .. } | Formula::Exists { body, .. } => {
                1 + body.quantifier_count()
            }
        }
    }

    /// A copy with every predicate, variable, and constant name ASCII-lowercased.
    /// Target-language emitters lowercase identifiers; this is the matching
    /// normalizer for round-trip comparisons.
    pub fn to_lowercased(&self) -> Formula {
        match self {
            Formula::Atom { predicate, args } => Formula::Atom {
                predicate: predicate.to_ascii_lowercase(),
                args: args
                    .iter()
                    .map(|t| Term { kind: t.kind, name: t.name.to_ascii_lowercase() })
                    .collect(),
            },
            Formula::Not(f) => Formula::not(f.to_lowercased()),
            Formula::And(l, r) => Formula::and(l.to_lowercased(), r.to_lowercased()),
            Formula::Or(l, r) => Formula::or(l.to_lowercased(), r.to_lowercased()),
            Formula::Xor(l, r) => Formula::xor(l.to_lowercased(), r.to_lowercased()),
            Formula::Implies(l, r) => Formula::implies(l.to_lowercased(), r.to_lowercased()),
            Formula::Iff(l, r) => Formula::iff(l.to_lowercased(), r.to_lowercased()),
            Formula::ForAll { var, body } => {
                Formula::forall(var.to_ascii_lowercase(), body.to_lowercased())
            }
            Formula::Exists { var, body } => {
                Formula::exists(var.to_ascii_lowercase(), body.to_lowercased())
            }
        }
    }
}

/// The set of connective variants occurring anywhere in `f`.
pub fn connectives_of(f: &Formula) -> BTreeSet<Connective> {
    f.connectives()
}

/// Free-standing form of [`Formula::free_variables`].
pub fn free_variables(f: &Formula) -> BTreeSet<String> {
    f.free_variables()
}

/// Gold truth value of a conclusion. Exactly three values exist in gold data;
/// the `Invalid` sentinel for unparsable model predictions lives in
/// [`crate::prompt::Prediction`], never here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    True,
    False,
    Uncertain,
}

impl Label {
    pub const ALL: [Label; 3] = [Label::True, Label::False, Label::Uncertain];

    pub fn as_str(&self) -> &'static str {
        match self {
            Label::True => "True",
            Label::False => "False",
            Label::Uncertain => "Uncertain",
        }
    }

    /// Case-insensitive parse. `Unknown` is accepted as an alias for
    /// `Uncertain` because some dataset releases use it.
    pub fn parse(s: &str) -> Option<Label> {
        match s.trim().to_ascii_lowercase().as_str() {
            "true" => Some(Label::True),
            "false" => Some(Label::False),
            "uncertain" | "unknown" => Some(Label::Uncertain),
            _ => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Label {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        Label::parse(&raw)
            .ok_or_else(|| serde::de::Error::custom(format!("unknown label `{raw}`")))
    }
}
