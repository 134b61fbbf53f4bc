//! Surface emitters for the five target languages.
//!
//! All emitters walk the canonical AST with the same grouping scheme as the
//! FOL renderer (binaries bring their own group, negation under ∧/∨/⊕ gets an
//! extra grouping layer, quantifier bodies are grouped exactly once). They
//! differ in token spelling and in how much structure survives:
//!
//! - MINIFOL, CLIF: full structure, identifiers lowercased.
//! - CGIF: concept brackets with two-space sibling separators; ∧/⊕/∨/→/↔ all
//!   collapse to juxtaposition, so the emission is lossy.
//! - TFL: atoms become signed single letters with subscript 1; every grouping
//!   and argument is dropped.
//! - TFL+: TFL signs plus parentheses mirroring the FOL grouping; atom
//!   subscripts encode binding (0 universal, 1 existential, 2 ground), and a
//!   unary ground atom carries its constant as a `(+c2)` term group.

use crate::fol::{emit_infix, InfixStyle};
use crate::formula::{Connective, Formula, Term, TermKind};
use crate::lang::TargetLanguage;

use super::TransformError;

const MINIFOL_STYLE: InfixStyle = InfixStyle {
    forall: |v| format!("all:{v} "),
    exists: |v| format!("some:{v} "),
    not: "~",
    and: " & ",
    or: " | ",
    xor: " ^ ",
    implies: " :- ",
    iff: " <-> ",
    eq: " = ",
    lowercase: true,
};

const CLIF_STYLE: InfixStyle = InfixStyle {
    forall: |v| format!("forall {v} "),
    exists: |v| format!("exists {v} "),
    not: "not ",
    and: " and ",
    or: " or ",
    xor: " xor ",
    implies: " implies ",
    iff: " iff ",
    eq: " = ",
    lowercase: true,
};

/// Emits `f` in the target language. Deterministic; total over well-scoped
/// formulas (gap-filled mappings included).
pub fn emit(f: &Formula, target: TargetLanguage) -> String {
    match target {
        TargetLanguage::Minifol => emit_infix(f, &MINIFOL_STYLE),
        TargetLanguage::Clif => emit_infix(f, &CLIF_STYLE),
        TargetLanguage::Cgif => cgif_top(f),
        TargetLanguage::Tfl => tfl(f),
        TargetLanguage::TflPlus => {
            let mut env = Vec::new();
            tflplus(f, &mut env)
        }
    }
}

/// Like [`emit`], but rejects constructs whose mapping is a gap-fill rather
/// than attested by the target's transformation table.
pub fn emit_strict(f: &Formula, target: TargetLanguage) -> Result<String, TransformError> {
    let gaps: &[(Connective, &str)] = &[
        (Connective::Or, "∨"),
        (Connective::Iff, "↔"),
    ];
    let present = f.connectives();
    for (conn, name) in gaps {
        if present.contains(conn) {
            return Err(TransformError::Unsupported { target, construct: name });
        }
    }
    // `some:` is attested for MINIFOL; existentials elsewhere are gap-fills.
    if target != TargetLanguage::Minifol && contains_exists(f) {
        return Err(TransformError::Unsupported { target, construct: "∃" });
    }
    Ok(emit(f, target))
}

fn contains_exists(f: &Formula) -> bool {
    match f {
        Formula::Atom { .. } => false,
        Formula::Not(c) => contains_exists(c),
        Formula::And(l, r)
        | Formula::Or(l, r)
        | Formula::Xor(l, r)
        | Formula::Implies(l, r)
        | Formula::Iff(l, r) => contains_exists(l) || contains_exists(r),
        Formula::ForAll { body, .. } => contains_exists(body),
        Formula::Exists { .. } => true,
    }
}

fn lower(s: &str) -> String {
    s.to_ascii_lowercase()
}

// ---------------------------------------------------------------------------
// CGIF
// ---------------------------------------------------------------------------

fn cgif_top(f: &Formula) -> String {
    match f {
        // A bare ground/top-level atom is wrapped in a context bracket.
        Formula::Atom { .. } => format!("[{}]", cgif(f)),
        _ => cgif(f),
    }
}

fn cgif(f: &Formula) -> String {
    match f {
        Formula::Atom { predicate, args } => cgif_atom(predicate, args),
        Formula::Not(c) => format!("~{}", cgif(c)),
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Xor(l, r) => {
            format!("[({}  {})]", cgif_operand(l, true), cgif_operand(r, true))
        }
        Formula::Implies(l, r) | Formula::Iff(l, r) => {
            format!("[({}  {})]", cgif_operand(l, false), cgif_operand(r, false))
        }
        Formula::ForAll { var, body } => {
            format!("@every *{} {}", lower(var), cgif_body(body))
        }
        Formula::Exists { var, body } => format!("*{} {}", lower(var), cgif_body(body)),
    }
}

fn cgif_atom(predicate: &str, args: &[Term]) -> String {
    let name = if predicate == "=" { "eq".to_string() } else { lower(predicate) };
    if args.is_empty() {
        return format!("{name}[()]");
    }
    let rendered: Vec<String> = args
        .iter()
        .map(|t| match t.kind {
            TermKind::Variable => format!("?{}", lower(&t.name)),
            TermKind::Constant => lower(&t.name),
        })
        .collect();
    format!("{name}[({})]", rendered.join("  "))
}

fn cgif_operand(f: &Formula, tight: bool) -> String {
    let rendered = cgif(f);
    if tight && matches!(f, Formula::Not(_)) {
        format!("[({rendered})]")
    } else {
        rendered
    }
}

fn cgif_body(body: &Formula) -> String {
    let rendered = cgif(body);
    match body {
        Formula::And(..)
        | Formula::Or(..)
        | Formula::Xor(..)
        | Formula::Implies(..)
        | Formula::Iff(..)
        | Formula::ForAll { .. }
        | Formula::Exists { .. } => rendered,
        _ => format!("[{rendered}]"),
    }
}

// ---------------------------------------------------------------------------
// TFL
// ---------------------------------------------------------------------------

fn predicate_letter(predicate: &str) -> char {
    if predicate == "=" {
        return 'E';
    }
    predicate.chars().next().unwrap_or('P').to_ascii_uppercase()
}

fn tfl(f: &Formula) -> String {
    match f {
        Formula::Atom { predicate, .. } => format!("+{}1", predicate_letter(predicate)),
        Formula::Not(c) => format!("-{}", tfl(c)),
        Formula::And(l, r) => format!("{}+{}", tfl(l), tfl(r)),
        Formula::Or(l, r) | Formula::Xor(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
            format!("{}-{}", tfl(l), tfl(r))
        }
        Formula::ForAll { body, .. } => format!("-{}", tfl(body)),
        Formula::Exists { body, .. } => format!("+{}", tfl(body)),
    }
}

// ---------------------------------------------------------------------------
// TFL+
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq)]
enum Binder {
    Universal,
    Existential,
}

fn tflplus(f: &Formula, env: &mut Vec<(String, Binder)>) -> String {
    match f {
        Formula::Atom { predicate, args } => tflplus_atom(predicate, args, env),
        Formula::Not(c) => format!("-{}", tflplus(c, env)),
        Formula::And(l, r) => tflplus_binary(l, '+', r, true, env),
        Formula::Or(l, r) | Formula::Xor(l, r) => tflplus_binary(l, '-', r, true, env),
        Formula::Implies(l, r) | Formula::Iff(l, r) => tflplus_binary(l, '-', r, false, env),
        Formula::ForAll { var, body } => {
            env.push((var.clone(), Binder::Universal));
            let out = format!("-{}", tflplus_body(body, env));
            env.pop();
            out
        }
        Formula::Exists { var, body } => {
            env.push((var.clone(), Binder::Existential));
            let out = format!("+{}", tflplus_body(body, env));
            env.pop();
            out
        }
    }
}

fn tflplus_binary(
    l: &Formula,
    sign: char,
    r: &Formula,
    tight: bool,
    env: &mut Vec<(String, Binder)>,
) -> String {
    let lhs = tflplus_operand(l, tight, env);
    let rhs = tflplus_operand(r, tight, env);
    format!("({lhs}{sign}{rhs})")
}

fn tflplus_operand(f: &Formula, tight: bool, env: &mut Vec<(String, Binder)>) -> String {
    let rendered = tflplus(f, env);
    if tight && matches!(f, Formula::Not(_)) {
        format!("({rendered})")
    } else {
        rendered
    }
}

fn tflplus_body(body: &Formula, env: &mut Vec<(String, Binder)>) -> String {
    let rendered = tflplus(body, env);
    match body {
        Formula::And(..)
        | Formula::Or(..)
        | Formula::Xor(..)
        | Formula::Implies(..)
        | Formula::Iff(..)
        | Formula::ForAll { .. }
        | Formula::Exists { .. } => rendered,
        _ => format!("({rendered})"),
    }
}

fn tflplus_atom(predicate: &str, args: &[Term], env: &[(String, Binder)]) -> String {
    let binder_of = |name: &str| {
        env.iter().rev().find(|(n, _)| n == name).map(|(_, b)| *b)
    };
    let mut saw_universal = false;
    let mut saw_existential = false;
    for arg in args {
        if arg.kind == TermKind::Variable {
            match binder_of(&arg.name) {
                Some(Binder::Universal) => saw_universal = true,
                Some(Binder::Existential) => saw_existential = true,
                None => {}
            }
        }
    }
    let subscript = if saw_universal {
        '0'
    } else if saw_existential {
        '1'
    } else {
        '2'
    };
    let mut out = format!("+{}{}", predicate_letter(predicate), subscript);
    // A unary ground atom names its constant as a following term group.
    if subscript == '2' && args.len() == 1 && args[0].kind == TermKind::Constant {
        let c = args[0].name.chars().next().unwrap_or('c').to_ascii_lowercase();
        out.push_str(&format!("(+{c}2)"));
    }
    out
}
