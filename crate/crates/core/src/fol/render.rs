//! Canonical rendering of formulas.
//!
//! FOL, MINIFOL, and CLIF share one surface shape and differ only in their
//! operator spellings, so a single walker drives all three. The grouping
//! scheme is normative for the whole workspace:
//!
//! - every binary connective is wrapped in parentheses;
//! - a negation that is a direct operand of ∧/∨/⊕ gets an extra paren layer,
//!   while under →/↔ it stays bare;
//! - a quantifier body is grouped exactly once: binary bodies bring their own
//!   parentheses, chained quantifiers concatenate, anything else is wrapped;
//! - `=` atoms render infix.

use crate::formula::Formula;

pub(crate) struct InfixStyle {
    pub forall: fn(&str) -> String,
    pub exists: fn(&str) -> String,
    pub not: &'static str,
    pub and: &'static str,
    pub or: &'static str,
    pub xor: &'static str,
    pub implies: &'static str,
    pub iff: &'static str,
    pub eq: &'static str,
    pub lowercase: bool,
}

pub(crate) const FOL_STYLE: InfixStyle = InfixStyle {
    forall: |v| format!("∀{v} "),
    exists: |v| format!("∃{v} "),
    not: "¬",
    and: " ∧ ",
    or: " ∨ ",
    xor: " ⊕ ",
    implies: " → ",
    iff: " ↔ ",
    eq: " = ",
    lowercase: false,
};

/// Renders canonical FOL text. `parse_fol(render_fol(f))` is structurally
/// equal to `f` for every well-scoped formula.
pub fn render_fol(f: &Formula) -> String {
    emit_infix(f, &FOL_STYLE)
}

pub(crate) fn emit_infix(f: &Formula, style: &InfixStyle) -> String {
    render(f, style)
}

fn name(raw: &str, style: &InfixStyle) -> String {
    if style.lowercase {
        raw.to_ascii_lowercase()
    } else {
        raw.to_string()
    }
}

fn render(f: &Formula, style: &InfixStyle) -> String {
    match f {
        Formula::Atom { predicate, args } => {
            if predicate == "=" && args.len() == 2 {
                return format!(
                    "{}{}{}",
                    name(&args[0].name, style),
                    style.eq,
                    name(&args[1].name, style)
                );
            }
            if args.is_empty() {
                name(predicate, style)
            } else {
                let rendered: Vec<String> =
                    args.iter().map(|t| name(&t.name, style)).collect();
                format!("{}({})", name(predicate, style), rendered.join(", "))
            }
        }
        Formula::Not(child) => format!("{}{}", style.not, render(child, style)),
        Formula::And(l, r) => binary(l, style.and, r, true, style),
        Formula::Or(l, r) => binary(l, style.or, r, true, style),
        Formula::Xor(l, r) => binary(l, style.xor, r, true, style),
        Formula::Implies(l, r) => binary(l, style.implies, r, false, style),
        Formula::Iff(l, r) => binary(l, style.iff, r, false, style),
        Formula::ForAll { var, body } => {
            format!("{}{}", (style.forall)(&name(var, style)), quant_body(body, style))
        }
        Formula::Exists { var, body } => {
            format!("{}{}", (style.exists)(&name(var, style)), quant_body(body, style))
        }
    }
}

fn binary(l: &Formula, op: &str, r: &Formula, tight: bool, style: &InfixStyle) -> String {
    format!("({}{}{})", operand(l, tight, style), op, operand(r, tight, style))
}

fn operand(f: &Formula, tight: bool, style: &InfixStyle) -> String {
    let rendered = render(f, style);
    if tight && matches!(f, Formula::Not(_)) {
        format!("({rendered})")
    } else {
        rendered
    }
}

fn quant_body(body: &Formula, style: &InfixStyle) -> String {
    let rendered = render(body, style);
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
