//! Transpilation of formulas into the five target languages, with
//! grammar-membership validation of every emitted statement.
//!
//! Emission goes through the canonical [`Formula`] AST and is validated by
//! re-parsing against the target's BNF grammar. Validation failures are
//! collected as diagnostics for manual grammar review; grammars are never
//! mutated automatically.

mod emit;
mod target_lexers;

pub use emit::{emit, emit_strict};

use std::collections::BTreeMap;

use once_cell::sync::Lazy;
use thiserror::Error;

use crate::chart::{self, CompiledGrammar, Recognition};
use crate::dataset::StoryRecord;
use crate::fol::{self, FolError};
use crate::formula::Formula;
use crate::grammar::target_grammar;
use crate::lang::TargetLanguage;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error("{construct} has no attested mapping in {target}")]
    Unsupported { target: TargetLanguage, construct: &'static str },
    #[error("{target} is lossy and cannot be parsed back to a formula")]
    UnsupportedTarget { target: TargetLanguage },
    #[error(transparent)]
    Parse(#[from] FolError),
}

/// Outcome of transpiling one statement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranspileResult {
    pub target: TargetLanguage,
    pub text: String,
    pub validated: bool,
    pub diagnostics: Vec<String>,
    /// Grammar rule the validator was inside when progress stopped, if any.
    pub failing_rule: Option<String>,
}

impl TranspileResult {
    fn ok(target: TargetLanguage, text: String) -> Self {
        TranspileResult { target, text, validated: true, diagnostics: Vec::new(), failing_rule: None }
    }
}

static COMPILED: Lazy<Vec<(TargetLanguage, CompiledGrammar)>> = Lazy::new(|| {
    TargetLanguage::ALL
        .iter()
        .map(|&t| {
            let g = chart::compile(target_grammar(t)).expect("embedded grammars compile");
            (t, g)
        })
        .collect()
});

fn compiled(target: TargetLanguage) -> &'static CompiledGrammar {
    &COMPILED.iter().find(|(t, _)| *t == target).unwrap().1
}

/// Full grammar-membership check of `text` against the target's BNF.
pub fn validate(text: &str, target: TargetLanguage) -> bool {
    chart::recognize(compiled(target), text).accepted
}

/// Membership check with failure diagnostics.
pub fn validate_detailed(text: &str, target: TargetLanguage) -> Recognition {
    chart::recognize(compiled(target), text)
}

/// Parses target-language text back into a formula. Only the lossless targets
/// (MINIFOL, CLIF) support this.
pub fn parse_target(text: &str, target: TargetLanguage) -> Result<Formula, TransformError> {
    let tokens = match target {
        TargetLanguage::Minifol => target_lexers::tokenize_minifol(text)?,
        TargetLanguage::Clif => target_lexers::tokenize_clif(text)?,
        _ => return Err(TransformError::UnsupportedTarget { target }),
    };
    let tree = fol::parser::parse_tokens(&tokens, text.chars().count())?;
    Ok(fol::parser::lower(&tree, &mut Vec::new()))
}

/// Emits one formula and validates the result against the target grammar.
pub fn transpile(f: &Formula, target: TargetLanguage) -> TranspileResult {
    let text = emit(f, target);
    let recognition = validate_detailed(&text, target);
    if recognition.accepted {
        TranspileResult::ok(target, text)
    } else {
        let rule = recognition.active_rules.first().cloned();
        let mut diagnostics = vec![format!(
            "rule {}: unparsable at char {}; expected {}",
            rule.as_deref().unwrap_or("<none>"),
            recognition.furthest,
            if recognition.expected.is_empty() {
                "nothing".to_string()
            } else {
                recognition
                    .expected
                    .iter()
                    .map(|t| format!("{t:?}"))
                    .collect::<Vec<_>>()
                    .join(" | ")
            }
        )];
        if recognition.budget_exceeded {
            diagnostics.push("recognizer item budget exceeded".into());
        }
        TranspileResult {
            target,
            text,
            validated: false,
            diagnostics,
            failing_rule: rule,
        }
    }
}

/// Transpiles a sequence of already-parsed statements, order preserved.
pub fn transform_statements(formulas: &[Formula], target: TargetLanguage) -> Vec<TranspileResult> {
    formulas.iter().map(|f| transpile(f, target)).collect()
}

/// Transpiles raw FOL statement texts. A statement that fails to parse yields
/// an unvalidated result naming its index; the batch never aborts.
pub fn transform_texts<S: AsRef<str>>(
    fol_texts: &[S],
    target: TargetLanguage,
) -> Vec<TranspileResult> {
    fol_texts
        .iter()
        .enumerate()
        .map(|(i, text)| match fol::parse_fol(text.as_ref()) {
            Ok(f) => transpile(&f, target),
            Err(e) => TranspileResult {
                target,
                text: String::new(),
                validated: false,
                diagnostics: vec![format!("statement {i}: {e}")],
                failing_rule: None,
            },
        })
        .collect()
}

/// Transpiles every premise and the conclusion of a record, in order.
/// Record-level success is `all(validated)`.
pub fn transform_record(record: &StoryRecord, target: TargetLanguage) -> Vec<TranspileResult> {
    let mut results = transform_statements(&record.premises_fol, target);
    results.push(transpile(&record.conclusion_fol, target));
    results
}

/// Groups validation failures by target and by first failing grammar rule
/// into a human-readable report for manual grammar review.
pub fn grammar_diagnostics(failures: &[TranspileResult]) -> String {
    if failures.is_empty() {
        return String::new();
    }
    let mut by_target: BTreeMap<TargetLanguage, BTreeMap<String, Vec<&TranspileResult>>> =
        BTreeMap::new();
    for f in failures {
        debug_assert!(!f.validated);
        let rule = f.failing_rule.clone().unwrap_or_else(|| "<parse failure>".into());
        by_target.entry(f.target).or_default().entry(rule).or_default().push(f);
    }
    let mut out = String::new();
    out.push_str(&format!(
        "transpilation failures: {} across {} target(s)\n",
        failures.len(),
        by_target.len()
    ));
    for (target, by_rule) in &by_target {
        let count: usize = by_rule.values().map(|v| v.len()).sum();
        out.push_str(&format!("\ntarget {target} — {count} failure(s)\n"));
        for (rule, group) in by_rule {
            out.push_str(&format!("  rule {rule} — {} statement(s)\n", group.len()));
            for f in group {
                let detail = f.diagnostics.first().map(String::as_str).unwrap_or("");
                out.push_str(&format!("    text: {:?}\n      {detail}\n", f.text));
            }
        }
    }
    out
}
