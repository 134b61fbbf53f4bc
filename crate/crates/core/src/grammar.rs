//! BNF grammar specifications.
//!
//! A [`GrammarSpec`] is a named context-free grammar read from the `grammars/`
//! asset directory. The text format is one rule per line,
//! `nonterminal ::= alternative | alternative`, terminals double-quoted, `#`
//! starts a line comment. The grammars are scannerless: terminals are literal
//! character sequences (including spaces), so membership checking runs
//! directly over raw statement text.

use std::collections::BTreeSet;
use std::fmt;

use once_cell::sync::Lazy;
use thiserror::Error;

use crate::lang::{DataLanguage, TargetLanguage};

/// One symbol on the right-hand side of a production.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Symbol {
    Nonterminal(String),
    Terminal(String),
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Nonterminal(n) => f.write_str(n),
            Symbol::Terminal(t) => write!(f, "\"{t}\""),
        }
    }
}

/// A rule: one nonterminal with its ordered list of alternatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrammarRule {
    pub nonterminal: String,
    pub productions: Vec<Vec<Symbol>>,
}

/// A named BNF grammar plus its raw source text (the text is what gets
/// embedded in grammar-augmented prompts).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrammarSpec {
    pub name: DataLanguage,
    pub rules: Vec<GrammarRule>,
    pub start: String,
    pub source_text: String,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GrammarError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("nonterminal `{0}` is referenced but never defined")]
    UndefinedNonterminal(String),
    #[error("grammar has no rules")]
    Empty,
    #[error("rule `{0}` has an empty production; grammars must be epsilon-free")]
    EmptyProduction(String),
    #[error("duplicate rule for nonterminal `{0}`")]
    DuplicateRule(String),
}

impl GrammarSpec {
    /// Parses BNF text. The first rule's nonterminal is the start symbol.
    pub fn parse(name: DataLanguage, text: &str) -> Result<GrammarSpec, GrammarError> {
        let mut rules: Vec<GrammarRule> = Vec::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = strip_comment(raw_line);
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (lhs, rhs) = line.split_once("::=").ok_or_else(|| GrammarError::Format {
                line: line_no,
                message: "missing `::=`".into(),
            })?;
            let nonterminal = lhs.trim();
            if nonterminal.is_empty() || nonterminal.contains(char::is_whitespace) {
                return Err(GrammarError::Format {
                    line: line_no,
                    message: format!("bad nonterminal `{nonterminal}`"),
                });
            }
            if rules.iter().any(|r| r.nonterminal == nonterminal) {
                return Err(GrammarError::DuplicateRule(nonterminal.to_string()));
            }
            let mut productions = Vec::new();
            for alt in split_alternatives(rhs, line_no)? {
                let symbols = parse_symbols(&alt, line_no)?;
                if symbols.is_empty() {
                    return Err(GrammarError::EmptyProduction(nonterminal.to_string()));
                }
                productions.push(symbols);
            }
            rules.push(GrammarRule { nonterminal: nonterminal.to_string(), productions });
        }
        if rules.is_empty() {
            return Err(GrammarError::Empty);
        }
        let start = rules[0].nonterminal.clone();
        let spec = GrammarSpec { name, rules, start, source_text: text.to_string() };
        spec.check_references()?;
        Ok(spec)
    }

    fn check_references(&self) -> Result<(), GrammarError> {
        let defined: BTreeSet<&str> =
            self.rules.iter().map(|r| r.nonterminal.as_str()).collect();
        for rule in &self.rules {
            for prod in &rule.productions {
                for sym in prod {
                    if let Symbol::Nonterminal(n) = sym {
                        if !defined.contains(n.as_str()) {
                            return Err(GrammarError::UndefinedNonterminal(n.clone()));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Canonical serialization: one rule per line, single spaces, ` | `
    /// between alternatives. Parsing the output reproduces the same rules.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for rule in &self.rules {
            out.push_str(&rule.nonterminal);
            out.push_str(" ::= ");
            let alts: Vec<String> = rule
                .productions
                .iter()
                .map(|prod| {
                    prod.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")
                })
                .collect();
            out.push_str(&alts.join(" | "));
            out.push('\n');
        }
        out
    }

    pub fn rule(&self, nonterminal: &str) -> Option<&GrammarRule> {
        self.rules.iter().find(|r| r.nonterminal == nonterminal)
    }
}

fn strip_comment(line: &str) -> &str {
    // `#` starts a comment unless it appears inside a quoted terminal.
    let mut in_quote = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => in_quote = !in_quote,
            '#' if !in_quote => return &line[..i],
            _ => {}
        }
    }
    line
}

/// Splits an RHS on `|` separators that are outside quoted terminals.
fn split_alternatives(rhs: &str, line_no: usize) -> Result<Vec<String>, GrammarError> {
    let mut alts = Vec::new();
    let mut current = String::new();
    let mut in_quote = false;
    for c in rhs.chars() {
        match c {
            '"' => {
                in_quote = !in_quote;
                current.push(c);
            }
            '|' if !in_quote => {
                alts.push(std::mem::take(&mut current));
            }
            _ => current.push(c),
        }
    }
    if in_quote {
        return Err(GrammarError::Format { line: line_no, message: "unterminated terminal".into() });
    }
    alts.push(current);
    Ok(alts)
}

/// Parses one alternative into symbols: double-quoted pieces are terminals,
/// bare words are nonterminals.
fn parse_symbols(alt: &str, line_no: usize) -> Result<Vec<Symbol>, GrammarError> {
    let mut symbols = Vec::new();
    let chars: Vec<char> = alt.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '"' {
            let mut term = String::new();
            i += 1;
            loop {
                if i >= chars.len() {
                    return Err(GrammarError::Format {
                        line: line_no,
                        message: "unterminated terminal".into(),
                    });
                }
                if chars[i] == '"' {
                    i += 1;
                    break;
                }
                term.push(chars[i]);
                i += 1;
            }
            if term.is_empty() {
                return Err(GrammarError::Format {
                    line: line_no,
                    message: "empty terminal".into(),
                });
            }
            symbols.push(Symbol::Terminal(term));
        } else {
            let mut name = String::new();
            while i < chars.len() && !chars[i].is_whitespace() && chars[i] != '"' {
                name.push(chars[i]);
                i += 1;
            }
            symbols.push(Symbol::Nonterminal(name));
        }
    }
    Ok(symbols)
}

macro_rules! embedded {
    ($file:literal) => {
        include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../grammars/", $file))
    };
}

pub const FOL_BNF: &str = embedded!("fol.bnf");
pub const MINIFOL_BNF: &str = embedded!("minifol.bnf");
pub const CLIF_BNF: &str = embedded!("clif.bnf");
pub const CGIF_BNF: &str = embedded!("cgif.bnf");
pub const TFL_BNF: &str = embedded!("tfl.bnf");
pub const TFLPLUS_BNF: &str = embedded!("tflplus.bnf");

static GRAMMARS: Lazy<Vec<GrammarSpec>> = Lazy::new(|| {
    let sources = [
        (DataLanguage::Fol, FOL_BNF),
        (DataLanguage::Target(TargetLanguage::Minifol), MINIFOL_BNF),
        (DataLanguage::Target(TargetLanguage::Clif), CLIF_BNF),
        (DataLanguage::Target(TargetLanguage::Cgif), CGIF_BNF),
        (DataLanguage::Target(TargetLanguage::Tfl), TFL_BNF),
        (DataLanguage::Target(TargetLanguage::TflPlus), TFLPLUS_BNF),
    ];
    sources
        .into_iter()
        .map(|(lang, text)| {
            GrammarSpec::parse(lang, text)
                .unwrap_or_else(|e| panic!("embedded {lang} grammar is invalid: {e}"))
        })
        .collect()
});

/// The embedded grammar for a language, or `None` for NL (which has none).
pub fn grammar_for(lang: DataLanguage) -> Option<&'static GrammarSpec> {
    GRAMMARS.iter().find(|g| g.name == lang)
}

/// The embedded grammar for a transpiler target.
pub fn target_grammar(target: TargetLanguage) -> &'static GrammarSpec {
    grammar_for(DataLanguage::Target(target)).expect("all targets have embedded grammars")
}

/// All six embedded grammars in a stable order.
pub fn all_grammars() -> &'static [GrammarSpec] {
    &GRAMMARS
}
