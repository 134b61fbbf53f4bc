//! Scannerless Earley recognizer over a [`GrammarSpec`].
//!
//! Terminals are literal character sequences, so membership is checked
//! directly against statement text with no separate lexer. Grammars must be
//! epsilon-free (the asset loader and [`compile`] both enforce this), which
//! keeps the recognizer loop simple: every completed item spans at least one
//! character, so earlier item sets are frozen by the time later sets complete
//! into them.

use std::collections::HashSet;

use thiserror::Error;

use crate::grammar::{GrammarSpec, Symbol};

/// Default cap on total Earley items. Generous for every grammar in this
/// workspace; exceeding it reports non-membership with a diagnostic flag.
pub const DEFAULT_ITEM_BUDGET: usize = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChartError {
    #[error("grammar rule `{0}` has an empty production")]
    EmptyProduction(String),
    #[error("start symbol `{0}` has no rule")]
    MissingStart(String),
}

#[derive(Debug, Clone)]
enum CSym {
    Nt(usize),
    T(Vec<char>),
}

struct Prod {
    lhs: usize,
    rhs: Vec<CSym>,
}

/// A grammar lowered to index form for recognition.
pub struct CompiledGrammar {
    names: Vec<String>,
    prods: Vec<Prod>,
    prods_of: Vec<Vec<usize>>,
    start: usize,
}

/// Outcome of a membership check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recognition {
    pub accepted: bool,
    pub budget_exceeded: bool,
    /// Furthest character index the recognizer reached.
    pub furthest: usize,
    /// Terminals that could have continued the parse at `furthest`.
    pub expected: Vec<String>,
    /// Nonterminals being matched at `furthest`, in rule order. The first one
    /// is reported as the failing rule in diagnostics.
    pub active_rules: Vec<String>,
}

pub fn compile(spec: &GrammarSpec) -> Result<CompiledGrammar, ChartError> {
    let names: Vec<String> = spec.rules.iter().map(|r| r.nonterminal.clone()).collect();
    let index_of = |name: &str| names.iter().position(|n| n == name);
    let mut prods = Vec::new();
    let mut prods_of = vec![Vec::new(); names.len()];
    for rule in &spec.rules {
        let lhs = index_of(&rule.nonterminal).unwrap();
        for production in &rule.productions {
            if production.is_empty() {
                return Err(ChartError::EmptyProduction(rule.nonterminal.clone()));
            }
            let rhs = production
                .iter()
                .map(|sym| match sym {
                    Symbol::Nonterminal(n) => CSym::Nt(index_of(n).expect("validated by spec")),
                    Symbol::Terminal(t) => CSym::T(t.chars().collect()),
                })
                .collect();
            prods_of[lhs].push(prods.len());
            prods.push(Prod { lhs, rhs });
        }
    }
    let start = index_of(&spec.start).ok_or_else(|| ChartError::MissingStart(spec.start.clone()))?;
    Ok(CompiledGrammar { names, prods, prods_of, start })
}

type Item = (usize, usize, usize); // (production, dot, origin)

/// Runs the recognizer with an explicit item budget.
pub fn recognize_with_budget(g: &CompiledGrammar, text: &str, budget: usize) -> Recognition {
    let input: Vec<char> = text.chars().collect();
    let n = input.len();

    let mut sets: Vec<Vec<Item>> = vec![Vec::new(); n + 1];
    let mut seen: Vec<HashSet<Item>> = vec![HashSet::new(); n + 1];
    let mut items_added = 0usize;
    let mut budget_exceeded = false;

    let push = |sets: &mut Vec<Vec<Item>>,
                    seen: &mut Vec<HashSet<Item>>,
                    items_added: &mut usize,
                    at: usize,
                    item: Item|
     -> bool {
        if seen[at].insert(item) {
            sets[at].push(item);
            *items_added += 1;
        }
        *items_added <= budget
    };

    for p in &g.prods_of[g.start] {
        if !push(&mut sets, &mut seen, &mut items_added, 0, (*p, 0, 0)) {
            budget_exceeded = true;
        }
    }

    'outer: for i in 0..=n {
        let mut cursor = 0;
        while cursor < sets[i].len() {
            let (prod, dot, origin) = sets[i][cursor];
            cursor += 1;
            let rhs = &g.prods[prod].rhs;
            if dot < rhs.len() {
                match &rhs[dot] {
                    CSym::Nt(b) => {
                        for p in &g.prods_of[*b] {
                            if !push(&mut sets, &mut seen, &mut items_added, i, (*p, 0, i)) {
                                budget_exceeded = true;
                                break 'outer;
                            }
                        }
                    }
                    CSym::T(cs) => {
                        if input[i..].starts_with(cs) {
                            let target = i + cs.len();
                            if !push(
                                &mut sets,
                                &mut seen,
                                &mut items_added,
                                target,
                                (prod, dot + 1, origin),
                            ) {
                                budget_exceeded = true;
                                break 'outer;
                            }
                        }
                    }
                }
            } else {
                // Completion. Epsilon-freeness guarantees origin < i, so the
                // origin set is already frozen.
                let lhs = g.prods[prod].lhs;
                let mut advances = Vec::new();
                for &(p2, d2, o2) in &sets[origin] {
                    let rhs2 = &g.prods[p2].rhs;
                    if d2 < rhs2.len() {
                        if let CSym::Nt(b) = &rhs2[d2] {
                            if *b == lhs {
                                advances.push((p2, d2 + 1, o2));
                            }
                        }
                    }
                }
                for item in advances {
                    if !push(&mut sets, &mut seen, &mut items_added, i, item) {
                        budget_exceeded = true;
                        break 'outer;
                    }
                }
            }
        }
    }

    let accepted = !budget_exceeded
        && sets[n].iter().any(|&(p, dot, origin)| {
            origin == 0 && g.prods[p].lhs == g.start && dot == g.prods[p].rhs.len()
        });

    // Diagnostics: look at the furthest set with any activity.
    let furthest = sets.iter().rposition(|s| !s.is_empty()).unwrap_or(0);
    let mut expected = Vec::new();
    let mut active_rules = Vec::new();
    if !accepted {
        let mut seen_term = HashSet::new();
        let mut seen_rule = HashSet::new();
        for &(p, dot, _) in &sets[furthest] {
            let rhs = &g.prods[p].rhs;
            if dot < rhs.len() {
                // The scan frontier: rules whose next symbol is a terminal
                // are where the text stopped matching.
                if let CSym::T(cs) = &rhs[dot] {
                    let t: String = cs.iter().collect();
                    if seen_term.insert(t.clone()) {
                        expected.push(t);
                    }
                    let name = g.names[g.prods[p].lhs].clone();
                    if seen_rule.insert(name.clone()) {
                        active_rules.push(name);
                    }
                }
            }
        }
        expected.sort();
        // active_rules kept in item order so the first entry is the rule the
        // recognizer was inside when progress stopped; put it in grammar rule
        // order for determinism.
        let order: Vec<&String> = g.names.iter().collect();
        active_rules.sort_by_key(|r| order.iter().position(|n| *n == r));
    }

    Recognition { accepted, budget_exceeded, furthest, expected, active_rules }
}

/// Membership with the default budget.
pub fn recognize(g: &CompiledGrammar, text: &str) -> Recognition {
    recognize_with_budget(g, text, DEFAULT_ITEM_BUDGET)
}

/// One-shot membership check against a grammar spec.
pub fn accepts(spec: &GrammarSpec, text: &str) -> Result<bool, ChartError> {
    let g = compile(spec)?;
    Ok(recognize(&g, text).accepted)
}
