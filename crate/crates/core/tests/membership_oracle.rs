//! Independent membership oracle for `transform::validate`.
//!
//! The oracle converts each grammar to Chomsky normal form and runs CYK over
//! the input characters — a different algorithm family from the Earley
//! recognizer behind `validate`, sharing no code with it. Agreement is checked
//! on valid emissions, on mutated emissions, and on random ASCII noise.

use std::collections::{BTreeMap, BTreeSet};

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use logoform_core::formula::{Formula, Term};
use logoform_core::grammar::{target_grammar, GrammarSpec, Symbol};
use logoform_core::lang::TargetLanguage;
use logoform_core::transform::{emit, validate};

// ---------------------------------------------------------------------------
// CNF conversion
// ---------------------------------------------------------------------------

#[derive(Debug)]
struct Cnf {
    /// A -> B C
    binary: Vec<(usize, usize, usize)>,
    /// A -> 'c'
    terminal: BTreeMap<char, Vec<usize>>,
    start: usize,
    nonterminals: usize,
}

struct CnfBuilder {
    names: Vec<String>,
    binary: Vec<(usize, usize, usize)>,
    terminal: Vec<(usize, char)>,
    unit: Vec<(usize, usize)>,
    char_nts: BTreeMap<char, usize>,
}

impl CnfBuilder {
    fn nt(&mut self, name: &str) -> usize {
        if let Some(i) = self.names.iter().position(|n| n == name) {
            return i;
        }
        self.names.push(name.to_string());
        self.names.len() - 1
    }

    fn fresh(&mut self, hint: &str) -> usize {
        let name = format!("{hint}#{}", self.names.len());
        self.names.push(name);
        self.names.len() - 1
    }

    fn char_nt(&mut self, c: char) -> usize {
        if let Some(&i) = self.char_nts.get(&c) {
            return i;
        }
        let i = self.fresh(&format!("ch:{c}"));
        self.terminal.push((i, c));
        self.char_nts.insert(c, i);
        i
    }
}

fn to_cnf(spec: &GrammarSpec) -> Cnf {
    let mut b = CnfBuilder {
        names: Vec::new(),
        binary: Vec::new(),
        terminal: Vec::new(),
        unit: Vec::new(),
        char_nts: BTreeMap::new(),
    };
    for rule in &spec.rules {
        b.nt(&rule.nonterminal);
    }

    for rule in &spec.rules {
        let lhs = b.nt(&rule.nonterminal);
        for production in &rule.productions {
            // TERM: every symbol becomes a nonterminal; single-char terminal
            // productions stay terminal.
            if production.len() == 1 {
                match &production[0] {
                    Symbol::Terminal(t) if t.chars().count() == 1 => {
                        b.terminal.push((lhs, t.chars().next().unwrap()));
                        continue;
                    }
                    Symbol::Nonterminal(n) => {
                        let n = b.nt(&n.clone());
                        b.unit.push((lhs, n));
                        continue;
                    }
                    _ => {}
                }
            }
            let mut seq: Vec<usize> = Vec::new();
            for sym in production {
                match sym {
                    Symbol::Nonterminal(n) => seq.push(b.nt(&n.clone())),
                    Symbol::Terminal(t) => {
                        for c in t.chars() {
                            seq.push(b.char_nt(c));
                        }
                    }
                }
            }
            match seq.len() {
                0 => unreachable!("grammars are epsilon-free"),
                1 => b.unit.push((lhs, seq[0])),
                _ => {
                    // BIN: right-fold into binary rules.
                    let mut rhs_tail = seq.pop().unwrap();
                    while seq.len() > 1 {
                        let left = seq.pop().unwrap();
                        let fresh = b.fresh("bin");
                        b.binary.push((fresh, left, rhs_tail));
                        rhs_tail = fresh;
                    }
                    b.binary.push((lhs, seq[0], rhs_tail));
                }
            }
        }
    }

    // UNIT: transitive closure, then copy non-unit productions up.
    let n = b.names.len();
    let mut reach: Vec<BTreeSet<usize>> = (0..n).map(|i| BTreeSet::from([i])).collect();
    loop {
        let mut changed = false;
        for &(a, c) in &b.unit {
            let targets: Vec<usize> = reach[c].iter().copied().collect();
            for t in targets {
                if reach[a].insert(t) {
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut binary = Vec::new();
    for (a, set) in reach.iter().enumerate() {
        for &c in set {
            for &(lhs, x, y) in &b.binary {
                if lhs == c {
                    binary.push((a, x, y));
                }
            }
        }
    }
    let mut terminal: BTreeMap<char, Vec<usize>> = BTreeMap::new();
    for (a, set) in reach.iter().enumerate() {
        for &c in set {
            for &(lhs, ch) in &b.terminal {
                if lhs == c {
                    terminal.entry(ch).or_default().push(a);
                }
            }
        }
    }
    for v in terminal.values_mut() {
        v.sort();
        v.dedup();
    }
    binary.sort();
    binary.dedup();

    let start = b.names.iter().position(|n| n == &spec.start).unwrap();
    Cnf { binary, terminal, start, nonterminals: b.names.len() }
}

// ---------------------------------------------------------------------------
// CYK
// ---------------------------------------------------------------------------

struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    fn new(bits: usize) -> Self {
        BitSet { words: vec![0; bits.div_ceil(64)] }
    }

    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.words[i / 64] & (1 << (i % 64)) != 0
    }
}

fn cyk_accepts(cnf: &Cnf, text: &str) -> bool {
    let chars: Vec<char> = text.chars().collect();
    let n = chars.len();
    if n == 0 {
        return false;
    }
    // table[len-1][start]
    let mut table: Vec<Vec<BitSet>> = Vec::with_capacity(n);
    for len in 1..=n {
        table.push((0..=(n - len)).map(|_| BitSet::new(cnf.nonterminals)).collect());
    }
    for (i, &c) in chars.iter().enumerate() {
        if let Some(nts) = cnf.terminal.get(&c) {
            for &a in nts {
                table[0][i].set(a);
            }
        }
    }
    for len in 2..=n {
        for start in 0..=(n - len) {
            for split in 1..len {
                for &(a, x, y) in &cnf.binary {
                    if table[split - 1][start].get(x)
                        && table[len - split - 1][start + split].get(y)
                    {
                        table[len - 1][start].set(a);
                    }
                }
            }
        }
    }
    table[n - 1][0].get(cnf.start)
}

// ---------------------------------------------------------------------------
// agreement checks
// ---------------------------------------------------------------------------

const PREDICATES: [&str; 6] = ["Employee", "Work", "Manager", "HasLunch", "Square", "Love"];
const CONSTANTS: [&str; 4] = ["james", "home", "meeting", "company"];
const VARIABLES: [&str; 2] = ["x", "y"];

fn small_formula(rng: &mut ChaCha8Rng, depth: usize, bound: &mut Vec<String>) -> Formula {
    let atom = |rng: &mut ChaCha8Rng, bound: &[String]| {
        let mut args = Vec::new();
        for _ in 0..(1 + rng.next_u64() % 2) {
            if !bound.is_empty() && rng.next_u64().is_multiple_of(2) {
                args.push(Term::variable(bound[(rng.next_u64() as usize) % bound.len()].clone()));
            } else {
                args.push(Term::constant(CONSTANTS[(rng.next_u64() as usize) % CONSTANTS.len()]));
            }
        }
        Formula::atom(PREDICATES[(rng.next_u64() as usize) % PREDICATES.len()], args)
    };
    if depth == 0 || rng.next_u64().is_multiple_of(3) {
        return atom(rng, bound);
    }
    match rng.next_u64() % 8 {
        0 => Formula::not(small_formula(rng, depth - 1, bound)),
        1 => Formula::and(
            small_formula(rng, depth - 1, bound),
            small_formula(rng, depth - 1, bound),
        ),
        2 => Formula::or(
            small_formula(rng, depth - 1, bound),
            small_formula(rng, depth - 1, bound),
        ),
        3 => Formula::xor(
            small_formula(rng, depth - 1, bound),
            small_formula(rng, depth - 1, bound),
        ),
        4 => Formula::implies(
            small_formula(rng, depth - 1, bound),
            small_formula(rng, depth - 1, bound),
        ),
        5 | 6 => {
            let var = VARIABLES[(rng.next_u64() as usize) % VARIABLES.len()].to_string();
            bound.push(var.clone());
            let body = small_formula(rng, depth - 1, bound);
            bound.pop();
            if rng.next_u64().is_multiple_of(2) {
                Formula::forall(var, body)
            } else {
                Formula::exists(var, body)
            }
        }
        _ => atom(rng, bound),
    }
}

#[test]
fn oracle_accepts_all_valid_emissions() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for target in TargetLanguage::ALL {
        let cnf = to_cnf(target_grammar(target));
        for _ in 0..25 {
            let f = small_formula(&mut rng, 2, &mut Vec::new());
            let text = emit(&f, target);
            assert!(validate(&text, target), "{target} recognizer rejected {text}");
            assert!(cyk_accepts(&cnf, &text), "{target} oracle rejected {text}");
        }
    }
}

#[test]
fn budget_survives_deeply_nested_statements() {
    use logoform_core::chart::{compile, recognize_with_budget, DEFAULT_ITEM_BUDGET};
    use logoform_core::fol::parse_fol;

    // 40 nested quantified implications: far beyond any dataset row.
    let mut text = String::from("P(a)");
    for i in 0..40 {
        text = format!("∀x ((Q{i}(x) ∧ {text}) → R{i}(x, home))");
    }
    let f = parse_fol(&text).unwrap();
    for target in TargetLanguage::ALL {
        let s = emit(&f, target);
        let g = compile(target_grammar(target)).unwrap();
        let r = recognize_with_budget(&g, &s, DEFAULT_ITEM_BUDGET);
        assert!(!r.budget_exceeded, "{target}: {} chars blew the budget", s.chars().count());
        assert!(r.accepted, "{target}: emission of length {} rejected", s.chars().count());
    }
}

#[test]
fn oracle_agrees_on_mutated_emissions() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut disagreements = Vec::new();
    let mut accepted = 0usize;
    let mut total = 0usize;
    for target in TargetLanguage::ALL {
        let cnf = to_cnf(target_grammar(target));
        let mut checked = 0;
        while checked < 40 {
            let f = small_formula(&mut rng, 2, &mut Vec::new());
            let mut text: Vec<char> = emit(&f, target).chars().collect();
            if text.len() > 30 {
                continue;
            }
            // One to three random edits: delete, duplicate, or swap.
            for _ in 0..(1 + rng.next_u64() % 3) {
                if text.is_empty() {
                    break;
                }
                let i = (rng.next_u64() as usize) % text.len();
                match rng.next_u64() % 3 {
                    0 => {
                        text.remove(i);
                    }
                    1 => {
                        let c = text[i];
                        text.insert(i, c);
                    }
                    _ => {
                        let j = (rng.next_u64() as usize) % text.len();
                        text.swap(i, j);
                    }
                }
            }
            let s: String = text.iter().collect();
            let fast = validate(&s, target);
            let slow = cyk_accepts(&cnf, &s);
            if fast != slow {
                disagreements.push(format!("{target}: {s:?} fast={fast} slow={slow}"));
            }
            accepted += usize::from(fast);
            total += 1;
            checked += 1;
        }
    }
    assert!(disagreements.is_empty(), "{disagreements:#?}");
    // Sanity: mutation must actually exercise both outcomes overall.
    assert!(accepted < total, "every mutant accepted; mutation too weak");
}

#[test]
fn oracle_agrees_on_random_ascii() {
    let alphabet: Vec<char> =
        "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789+-()[]~?*@ ,=&|^:<>"
            .chars()
            .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(123);
    for target in TargetLanguage::ALL {
        let cnf = to_cnf(target_grammar(target));
        for _ in 0..60 {
            let len = (rng.next_u64() % 17) as usize;
            let s: String = (0..len)
                .map(|_| alphabet[(rng.next_u64() as usize) % alphabet.len()])
                .collect();
            assert_eq!(
                validate(&s, target),
                cyk_accepts(&cnf, &s),
                "{target} disagreement on {s:?}"
            );
        }
    }
}

#[test]
fn default_item_budget_is_not_binding() {
    // Re-running the recognizer with ten times the default budget must not
    // change any verdict: the default is comfortably above what these
    // grammars need.
    use logoform_core::chart::{compile, recognize_with_budget, DEFAULT_ITEM_BUDGET};
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for target in TargetLanguage::ALL {
        let compiled = compile(target_grammar(target)).unwrap();
        for _ in 0..10 {
            let f = small_formula(&mut rng, 3, &mut Vec::new());
            let text = emit(&f, target);
            let normal = recognize_with_budget(&compiled, &text, DEFAULT_ITEM_BUDGET);
            let roomy = recognize_with_budget(&compiled, &text, DEFAULT_ITEM_BUDGET * 10);
            assert!(!normal.budget_exceeded, "{target}: {text}");
            assert_eq!(normal.accepted, roomy.accepted, "{target}: {text}");
        }
    }
}

#[test]
fn oracle_agrees_on_golden_strings() {
    let cases: [(TargetLanguage, &str); 5] = [
        (
            TargetLanguage::Minifol,
            "all:x ((employee(x) & schedule(x, meeting, customers)) :- appearin(x, company))",
        ),
        (
            TargetLanguage::Clif,
            "forall x (employee(x) implies (haslunch(x, company) xor haslunch(x, home)))",
        ),
        (
            TargetLanguage::Cgif,
            "@every *x [([(employee[(?x)]  [(~in[(?x  homecountry)])])]  work[(?x  home)])]",
        ),
        (TargetLanguage::Tfl, "-+M1--+W1"),
        (TargetLanguage::TflPlus, "-(+M2(+j2)-+A2)"),
    ];
    for (target, text) in cases {
        let cnf = to_cnf(target_grammar(target));
        assert!(validate(text, target), "{target}: {text}");
        assert!(cyk_accepts(&cnf, text), "{target} oracle: {text}");
        let broken = format!("){text}");
        assert!(!validate(&broken, target));
        assert!(!cyk_accepts(&cnf, &broken));
    }
}
