//! Syllogistic classification of premises-conclusion pairs.
//!
//! Four classes, checked in strict precedence order over the whole pair
//! (premises and conclusion jointly):
//!
//! 1. Disjunctive — any ∨ or ⊕ occurs anywhere;
//! 2. Hypothetical — any → occurs anywhere;
//! 3. Categorical — exactly two premises;
//! 4. Complex — everything else.
//!
//! ↔ triggers none of the first two: it is neither a disjunction nor an
//! implication for classification purposes.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::StoryRecord;
use crate::formula::{Connective, Formula};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SyllogismClass {
    Disjunctive,
    Hypothetical,
    Categorical,
    Complex,
}

impl SyllogismClass {
    pub const ALL: [SyllogismClass; 4] = [
        SyllogismClass::Disjunctive,
        SyllogismClass::Hypothetical,
        SyllogismClass::Categorical,
        SyllogismClass::Complex,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SyllogismClass::Disjunctive => "Disjunctive",
            SyllogismClass::Hypothetical => "Hypothetical",
            SyllogismClass::Categorical => "Categorical",
            SyllogismClass::Complex => "Complex",
        }
    }
}

impl fmt::Display for SyllogismClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SyllogismClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "disjunctive" => Ok(SyllogismClass::Disjunctive),
            "hypothetical" => Ok(SyllogismClass::Hypothetical),
            "categorical" => Ok(SyllogismClass::Categorical),
            "complex" => Ok(SyllogismClass::Complex),
            other => Err(format!("unknown syllogism class `{other}`")),
        }
    }
}

impl Serialize for SyllogismClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for SyllogismClass {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        raw.parse().map_err(serde::de::Error::custom)
    }
}

/// Assigns exactly one class to a premises-conclusion pair. Pure and total;
/// invariant under premise permutation.
pub fn classify(premises: &[Formula], conclusion: &Formula) -> SyllogismClass {
    let mut has_disjunction = false;
    let mut has_implication = false;
    for f in premises.iter().chain(std::iter::once(conclusion)) {
        let conns = f.connectives();
        has_disjunction |= conns.contains(&Connective::Or) || conns.contains(&Connective::Xor);
        has_implication |= conns.contains(&Connective::Implies);
    }
    if has_disjunction {
        SyllogismClass::Disjunctive
    } else if has_implication {
        SyllogismClass::Hypothetical
    } else if premises.len() == 2 {
        SyllogismClass::Categorical
    } else {
        SyllogismClass::Complex
    }
}

/// Classifies a record's parsed pair.
pub fn classify_record(record: &StoryRecord) -> SyllogismClass {
    classify(&record.premises_fol, &record.conclusion_fol)
}

/// Per-class counts over a corpus. Every class is present in the map (zero
/// when unseen) and the counts sum to `records.len()`.
pub fn classify_corpus(records: &[StoryRecord]) -> BTreeMap<SyllogismClass, usize> {
    let mut counts: BTreeMap<SyllogismClass, usize> =
        SyllogismClass::ALL.iter().map(|&c| (c, 0)).collect();
    for r in records {
        *counts.get_mut(&classify_record(r)).unwrap() += 1;
    }
    counts
}
