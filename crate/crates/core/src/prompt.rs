//! Prompt construction and model-output parsing.
//!
//! Two templates exist: a basic task prompt and a grammar-augmented prompt
//! that embeds the language's BNF between `<GRAMMAR>` tags. Few-shot prompts
//! prepend seeded exemplar blocks, each closed with the gold answer in
//! `<output>` tags.

use std::collections::BTreeMap;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use thiserror::Error;

use crate::dataset::StoryRecord;
use crate::formula::Label;
use crate::grammar::grammar_for;
use crate::lang::DataLanguage;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PromptKind {
    Basic,
    GrammarAugmented,
}

/// A prompt template with `{premises}`, `{conclusion}`, and (grammar kind
/// only) `{grammar}` slots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptTemplate {
    pub kind: PromptKind,
    pub text: String,
}

const BASIC_TEMPLATE: &str = "You are given a set of premises and a conclusion. The premises start after a <PREMISES> tag and conclusion starts after a <CONCLUSION> tag. Classify each conclusion as \"True\", \"False\" or \"Uncertain\" depending on its satisfiability of the premises.\n<PREMISES>{premises}</PREMISES>\n<CONCLUSION>{conclusion}</CONCLUSION>";

const GRAMMAR_TEMPLATE: &str = "You are an expert in logic, and you need to output the conclusion for the following logic problem. You are given grammar rules for the language of the problem in <GRAMMAR> tags, and you should conform to these rules to understand the premises in the <PREMISES> tags and conclusion in the <CONCLUSION> tags. Classify each conclusion as \"True\", \"False\" or \"Uncertain\" depending on its satisfiability of the premises. Present your answer only in <output> tags.\n<GRAMMAR>{grammar}</GRAMMAR>\n<PREMISES>{premises}</PREMISES>\n<CONCLUSION>{conclusion}</CONCLUSION>";

impl PromptTemplate {
    pub fn basic() -> Self {
        PromptTemplate { kind: PromptKind::Basic, text: BASIC_TEMPLATE.to_string() }
    }

    pub fn grammar_augmented() -> Self {
        PromptTemplate { kind: PromptKind::GrammarAugmented, text: GRAMMAR_TEMPLATE.to_string() }
    }

    pub fn for_kind(kind: PromptKind) -> Self {
        match kind {
            PromptKind::Basic => Self::basic(),
            PromptKind::GrammarAugmented => Self::grammar_augmented(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PromptError {
    #[error("record {record} has no {language} rendition")]
    MissingRendition { record: u64, language: DataLanguage },
    #[error("grammar prompting is unavailable for NL")]
    GrammarUnavailable,
    #[error("few-shot pool has {available} usable records, need {requested}")]
    PoolTooSmall { requested: usize, available: usize },
    #[error("record {record} has an empty conclusion")]
    EmptyConclusion { record: u64 },
}

/// Fills template slots left to right. Replacement text is never rescanned,
/// so data containing a slot marker cannot inject into the template.
fn fill(template: &str, slots: &[(&str, &str)]) -> String {
    let mut out = String::new();
    let mut rest = template;
    while !rest.is_empty() {
        let next = slots
            .iter()
            .filter_map(|(marker, value)| rest.find(marker).map(|i| (i, *marker, *value)))
            .min_by_key(|(i, _, _)| *i);
        match next {
            Some((i, marker, value)) => {
                out.push_str(&rest[..i]);
                out.push_str(value);
                rest = &rest[i + marker.len()..];
            }
            None => {
                out.push_str(rest);
                break;
            }
        }
    }
    out
}

/// Renders one record's prompt in the given language. Premises are joined
/// with single newlines inside the `<PREMISES>` tags.
pub fn build_prompt(
    record: &StoryRecord,
    language: DataLanguage,
    kind: PromptKind,
) -> Result<String, PromptError> {
    let (premises, conclusion) = record
        .statements(language)
        .ok_or(PromptError::MissingRendition { record: record.id, language })?;
    if conclusion.is_empty() {
        return Err(PromptError::EmptyConclusion { record: record.id });
    }
    let premises_text = premises.join("\n");
    let template = PromptTemplate::for_kind(kind);
    match kind {
        PromptKind::Basic => Ok(fill(
            &template.text,
            &[("{premises}", &premises_text), ("{conclusion}", &conclusion)],
        )),
        PromptKind::GrammarAugmented => {
            let grammar = grammar_for(language).ok_or(PromptError::GrammarUnavailable)?;
            Ok(fill(
                &template.text,
                &[
                    ("{grammar}", grammar.source_text.trim_end()),
                    ("{premises}", &premises_text),
                    ("{conclusion}", &conclusion),
                ],
            ))
        }
    }
}

/// Few-shot assembly options.
#[derive(Debug, Clone, Copy)]
pub struct FewShotOptions {
    pub shots: usize,
    pub seed: u64,
    /// Balance exemplars across gold labels instead of plain uniform sampling.
    pub balanced: bool,
}

impl Default for FewShotOptions {
    fn default() -> Self {
        FewShotOptions { shots: 8, seed: 42, balanced: false }
    }
}

/// A few-shot prompt: exemplar prefix plus the query prompt.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FewShotPrompt {
    pub prefix: String,
    pub query: String,
}

impl FewShotPrompt {
    /// The full prompt text sent to a model.
    pub fn full(&self) -> String {
        if self.prefix.is_empty() {
            self.query.clone()
        } else {
            format!("{}\n\n{}", self.prefix, self.query)
        }
    }
}

/// Builds a k-shot prompt for `query`. Exemplars are drawn by seeded uniform
/// sampling without replacement from `pool`, never including the query record;
/// each exemplar block is the rendered prompt followed by its gold answer in
/// `<output>` tags. Deterministic in (pool ids, options, language, kind).
pub fn build_few_shot(
    pool: &[StoryRecord],
    query: &StoryRecord,
    language: DataLanguage,
    kind: PromptKind,
    options: &FewShotOptions,
) -> Result<FewShotPrompt, PromptError> {
    let query_prompt = build_prompt(query, language, kind)?;
    if options.shots == 0 {
        return Ok(FewShotPrompt { prefix: String::new(), query: query_prompt });
    }

    let mut candidates: Vec<&StoryRecord> =
        pool.iter().filter(|r| r.id != query.id).collect();
    candidates.sort_by_key(|r| r.id);
    if candidates.len() < options.shots {
        return Err(PromptError::PoolTooSmall {
            requested: options.shots,
            available: candidates.len(),
        });
    }

    let chosen: Vec<&StoryRecord> = if options.balanced {
        sample_balanced(&candidates, options)
    } else {
        sample_uniform(&candidates, options.shots, options.seed)
    };

    let mut blocks = Vec::with_capacity(chosen.len());
    for exemplar in chosen {
        let prompt = build_prompt(exemplar, language, kind)?;
        blocks.push(format!("{prompt}\n<output>{}</output>", exemplar.label));
    }
    Ok(FewShotPrompt { prefix: blocks.join("\n\n"), query: query_prompt })
}

fn sample_uniform<'a>(
    candidates: &[&'a StoryRecord],
    k: usize,
    seed: u64,
) -> Vec<&'a StoryRecord> {
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in (1..order.len()).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        order.swap(i, j);
    }
    order[..k].iter().map(|&i| candidates[i]).collect()
}

/// Round-robin over gold labels: k/3 exemplars per label plus remainder in
/// label order, topping up from the leftover pool when a label runs short.
fn sample_balanced<'a>(
    candidates: &[&'a StoryRecord],
    options: &FewShotOptions,
) -> Vec<&'a StoryRecord> {
    let mut by_label: BTreeMap<Label, Vec<&StoryRecord>> = BTreeMap::new();
    for r in candidates {
        by_label.entry(r.label).or_default().push(r);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    for group in by_label.values_mut() {
        for i in (1..group.len()).rev() {
            let j = (rng.next_u64() % (i as u64 + 1)) as usize;
            group.swap(i, j);
        }
    }
    let k = options.shots;
    let per_label = k / Label::ALL.len();
    let mut remainder = k % Label::ALL.len();
    let mut chosen: Vec<&StoryRecord> = Vec::with_capacity(k);
    let mut leftovers: Vec<&StoryRecord> = Vec::new();
    for label in Label::ALL {
        let group = by_label.remove(&label).unwrap_or_default();
        let mut want = per_label;
        if remainder > 0 && !group.is_empty() {
            want += 1;
            remainder -= 1;
        }
        let take = want.min(group.len());
        chosen.extend(&group[..take]);
        leftovers.extend(&group[take..]);
    }
    let mut i = 0;
    while chosen.len() < k && i < leftovers.len() {
        chosen.push(leftovers[i]);
        i += 1;
    }
    chosen
}

/// A parsed model answer: one of the three gold labels or the `Invalid`
/// sentinel for anything else.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Prediction {
    Label(Label),
    Invalid,
}

impl Prediction {
    pub fn as_str(&self) -> &'static str {
        match self {
            Prediction::Label(l) => l.as_str(),
            Prediction::Invalid => "Invalid",
        }
    }
}

impl From<Label> for Prediction {
    fn from(l: Label) -> Self {
        Prediction::Label(l)
    }
}

/// Extracts the first `<output>...</output>` span (falling back to the whole
/// text), trims it, and matches it case-insensitively against the three gold
/// labels. Total: anything unmatched is `Invalid`.
pub fn parse_model_output(text: &str) -> Prediction {
    let span = match text.find("<output>") {
        Some(start) => {
            let rest = &text[start + "<output>".len()..];
            match rest.find("</output>") {
                Some(end) => &rest[..end],
                None => rest,
            }
        }
        None => text,
    };
    match Label::parse(span) {
        // `Unknown` aliases Uncertain only for gold data; model output must
        // use the instructed vocabulary.
        Some(label) if !span.trim().eq_ignore_ascii_case("unknown") => Prediction::Label(label),
        _ => Prediction::Invalid,
    }
}
