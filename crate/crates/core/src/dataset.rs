//! Dataset ingestion, deterministic splitting, corpus transpilation, and
//! corpus statistics.
//!
//! Records travel as JSON lines with canonical field names (`premises_nl`,
//! `premises_fol`, `conclusion_nl`, `conclusion_fol`, `label`, `renditions`).
//! Source files with different key names are adapted through a field map.
//! Lines starting with `#` are provenance comments and are skipped.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::formula::{Formula, Label};
use crate::lang::{DataLanguage, TargetLanguage};
use crate::sef::{self, SyllogismClass};
use crate::transform::{self, TranspileResult};

/// One premises-conclusion row: natural-language texts, FOL annotation texts,
/// their parsed formulas, the gold label, and any transpiled renditions.
#[derive(Debug, Clone, PartialEq)]
pub struct StoryRecord {
    pub id: u64,
    pub premises_nl: Vec<String>,
    pub conclusion_nl: String,
    pub premises_fol_text: Vec<String>,
    pub conclusion_fol_text: String,
    pub premises_fol: Vec<Formula>,
    pub conclusion_fol: Formula,
    pub label: Label,
    pub renditions: BTreeMap<TargetLanguage, Rendition>,
}

/// A record's statements in one target language. Present only when every
/// statement validated against the target grammar.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rendition {
    pub premises: Vec<String>,
    pub conclusion: String,
}

impl StoryRecord {
    /// The record's statement texts in the given language, premises first.
    pub fn statements(&self, language: DataLanguage) -> Option<(Vec<String>, String)> {
        match language {
            DataLanguage::Nl => {
                Some((self.premises_nl.clone(), self.conclusion_nl.clone()))
            }
            DataLanguage::Fol => Some((
                self.premises_fol_text.clone(),
                self.conclusion_fol_text.clone(),
            )),
            DataLanguage::Target(t) => self
                .renditions
                .get(&t)
                .map(|r| (r.premises.clone(), r.conclusion.clone())),
        }
    }
}

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("no records to split")]
    EmptyInput,
    #[error("split ratio {0} is outside (0, 1)")]
    InvalidRatio(f64),
    #[error("record {record} has no {target} rendition")]
    MissingRendition { record: u64, target: TargetLanguage },
}

/// A per-line ingestion failure. The record is excluded from the success set
/// but still counted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecordFailure {
    pub line: usize,
    pub message: String,
}

/// Result of loading a JSONL file: parsed records plus the failure report.
#[derive(Debug, Clone)]
pub struct LoadOutcome {
    pub records: Vec<StoryRecord>,
    pub failures: Vec<RecordFailure>,
    /// Number of data lines seen (comments and blanks excluded).
    pub total: usize,
}

/// Maps canonical field names to candidate keys in the source file, tried in
/// order. The defaults cover both this crate's own serialization and the
/// common upstream key spellings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldMap {
    pub id: Vec<String>,
    pub premises_nl: Vec<String>,
    pub premises_fol: Vec<String>,
    pub conclusion_nl: Vec<String>,
    pub conclusion_fol: Vec<String>,
    pub label: Vec<String>,
}

impl Default for FieldMap {
    fn default() -> Self {
        let v = |items: &[&str]| items.iter().map(|s| s.to_string()).collect();
        FieldMap {
            id: v(&["id", "example_id"]),
            premises_nl: v(&["premises_nl", "premises"]),
            premises_fol: v(&["premises_fol", "premises-FOL", "premises_FOL"]),
            conclusion_nl: v(&["conclusion_nl", "conclusion"]),
            conclusion_fol: v(&["conclusion_fol", "conclusion-FOL", "conclusion_FOL"]),
            label: v(&["label"]),
        }
    }
}

impl FieldMap {
    /// Overrides defaults with explicit `canonical name -> file key` entries.
    pub fn from_overrides(overrides: &BTreeMap<String, String>) -> Self {
        let mut map = FieldMap::default();
        for (canonical, key) in overrides {
            let slot = match canonical.as_str() {
                "id" => &mut map.id,
                "premises_nl" => &mut map.premises_nl,
                "premises_fol" => &mut map.premises_fol,
                "conclusion_nl" => &mut map.conclusion_nl,
                "conclusion_fol" => &mut map.conclusion_fol,
                "label" => &mut map.label,
                _ => continue,
            };
            *slot = vec![key.clone()];
        }
        map
    }

    fn lookup<'v>(&self, obj: &'v serde_json::Map<String, Value>, field: &[String]) -> Option<&'v Value> {
        field.iter().find_map(|k| obj.get(k))
    }
}

/// Loads a JSONL dataset file. Per-record failures (bad JSON, missing keys,
/// FOL parse errors) go to the report; ingestion never aborts mid-file.
pub fn load_folio(path: &Path, field_map: &FieldMap) -> Result<LoadOutcome, DatasetError> {
    let text = fs::read_to_string(path)?;
    Ok(load_folio_str(&text, field_map))
}

/// In-memory variant of [`load_folio`].
pub fn load_folio_str(text: &str, field_map: &FieldMap) -> LoadOutcome {
    let mut records = Vec::new();
    let mut failures = Vec::new();
    let mut total = 0usize;
    let mut next_id = 0u64;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        total += 1;
        let fallback_id = next_id;
        next_id += 1;
        match parse_record_line(line, field_map, fallback_id) {
            Ok(record) => records.push(record),
            Err(message) => failures.push(RecordFailure { line: line_no, message }),
        }
    }
    LoadOutcome { records, failures, total }
}

fn parse_record_line(
    line: &str,
    field_map: &FieldMap,
    fallback_id: u64,
) -> Result<StoryRecord, String> {
    let value: Value = serde_json::from_str(line).map_err(|e| format!("bad json: {e}"))?;
    let obj = value.as_object().ok_or("record is not a json object")?;

    let id = match field_map.lookup(obj, &field_map.id) {
        Some(v) => v.as_u64().ok_or("id is not an unsigned integer")?,
        None => fallback_id,
    };

    let premises_nl = string_list(
        field_map
            .lookup(obj, &field_map.premises_nl)
            .ok_or("missing premises_nl")?,
    )?;
    let premises_fol_text = string_list(
        field_map
            .lookup(obj, &field_map.premises_fol)
            .ok_or("missing premises_fol")?,
    )?;
    let conclusion_nl = scalar_string(
        field_map
            .lookup(obj, &field_map.conclusion_nl)
            .ok_or("missing conclusion_nl")?,
    )?;
    let conclusion_fol_text = scalar_string(
        field_map
            .lookup(obj, &field_map.conclusion_fol)
            .ok_or("missing conclusion_fol")?,
    )?;
    let label_raw =
        scalar_string(field_map.lookup(obj, &field_map.label).ok_or("missing label")?)?;
    let label = Label::parse(&label_raw).ok_or_else(|| format!("bad label `{label_raw}`"))?;

    if premises_nl.is_empty() || premises_nl.len() != premises_fol_text.len() {
        return Err(format!(
            "premise count mismatch: {} NL vs {} FOL",
            premises_nl.len(),
            premises_fol_text.len()
        ));
    }
    if conclusion_nl.is_empty() || conclusion_fol_text.is_empty() {
        return Err("empty conclusion".into());
    }

    let mut premises_fol = Vec::with_capacity(premises_fol_text.len());
    for (i, text) in premises_fol_text.iter().enumerate() {
        let f = crate::fol::parse_fol(text).map_err(|e| format!("premise {i}: {e}"))?;
        premises_fol.push(f);
    }
    let conclusion_fol =
        crate::fol::parse_fol(&conclusion_fol_text).map_err(|e| format!("conclusion: {e}"))?;

    let renditions = match obj.get("renditions") {
        Some(v) => serde_json::from_value(v.clone()).map_err(|e| format!("bad renditions: {e}"))?,
        None => BTreeMap::new(),
    };

    Ok(StoryRecord {
        id,
        premises_nl,
        conclusion_nl,
        premises_fol_text,
        conclusion_fol_text,
        premises_fol,
        conclusion_fol,
        label,
        renditions,
    })
}

/// A list-valued field: either a JSON array of strings or one string with
/// newline separators (the upstream convention).
fn string_list(v: &Value) -> Result<Vec<String>, String> {
    match v {
        Value::Array(items) => items
            .iter()
            .map(scalar_string)
            .collect::<Result<Vec<_>, _>>()
            .map(|xs| {
                xs.into_iter().map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
            }),
        Value::String(s) => Ok(s
            .lines()
            .map(|l| l.trim().to_string())
            .filter(|l| !l.is_empty())
            .collect()),
        other => Err(format!("expected string or array, got {other}")),
    }
}

fn scalar_string(v: &Value) -> Result<String, String> {
    v.as_str().map(|s| s.trim().to_string()).ok_or_else(|| format!("expected string, got {v}"))
}

/// Serializes a record with canonical field names.
pub fn record_to_json(record: &StoryRecord) -> Value {
    let mut obj = serde_json::Map::new();
    obj.insert("id".into(), record.id.into());
    obj.insert("premises_nl".into(), record.premises_nl.clone().into());
    obj.insert("premises_fol".into(), record.premises_fol_text.clone().into());
    obj.insert("conclusion_nl".into(), record.conclusion_nl.clone().into());
    obj.insert("conclusion_fol".into(), record.conclusion_fol_text.clone().into());
    obj.insert("label".into(), record.label.as_str().into());
    if !record.renditions.is_empty() {
        obj.insert(
            "renditions".into(),
            serde_json::to_value(&record.renditions).expect("renditions serialize"),
        );
    }
    Value::Object(obj)
}

/// Serializes records to JSONL, one record per line, in input order.
pub fn to_jsonl(records: &[StoryRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&record_to_json(r).to_string());
        out.push('\n');
    }
    out
}

/// Deterministic split specification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSpec {
    pub ratio: f64,
    pub seed: u64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec { ratio: 0.8, seed: 42 }
    }
}

/// Splits records into train/test with a seeded Fisher-Yates shuffle.
/// `|train| = floor(ratio * n)`, the remainder goes to test, and both halves
/// are sorted by id. Identical inputs and spec always produce identical
/// partitions.
pub fn split(
    records: Vec<StoryRecord>,
    spec: &SplitSpec,
) -> Result<(Vec<StoryRecord>, Vec<StoryRecord>), DatasetError> {
    if records.is_empty() {
        return Err(DatasetError::EmptyInput);
    }
    if !(spec.ratio > 0.0 && spec.ratio < 1.0) {
        return Err(DatasetError::InvalidRatio(spec.ratio));
    }
    let n = records.len();
    let train_size = (spec.ratio * n as f64).floor() as usize;

    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    // Hand-rolled Fisher-Yates so the partition is frozen against RNG library
    // changes; the modulo bias is irrelevant for partitioning.
    for i in (1..n).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        order.swap(i, j);
    }

    let train_idx: std::collections::BTreeSet<usize> =
        order[..train_size].iter().copied().collect();
    let mut train = Vec::with_capacity(train_size);
    let mut test = Vec::with_capacity(n - train_size);
    for (i, record) in records.into_iter().enumerate() {
        if train_idx.contains(&i) {
            train.push(record);
        } else {
            test.push(record);
        }
    }
    train.sort_by_key(|r| r.id);
    test.sort_by_key(|r| r.id);
    Ok((train, test))
}

/// One failed statement during corpus transpilation.
#[derive(Debug, Clone)]
pub struct TranspileFailure {
    pub record_id: u64,
    /// Statement index within the record: premises first, conclusion last.
    pub statement: usize,
    pub result: TranspileResult,
}

/// Report of corpus transpilation. Renditions are only attached to a record
/// when all of its statements validated for that target.
#[derive(Debug, Clone, Default)]
pub struct TranspileReport {
    pub failures: Vec<TranspileFailure>,
}

impl TranspileReport {
    pub fn is_clean(&self) -> bool {
        self.failures.is_empty()
    }

    /// The failed results, for [`transform::grammar_diagnostics`].
    pub fn failed_results(&self) -> Vec<TranspileResult> {
        self.failures.iter().map(|f| f.result.clone()).collect()
    }
}

/// Fills renditions for each requested target. Per-record failures are
/// reported and the batch continues.
pub fn transpile_corpus(
    records: &mut [StoryRecord],
    targets: &[TargetLanguage],
) -> TranspileReport {
    let mut report = TranspileReport::default();
    for record in records.iter_mut() {
        for &target in targets {
            let results = transform::transform_record(record, target);
            if results.iter().all(|r| r.validated) {
                let mut texts: Vec<String> = results.into_iter().map(|r| r.text).collect();
                let conclusion = texts.pop().expect("conclusion present");
                record
                    .renditions
                    .insert(target, Rendition { premises: texts, conclusion });
            } else {
                for (i, result) in results.into_iter().enumerate() {
                    if !result.validated {
                        report.failures.push(TranspileFailure {
                            record_id: record.id,
                            statement: i,
                            result,
                        });
                    }
                }
            }
        }
    }
    report
}

/// Corpus measurements for one language rendering.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusStats {
    pub language: DataLanguage,
    pub records: usize,
    pub statements: usize,
    pub distinct_tokens: usize,
    pub distinct_chars: usize,
    pub mean_statement_chars: f64,
    pub class_counts: BTreeMap<SyllogismClass, usize>,
}

/// Computes corpus statistics over the requested language's texts. Tokens are
/// maximal alphanumeric/underscore runs (whitespace and punctuation delimit).
pub fn corpus_stats(
    records: &[StoryRecord],
    language: DataLanguage,
) -> Result<CorpusStats, DatasetError> {
    let mut tokens = std::collections::BTreeSet::new();
    let mut chars = std::collections::BTreeSet::new();
    let mut statements = 0usize;
    let mut total_chars = 0usize;
    for record in records {
        let (premises, conclusion) =
            record.statements(language).ok_or_else(|| DatasetError::MissingRendition {
                record: record.id,
                target: match language {
                    DataLanguage::Target(t) => t,
                    _ => unreachable!("NL and FOL texts always exist"),
                },
            })?;
        for text in premises.iter().chain(std::iter::once(&conclusion)) {
            statements += 1;
            total_chars += text.chars().count();
            chars.extend(text.chars());
            for token in text
                .split(|c: char| !(c.is_alphanumeric() || c == '_'))
                .filter(|t| !t.is_empty())
            {
                tokens.insert(token.to_string());
            }
        }
    }
    let mean = if statements == 0 { 0.0 } else { total_chars as f64 / statements as f64 };
    Ok(CorpusStats {
        language,
        records: records.len(),
        statements,
        distinct_tokens: tokens.len(),
        distinct_chars: chars.len(),
        mean_statement_chars: mean,
        class_counts: sef::classify_corpus(records),
    })
}
