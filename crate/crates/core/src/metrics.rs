//! Scoring of predictions against gold labels: accuracy, averaged
//! precision/recall/F1, confusion matrix, and per-syllogism-class hit/miss
//! breakdown.
//!
//! Predictions include the `Invalid` sentinel as a fourth predicted row. It is
//! never a gold column: an invalid prediction counts as wrong for accuracy and
//! contributes no true positives anywhere, so it can only hurt.

use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::Serialize;
use thiserror::Error;

use crate::formula::Label;
use crate::prompt::Prediction;
use crate::sef::SyllogismClass;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricsError {
    #[error("gold has {gold} records but predictions have {pred}")]
    LengthMismatch { gold: usize, pred: usize },
    #[error("no records to score")]
    EmptyInput,
}

const PRED_ROWS: [Prediction; 4] = [
    Prediction::Label(Label::True),
    Prediction::Label(Label::False),
    Prediction::Label(Label::Uncertain),
    Prediction::Invalid,
];

/// 4x3 counts: rows are predicted {True, False, Uncertain, Invalid}, columns
/// are gold {True, False, Uncertain}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    counts: [[usize; 3]; 4],
}

fn label_index(l: Label) -> usize {
    match l {
        Label::True => 0,
        Label::False => 1,
        Label::Uncertain => 2,
    }
}

fn pred_index(p: Prediction) -> usize {
    match p {
        Prediction::Label(l) => label_index(l),
        Prediction::Invalid => 3,
    }
}

impl ConfusionMatrix {
    pub fn from_pairs(gold: &[Label], pred: &[Prediction]) -> Result<Self, MetricsError> {
        if gold.len() != pred.len() {
            return Err(MetricsError::LengthMismatch { gold: gold.len(), pred: pred.len() });
        }
        if gold.is_empty() {
            return Err(MetricsError::EmptyInput);
        }
        let mut counts = [[0usize; 3]; 4];
        for (&g, &p) in gold.iter().zip(pred) {
            counts[pred_index(p)][label_index(g)] += 1;
        }
        Ok(ConfusionMatrix { counts })
    }

    pub fn count(&self, pred: Prediction, gold: Label) -> usize {
        self.counts[pred_index(pred)][label_index(gold)]
    }

    pub fn total(&self) -> usize {
        self.counts.iter().map(|row| row.iter().sum::<usize>()).sum()
    }

    /// Gold-class support (column sum).
    pub fn support(&self, gold: Label) -> usize {
        self.counts.iter().map(|row| row[label_index(gold)]).sum()
    }

    /// Number of predictions of a class (row sum).
    pub fn predicted(&self, pred: Prediction) -> usize {
        self.counts[pred_index(pred)].iter().sum()
    }

    /// Diagonal gold-match count across the three gold classes.
    pub fn matches(&self) -> usize {
        (0..3).map(|i| self.counts[i][i]).sum()
    }
}

impl Serialize for ConfusionMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut outer = s.serialize_map(Some(PRED_ROWS.len()))?;
        for p in PRED_ROWS {
            let mut row = BTreeMap::new();
            for g in Label::ALL {
                row.insert(g.as_str(), self.count(p, g));
            }
            outer.serialize_entry(p.as_str(), &row)?;
        }
        outer.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
}

/// Hit/miss counts for one syllogism class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HitMiss {
    pub hit: usize,
    pub miss: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Averaging {
    Macro,
    Micro,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub per_class: BTreeMap<Label, ClassMetrics>,
    pub confusion: ConfusionMatrix,
    pub warnings: Vec<String>,
}

/// Scores predictions with macro averaging over the three gold classes.
pub fn compute_metrics(
    gold: &[Label],
    pred: &[Prediction],
) -> Result<MetricsReport, MetricsError> {
    compute_metrics_with(gold, pred, Averaging::Macro)
}

pub fn compute_metrics_with(
    gold: &[Label],
    pred: &[Prediction],
    averaging: Averaging,
) -> Result<MetricsReport, MetricsError> {
    let confusion = ConfusionMatrix::from_pairs(gold, pred)?;
    let total = confusion.total();
    let accuracy = confusion.matches() as f64 / total as f64;

    let mut warnings = Vec::new();
    let mut per_class = BTreeMap::new();
    for label in Label::ALL {
        let tp = confusion.count(Prediction::Label(label), label);
        let predicted = confusion.predicted(Prediction::Label(label));
        let support = confusion.support(label);
        let precision = ratio_or_zero(tp, predicted, &mut warnings, label, "precision");
        let recall = ratio_or_zero(tp, support, &mut warnings, label, "recall");
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        per_class.insert(label, ClassMetrics { precision, recall, f1, support });
    }

    let (precision, recall, f1) = match averaging {
        Averaging::Macro => {
            let n = Label::ALL.len() as f64;
            (
                per_class.values().map(|c| c.precision).sum::<f64>() / n,
                per_class.values().map(|c| c.recall).sum::<f64>() / n,
                per_class.values().map(|c| c.f1).sum::<f64>() / n,
            )
        }
        Averaging::Micro => {
            let tp = confusion.matches();
            let predicted: usize =
                Label::ALL.iter().map(|&l| confusion.predicted(Prediction::Label(l))).sum();
            let p = if predicted == 0 { 0.0 } else { tp as f64 / predicted as f64 };
            let r = tp as f64 / total as f64;
            let f = if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) };
            (p, r, f)
        }
    };

    Ok(MetricsReport { accuracy, precision, recall, f1, per_class, confusion, warnings })
}

fn ratio_or_zero(
    num: usize,
    den: usize,
    warnings: &mut Vec<String>,
    label: Label,
    what: &str,
) -> f64 {
    if den == 0 {
        warnings.push(format!("{label} {what}: zero denominator, reported as 0"));
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Per-syllogism-class hit/miss counts over aligned records. All four classes
/// appear in the result; hits plus misses across classes equal the total.
pub fn sef_breakdown(
    gold: &[Label],
    pred: &[Prediction],
    classes: &[SyllogismClass],
) -> Result<BTreeMap<SyllogismClass, HitMiss>, MetricsError> {
    if gold.len() != pred.len() {
        return Err(MetricsError::LengthMismatch { gold: gold.len(), pred: pred.len() });
    }
    if gold.len() != classes.len() {
        return Err(MetricsError::LengthMismatch { gold: gold.len(), pred: classes.len() });
    }
    let mut out: BTreeMap<SyllogismClass, HitMiss> = SyllogismClass::ALL
        .iter()
        .map(|&c| (c, HitMiss { hit: 0, miss: 0 }))
        .collect();
    for ((&g, &p), &c) in gold.iter().zip(pred).zip(classes) {
        let entry = out.get_mut(&c).unwrap();
        if p == Prediction::Label(g) {
            entry.hit += 1;
        } else {
            entry.miss += 1;
        }
    }
    Ok(out)
}
