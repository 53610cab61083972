use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{ClassifyError, Dataset, TrainedModel};
use crate::changes::ImpactLabel;

/// Counts with AffectsAlignment as the positive class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub tn: usize,
}

impl Confusion {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }

    pub fn add(&mut self, truth: ImpactLabel, predicted: ImpactLabel) {
        match (truth.is_positive(), predicted.is_positive()) {
            (true, true) => self.tp += 1,
            (false, true) => self.fp += 1,
            (true, false) => self.fn_ += 1,
            (false, false) => self.tn += 1,
        }
    }

    /// The same counts seen from the negative class.
    pub fn flipped(&self) -> Confusion {
        Confusion {
            tp: self.tn,
            fp: self.fn_,
            fn_: self.fp,
            tn: self.tp,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
    /// Set when some ratio had a zero denominator and was reported as 0.
    pub degenerate: bool,
}

impl ClassMetrics {
    pub fn from_confusion(c: &Confusion) -> Self {
        let mut degenerate = false;
        let mut ratio = |num: usize, den: usize| {
            if den == 0 {
                degenerate = true;
                0.0
            } else {
                num as f64 / den as f64
            }
        };
        let precision = ratio(c.tp, c.tp + c.fp);
        let recall = ratio(c.tp, c.tp + c.fn_);
        // Same value as the harmonic mean of precision and recall, without
        // the rounding of the intermediate ratios.
        let f1 = if c.tp == 0 {
            degenerate = true;
            0.0
        } else {
            (2 * c.tp) as f64 / (2 * c.tp + c.fp + c.fn_) as f64
        };
        ClassMetrics {
            precision,
            recall,
            f1,
            support: c.tp + c.fn_,
            degenerate,
        }
    }
}

/// Harmonic mean of precision and recall; 0 when both are 0.
pub fn f1_score(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub confusion: Confusion,
    pub affects: ClassMetrics,
    pub no_effect: ClassMetrics,
    pub accuracy: f64,
    pub macro_f1: f64,
}

impl Metrics {
    pub fn from_confusion(confusion: Confusion) -> Self {
        let affects = ClassMetrics::from_confusion(&confusion);
        let no_effect = ClassMetrics::from_confusion(&confusion.flipped());
        let n = confusion.total();
        let accuracy = if n == 0 {
            0.0
        } else {
            (confusion.tp + confusion.tn) as f64 / n as f64
        };
        Metrics {
            confusion,
            affects,
            no_effect,
            accuracy,
            macro_f1: (affects.f1 + no_effect.f1) / 2.0,
        }
    }

    pub fn class(&self, label: ImpactLabel) -> &ClassMetrics {
        match label {
            ImpactLabel::AffectsAlignment => &self.affects,
            ImpactLabel::NoEffect => &self.no_effect,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.affects.degenerate || self.no_effect.degenerate
    }
}

pub fn metrics_from_predictions(truth: &[ImpactLabel], predicted: &[ImpactLabel]) -> Metrics {
    assert_eq!(truth.len(), predicted.len(), "one prediction per row");
    let mut c = Confusion::default();
    for (&t, &p) in truth.iter().zip(predicted) {
        c.add(t, p);
    }
    Metrics::from_confusion(c)
}

pub fn evaluate(model: &TrainedModel, test: &Dataset) -> Result<Metrics, ClassifyError> {
    if test.is_empty() {
        return Err(ClassifyError::EmptyDataset);
    }
    let predicted = model.predict_all(test)?;
    let truth: Vec<ImpactLabel> = test.rows.iter().map(|r| r.label).collect();
    Ok(metrics_from_predictions(&truth, &predicted))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub classifier: String,
    pub metrics: Metrics,
}

const COLUMNS: [&str; 11] = [
    "classifier",
    "accuracy",
    "f1_affects",
    "precision_affects",
    "recall_affects",
    "support_affects",
    "f1_noeffect",
    "precision_noeffect",
    "recall_noeffect",
    "support_noeffect",
    "macro_f1",
];

fn cells(row: &ReportRow) -> Vec<String> {
    let m = &row.metrics;
    let f = |x: f64| format!("{x:.4}");
    vec![
        row.classifier.clone(),
        f(m.accuracy),
        f(m.affects.f1),
        f(m.affects.precision),
        f(m.affects.recall),
        m.affects.support.to_string(),
        f(m.no_effect.f1),
        f(m.no_effect.precision),
        f(m.no_effect.recall),
        m.no_effect.support.to_string(),
        f(m.macro_f1),
    ]
}

pub fn write_report_csv<W: Write>(rows: &[ReportRow], out: W) -> Result<(), ClassifyError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for r in rows {
        w.write_record(cells(r))?;
    }
    w.flush()?;
    Ok(())
}

/// Fixed-width table, classifier names left-aligned, numbers right-aligned.
pub fn write_report_table<W: Write>(rows: &[ReportRow], mut out: W) -> std::io::Result<()> {
    let body: Vec<Vec<String>> = rows.iter().map(cells).collect();
    let widths: Vec<usize> = (0..COLUMNS.len())
        .map(|c| {
            body.iter()
                .map(|r| r[c].len())
                .chain([COLUMNS[c].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |cells: &[&str]| -> String {
        cells
            .iter()
            .enumerate()
            .map(|(c, s)| {
                if c == 0 {
                    format!("{s:<w$}", w = widths[c])
                } else {
                    format!("{s:>w$}", w = widths[c])
                }
            })
            .collect::<Vec<_>>()
            .join("  ")
    };
    writeln!(out, "{}", line(&COLUMNS))?;
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    writeln!(out, "{}", rule.join("  "))?;
    for r in &body {
        let refs: Vec<&str> = r.iter().map(String::as_str).collect();
        writeln!(out, "{}", line(&refs))?;
    }
    Ok(())
}
