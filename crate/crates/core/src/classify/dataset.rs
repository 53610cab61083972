use std::io::{Read, Write};

use super::ClassifyError;
use crate::changes::{ImpactLabel, LabeledChange};
use crate::embedding::TokenVectors;

/// One (embedding, label) training or test example.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub features: Vec<f64>,
    pub label: ImpactLabel,
    pub resource: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Dataset {
    pub rows: Vec<Row>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn dimensions(&self) -> Option<usize> {
        self.rows.first().map(|r| r.features.len())
    }

    /// Checks that all rows share the first row's width and returns it.
    pub fn validate_dimensions(&self) -> Result<usize, ClassifyError> {
        let d = self.dimensions().unwrap_or(0);
        match self.rows.iter().find(|r| r.features.len() != d) {
            Some(r) => Err(ClassifyError::DimensionMismatch {
                expected: d,
                got: r.features.len(),
            }),
            None => Ok(d),
        }
    }

    pub fn positives(&self) -> usize {
        self.rows.iter().filter(|r| r.label.is_positive()).count()
    }

    /// Fraction of rows labeled AffectsAlignment.
    pub fn positive_rate(&self) -> f64 {
        if self.rows.is_empty() {
            0.0
        } else {
            self.positives() as f64 / self.rows.len() as f64
        }
    }

    /// Accuracy of always predicting the more frequent class.
    pub fn majority_baseline(&self) -> f64 {
        let p = self.positive_rate();
        p.max(1.0 - p)
    }
}

/// One row per resource found in the embedding; the rest are counted as skipped.
pub fn featurize<'a, V: TokenVectors + ?Sized>(
    items: impl IntoIterator<Item = (&'a str, ImpactLabel)>,
    vectors: &V,
) -> (Dataset, usize) {
    let mut rows = Vec::new();
    let mut skipped = 0;
    for (resource, label) in items {
        match vectors.lookup(resource) {
            Some(v) => rows.push(Row {
                features: v.to_vec(),
                label,
                resource: resource.to_string(),
            }),
            None => skipped += 1,
        }
    }
    (Dataset { rows }, skipped)
}

pub fn featurize_changes<V: TokenVectors + ?Sized>(
    labeled: &[LabeledChange],
    vectors: &V,
) -> (Dataset, usize) {
    featurize(
        labeled
            .iter()
            .map(|l| (l.change.resource.as_str(), l.label)),
        vectors,
    )
}

/// CSV with columns `resource,label,f0,…,f{d-1}`.
pub fn write_dataset_csv<W: Write>(data: &Dataset, out: W) -> Result<(), ClassifyError> {
    let d = data.validate_dimensions()?;
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["resource".to_string(), "label".to_string()];
    header.extend((0..d).map(|i| format!("f{i}")));
    w.write_record(&header)?;
    for r in &data.rows {
        let mut rec = vec![r.resource.clone(), r.label.to_string()];
        rec.extend(r.features.iter().map(|x| format!("{x:.16e}")));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_dataset_csv<R: Read>(input: R) -> Result<Dataset, ClassifyError> {
    let mut r = csv::Reader::from_reader(input);
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let bad = |reason: String| ClassifyError::Malformed { line, reason };
        if rec.len() < 2 {
            return Err(bad("expected resource,label,features…".into()));
        }
        let label = rec[1].parse().map_err(bad)?;
        let features = rec
            .iter()
            .skip(2)
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|e| bad(format!("bad feature {s:?}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(Row {
            features,
            label,
            resource: rec[0].to_string(),
        });
    }
    let data = Dataset { rows };
    data.validate_dimensions()?;
    Ok(data)
}
