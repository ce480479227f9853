//! Labeled unit-norm examples and the training sets built from them.
//!
//! A [`TrainingSet`] is validated once at construction: every feature vector
//! must have unit Euclidean norm (to [`UNIT_NORM_TOLERANCE`]), every label must
//! be `+1` or `-1`, and all examples must share one dimension. Offending
//! examples are rejected rather than renormalized.

use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::norm;

/// Absolute tolerance on `‖φ‖₂ − 1` accepted at construction.
pub const UNIT_NORM_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabeledExample {
    #[serde(rename = "phi")]
    features: Vec<f64>,
    #[serde(rename = "y")]
    label: i8,
}

impl LabeledExample {
    pub fn new(features: Vec<f64>, label: i8) -> Result<Self> {
        if label != 1 && label != -1 {
            return invalid(format!("label must be +1 or -1, got {label}"));
        }
        if features.is_empty() {
            return invalid("feature vector must be nonempty");
        }
        if features.iter().any(|x| !x.is_finite()) {
            return invalid("feature vector contains a non-finite value");
        }
        let n = norm(&features);
        if (n - 1.0).abs() > UNIT_NORM_TOLERANCE {
            return invalid(format!("feature vector must have unit norm, got {n}"));
        }
        Ok(Self { features, label })
    }

    pub fn features(&self) -> &[f64] {
        &self.features
    }

    pub fn label(&self) -> i8 {
        self.label
    }

    /// The label as a float, for use in inner-product arithmetic.
    pub fn sign(&self) -> f64 {
        f64::from(self.label)
    }

    pub fn dim(&self) -> usize {
        self.features.len()
    }
}

/// Ordered, nonempty collection of examples sharing one dimension.
///
/// Indices are zero-based and stable; the classical retrieval oracle maps an
/// index to the example stored at that position.
#[derive(Clone, Debug, PartialEq)]
pub struct TrainingSet {
    examples: Vec<LabeledExample>,
    dim: usize,
}

#[derive(Serialize, Deserialize)]
struct TrainingSetJson {
    dim: usize,
    examples: Vec<LabeledExample>,
}

impl TrainingSet {
    pub fn new(examples: Vec<LabeledExample>) -> Result<Self> {
        let Some(first) = examples.first() else {
            return invalid("training set must contain at least one example");
        };
        let dim = first.dim();
        if let Some((i, ex)) = examples.iter().enumerate().find(|(_, e)| e.dim() != dim) {
            return invalid(format!(
                "example {i} has dimension {}, expected {dim}",
                ex.dim()
            ));
        }
        Ok(Self { examples, dim })
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    /// Always false; kept for API symmetry with collections.
    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn examples(&self) -> &[LabeledExample] {
        &self.examples
    }

    pub fn get(&self, index: usize) -> Option<&LabeledExample> {
        self.examples.get(index)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, LabeledExample> {
        self.examples.iter()
    }

    /// Writes the set as CSV with header `f_1,…,f_D,label`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        let mut header: Vec<String> = (1..=self.dim).map(|i| format!("f_{i}")).collect();
        header.push("label".to_string());
        wtr.write_record(&header)?;
        for ex in &self.examples {
            let mut row: Vec<String> = ex.features.iter().map(|x| format!("{x:?}")).collect();
            row.push(ex.label.to_string());
            wtr.write_record(&row)?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        let headers = rdr.headers()?.clone();
        let width = headers.len();
        if width < 2 || &headers[width - 1] != "label" {
            return invalid("csv header must be f_1,…,f_D,label");
        }
        for (i, h) in headers.iter().take(width - 1).enumerate() {
            if h != format!("f_{}", i + 1) {
                return invalid(format!("unexpected csv column {h:?} at position {}", i + 1));
            }
        }
        let mut examples = Vec::new();
        for (row, record) in rdr.records().enumerate() {
            let record = record?;
            let parse = |s: &str| -> Result<f64> {
                s.trim().parse::<f64>().map_err(|e| {
                    Error::InvalidArgument(format!("row {}: cannot parse {s:?}: {e}", row + 1))
                })
            };
            let features = record
                .iter()
                .take(width - 1)
                .map(parse)
                .collect::<Result<Vec<_>>>()?;
            let label = record[width - 1].trim().parse::<i8>().map_err(|e| {
                Error::InvalidArgument(format!("row {}: bad label: {e}", row + 1))
            })?;
            examples.push(LabeledExample::new(features, label)?);
        }
        Self::new(examples)
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = TrainingSetJson {
            dim: self.dim,
            examples: self.examples.clone(),
        };
        Ok(serde_json::to_string(&doc)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: TrainingSetJson = serde_json::from_str(text)?;
        // Re-run validation; serde bypasses the constructors.
        let examples = doc
            .examples
            .into_iter()
            .map(|e| LabeledExample::new(e.features, e.label))
            .collect::<Result<Vec<_>>>()?;
        let set = Self::new(examples)?;
        if set.dim != doc.dim {
            return invalid(format!(
                "declared dim {} does not match examples ({})",
                doc.dim, set.dim
            ));
        }
        Ok(set)
    }

    /// Loads a set from disk, choosing JSON for `.json` paths and CSV otherwise.
    pub fn load(path: &Path) -> Result<Self> {
        let mut file = BufReader::new(File::open(path)?);
        if path.extension().is_some_and(|e| e == "json") {
            let mut text = String::new();
            file.read_to_string(&mut text)?;
            Self::from_json(&text)
        } else {
            Self::read_csv(file)
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut file = File::create(path)?;
        if path.extension().is_some_and(|e| e == "json") {
            file.write_all(self.to_json()?.as_bytes())?;
            Ok(())
        } else {
            self.write_csv(file)
        }
    }
}

impl<'a> IntoIterator for &'a TrainingSet {
    type Item = &'a LabeledExample;
    type IntoIter = std::slice::Iter<'a, LabeledExample>;

    fn into_iter(self) -> Self::IntoIter {
        self.examples.iter()
    }
}
