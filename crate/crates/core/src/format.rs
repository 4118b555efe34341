//! CSV and JSON table files.
//!
//! CSV: one table row per line, comma separated. An optional header line
//! carries column labels and an optional first column carries row labels;
//! both are detected by non-numeric cells.
//!
//! JSON: `{"counts": [[...]]}` or `{"probs": [[...]]}`, with optional
//! `row_labels`, `col_labels`, `values_x`, `values_y` and `sample_size`.

use serde::{Deserialize, Serialize};

use crate::classical::NumericSupport;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::table::JointTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Counts,
    Probs,
}

impl std::str::FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "counts" => Ok(Kind::Counts),
            "probs" => Ok(Kind::Probs),
            other => Err(Error::InvalidArgument(format!(
                "unknown table kind {other:?} (expected counts or probs)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    /// Guesses the format from a file extension.
    pub fn from_path(path: &std::path::Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            _ => None,
        }
    }
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::InvalidArgument(format!(
                "unknown input format {other:?} (expected csv or json)"
            ))),
        }
    }
}

/// A parsed table file, before conversion to a [`JointTable`].
#[derive(Debug, Clone, PartialEq)]
pub struct TableFile {
    pub kind: Kind,
    pub matrix: Vec<Vec<f64>>,
    pub row_labels: Option<Vec<String>>,
    pub col_labels: Option<Vec<String>>,
    pub values_x: Option<Vec<f64>>,
    pub values_y: Option<Vec<f64>>,
    pub sample_size: Option<f64>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonTable {
    #[serde(skip_serializing_if = "Option::is_none")]
    counts: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    probs: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    row_labels: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    col_labels: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    values_x: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    values_y: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sample_size: Option<f64>,
}

fn numeric(cell: &str) -> Option<f64> {
    cell.trim().parse::<f64>().ok()
}

impl TableFile {
    pub fn parse(text: &str, format: Format, kind: Option<Kind>) -> Result<Self> {
        let mut file = match format {
            Format::Csv => Self::parse_csv(text)?,
            Format::Json => Self::parse_json(text)?,
        };
        if let Some(k) = kind {
            if format == Format::Json && k != file.kind {
                return Err(Error::Parse(format!(
                    "--kind {k:?} conflicts with the JSON key present"
                )));
            }
            file.kind = k;
        }
        Ok(file)
    }

    /// CSV tables default to [`Kind::Probs`] when the cells sum to one
    /// within 1e-9 and to [`Kind::Counts`] otherwise.
    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let mut records: Vec<Vec<String>> = Vec::new();
        for rec in reader.records() {
            let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
            if rec.iter().all(str::is_empty) {
                continue;
            }
            records.push(rec.iter().map(str::to_owned).collect());
        }
        if records.is_empty() {
            return Err(Error::Parse("empty CSV input".into()));
        }

        let header = if records[0].iter().skip(1).any(|c| numeric(c).is_none())
            || records[0].iter().all(|c| numeric(c).is_none())
        {
            Some(records.remove(0))
        } else {
            None
        };
        if records.is_empty() {
            return Err(Error::Parse("CSV has a header but no data rows".into()));
        }

        let labelled = records.iter().all(|r| r.first().is_some_and(|c| numeric(c).is_none()));
        let mut row_labels = Vec::new();
        let mut matrix = Vec::with_capacity(records.len());
        for (i, rec) in records.iter().enumerate() {
            let cells = if labelled {
                row_labels.push(rec[0].clone());
                &rec[1..]
            } else {
                &rec[..]
            };
            let row = cells
                .iter()
                .enumerate()
                .map(|(j, c)| {
                    numeric(c).ok_or_else(|| {
                        Error::Parse(format!("row {}, column {}: {c:?} is not a number", i + 1, j + 1))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            matrix.push(row);
        }

        let width = matrix[0].len();
        let col_labels = header.map(|mut h| {
            if labelled && h.len() == width + 1 {
                h.remove(0);
            }
            h
        });
        if let Some(h) = &col_labels {
            if h.len() != width {
                return Err(Error::Parse(format!(
                    "header has {} labels but rows have {width} values",
                    h.len()
                )));
            }
        }

        let total: f64 = matrix.iter().flatten().sum();
        let kind = if (total - 1.0).abs() <= 1e-9 {
            Kind::Probs
        } else {
            Kind::Counts
        };
        Ok(Self {
            kind,
            matrix,
            row_labels: labelled.then_some(row_labels),
            col_labels,
            values_x: None,
            values_y: None,
            sample_size: None,
        })
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let raw: JsonTable = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let (kind, matrix) = match (raw.counts, raw.probs) {
            (Some(c), None) => (Kind::Counts, c),
            (None, Some(p)) => (Kind::Probs, p),
            (Some(_), Some(_)) => {
                return Err(Error::Parse("give either \"counts\" or \"probs\", not both".into()))
            }
            (None, None) => return Err(Error::Parse("missing \"counts\" or \"probs\"".into())),
        };
        Ok(Self {
            kind,
            matrix,
            row_labels: raw.row_labels,
            col_labels: raw.col_labels,
            values_x: raw.values_x,
            values_y: raw.values_y,
            sample_size: raw.sample_size,
        })
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let mut raw = JsonTable {
            row_labels: self.row_labels.clone(),
            col_labels: self.col_labels.clone(),
            values_x: self.values_x.clone(),
            values_y: self.values_y.clone(),
            sample_size: self.sample_size,
            ..Default::default()
        };
        match self.kind {
            Kind::Counts => raw.counts = Some(self.matrix.clone()),
            Kind::Probs => raw.probs = Some(self.matrix.clone()),
        }
        serde_json::to_value(raw).expect("plain data serializes")
    }

    pub fn table<T: Scalar>(&self) -> Result<JointTable<T>> {
        let m: Vec<Vec<T>> = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|&v| T::from_f64_lossy(v)).collect())
            .collect();
        let table = match self.kind {
            Kind::Counts => JointTable::from_counts(&m)?,
            Kind::Probs => JointTable::from_probs(&m)?,
        };
        table.with_labels(self.row_labels.clone(), self.col_labels.clone())
    }

    /// Sample size implied by the file: an explicit `sample_size`, or the
    /// count total for count tables.
    pub fn implied_sample_size(&self) -> Option<f64> {
        self.sample_size.or_else(|| match self.kind {
            Kind::Counts => Some(self.matrix.iter().flatten().sum()),
            Kind::Probs => None,
        })
    }

    pub fn support<T: Scalar>(&self) -> Option<Result<NumericSupport<T>>> {
        match (&self.values_x, &self.values_y) {
            (Some(x), Some(y)) => {
                let conv = |v: &[f64]| v.iter().map(|&a| T::from_f64_lossy(a)).collect();
                Some(NumericSupport::new(conv(x), conv(y)))
            }
            (None, None) => None,
            _ => Some(Err(Error::Parse(
                "values_x and values_y must be given together".into(),
            ))),
        }
    }
}
