use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mechanisms::Population;

/// Column selector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ColumnRef {
    Name(String),
    /// Zero-based position.
    Index(usize),
}

/// Which codes in the target column mark the sensitive group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetCoding {
    pub column: ColumnRef,
    /// Codes mapped to `x = 1`.
    pub sensitive: Vec<String>,
    /// Codes mapped to `x = 0`.
    pub non_sensitive: Vec<String>,
}

impl DatasetCoding {
    /// IPUMS `HCOVANY`: 1 = no coverage (sensitive), 2 = covered.
    pub fn hcovany() -> Self {
        Self {
            column: ColumnRef::Name("HCOVANY".into()),
            sensitive: vec!["1".into()],
            non_sensitive: vec!["2".into()],
        }
    }

    pub fn with_column(mut self, column: ColumnRef) -> Self {
        self.column = column;
        self
    }

    fn classify(&self, code: &str) -> Option<bool> {
        if self.sensitive.iter().any(|c| c == code) {
            Some(true)
        } else if self.non_sensitive.iter().any(|c| c == code) {
            Some(false)
        } else {
            None
        }
    }
}

impl Default for DatasetCoding {
    fn default() -> Self {
        Self::hcovany()
    }
}

/// Reads a headed CSV file into a population, one respondent per data row in
/// file order.
pub fn ingest_csv(path: impl AsRef<Path>, coding: &DatasetCoding) -> Result<Population> {
    let file = std::fs::File::open(path)?;
    ingest_reader(std::io::BufReader::new(file), coding)
}

pub fn ingest_reader(reader: impl Read, coding: &DatasetCoding) -> Result<Population> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = csv.headers()?.clone();
    let column = match &coding.column {
        ColumnRef::Name(name) => headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingColumn(name.clone()))?,
        ColumnRef::Index(i) if *i < headers.len() => *i,
        ColumnRef::Index(i) => return Err(Error::MissingColumn(format!("#{i}"))),
    };
    let mut bits = Vec::new();
    let mut record = csv::StringRecord::new();
    let mut row = 0;
    while csv.read_record(&mut record)? {
        row += 1;
        let code = record.get(column).unwrap_or("");
        match coding.classify(code) {
            Some(x) => bits.push(x),
            None => {
                return Err(Error::UnknownCode {
                    row,
                    value: code.to_string(),
                })
            }
        }
    }
    if bits.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Population::new(bits)
}
