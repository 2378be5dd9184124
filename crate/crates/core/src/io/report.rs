use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::manifest::RunManifest;
use crate::error::{Error, Result};
use crate::simulation::{ReportRow, SimulationReport};

pub const REPORT_SCHEMA: &str = "rr-ldp/1";

/// CSV header, in column order.
pub const CSV_COLUMNS: [&str; 9] = [
    "mechanism",
    "epsilon",
    "var_theoretical",
    "var_empirical",
    "bias",
    "R",
    "N",
    "pi_A",
    "p2",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    #[default]
    Csv,
    Json,
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
        })
    }
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::InvalidParameter(format!("unknown format {other:?}"))),
        }
    }
}

/// JSON envelope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema: String,
    pub manifest: Option<RunManifest>,
    pub rows: Vec<ReportRow>,
}

/// Serializes a report. CSV ignores the manifest; JSON embeds it.
/// An empty report gives a header-only CSV or an empty `rows` array.
pub fn emit_report(
    report: &SimulationReport,
    format: ReportFormat,
    manifest: Option<&RunManifest>,
) -> Result<Vec<u8>> {
    match format {
        ReportFormat::Csv => {
            let mut w = csv::WriterBuilder::new()
                .has_headers(false)
                .from_writer(Vec::new());
            w.write_record(CSV_COLUMNS)?;
            for row in &report.rows {
                w.serialize(row)?;
            }
            w.into_inner().map_err(|e| Error::Io(e.into_error()))
        }
        ReportFormat::Json => {
            let doc = ReportDocument {
                schema: REPORT_SCHEMA.into(),
                manifest: manifest.cloned(),
                rows: report.rows.clone(),
            };
            let mut out = serde_json::to_vec_pretty(&doc)?;
            out.push(b'\n');
            Ok(out)
        }
    }
}

pub fn read_csv_report(bytes: &[u8]) -> Result<SimulationReport> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(bytes);
    let headers = r.headers()?;
    if headers.iter().ne(CSV_COLUMNS) {
        return Err(Error::InvalidParameter(format!(
            "unexpected report header {:?}",
            headers.iter().collect::<Vec<_>>()
        )));
    }
    let rows = r
        .deserialize()
        .collect::<std::result::Result<Vec<ReportRow>, _>>()?;
    Ok(SimulationReport { rows })
}

pub fn read_json_report(bytes: &[u8]) -> Result<ReportDocument> {
    let doc: ReportDocument = serde_json::from_slice(bytes)?;
    if doc.schema != REPORT_SCHEMA {
        return Err(Error::InvalidParameter(format!(
            "unsupported report schema {:?}",
            doc.schema
        )));
    }
    Ok(doc)
}
