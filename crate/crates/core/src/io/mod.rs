//! Dataset ingestion, synthetic data, report serialization and run
//! manifests.

mod ingest;
mod manifest;
mod report;
mod synth;

pub use ingest::{ingest_csv, ingest_reader, ColumnRef, DatasetCoding};
pub use manifest::{RunManifest, MANIFEST_SCHEMA};
pub use report::{
    emit_report, read_csv_report, read_json_report, ReportDocument, ReportFormat, CSV_COLUMNS,
    REPORT_SCHEMA,
};
pub use synth::{write_synthetic_hcovany, SYNTH_COLUMN};
