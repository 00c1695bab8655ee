//! Data ingestion, the persistent run store, and report emission.

mod csv_data;
mod report;
mod store;

pub use csv_data::{load_run, write_parts_csv, RunMeta};
pub use report::{assemble, CoverageRow, EvaluationRow, Report, ReportFormat, RuleSetSection, TrendRow};
pub use store::{EvaluationRecord, RunStore};
