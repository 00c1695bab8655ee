//! Loading runs from the CSV/JSON interchange files and writing parts
//! tables.
//!
//! `parts.csv` columns: `part_id,name,kind,loc,mean_method_length,mccabe,
//! waste_per_line` (the last may be blank). Any additional numeric column
//! loads as a custom metric under its header name. `defects.csv` columns:
//! `defect_id,part_id,phase,severity,finding_kind,description`; blank
//! severity loads as `unclassified` and blank finding kind as `defect`.
//! Files are UTF-8, comma-separated, with a mandatory header row and `.` as
//! the decimal separator.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{DefectRecord, FindingKind, Part, PartKind, Phase, QaRun, Severity};

const PART_COLUMNS: [&str; 7] =
    ["part_id", "name", "kind", "loc", "mean_method_length", "mccabe", "waste_per_line"];
const DEFECT_COLUMNS: [&str; 6] =
    ["defect_id", "part_id", "phase", "severity", "finding_kind", "description"];

/// The run-level fields carried by `run.json`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunMeta {
    pub id: String,
    pub timestamp: DateTime<Utc>,
    #[serde(default)]
    pub context_notes: String,
    #[serde(default)]
    pub inspection_coverage: BTreeMap<String, f64>,
    #[serde(default)]
    pub reading_rate: Option<f64>,
}

struct Table {
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
}

fn read_table(path: &Path, required: &[&str]) -> Result<Table> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => {
                Error::io(path, std::io::Error::other(e.to_string()))
            }
            _ => Error::Parse { path: path.to_path_buf(), message: e.to_string() },
        })?;
    let headers: Vec<String> =
        reader
            .headers()
            .map_err(|e| Error::Parse { path: path.to_path_buf(), message: e.to_string() })?
            .iter()
            .map(str::to_string)
            .collect();
    for column in required {
        if !headers.iter().any(|h| h == column) {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                message: format!("missing required column {column}"),
            });
        }
    }
    let mut rows = Vec::new();
    for (index, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Load {
            path: path.to_path_buf(),
            row: index + 1,
            column: String::new(),
            message: e.to_string(),
        })?;
        rows.push(record.iter().map(str::to_string).collect());
    }
    Ok(Table { headers, rows })
}

fn cell<'a>(table: &'a Table, row: &'a [String], column: &str) -> &'a str {
    table
        .headers
        .iter()
        .position(|h| h == column)
        .and_then(|i| row.get(i))
        .map(String::as_str)
        .unwrap_or("")
}

fn load_error(path: &Path, row: usize, column: &str, message: impl Into<String>) -> Error {
    Error::Load {
        path: path.to_path_buf(),
        row,
        column: column.to_string(),
        message: message.into(),
    }
}

fn parse_u64(path: &Path, row: usize, column: &str, text: &str) -> Result<u64> {
    text.parse().map_err(|_| load_error(path, row, column, format!("expected a non-negative integer, got {text:?}")))
}

fn parse_f64(path: &Path, row: usize, column: &str, text: &str) -> Result<f64> {
    text.parse().map_err(|_| load_error(path, row, column, format!("expected a number, got {text:?}")))
}

fn load_parts(path: &Path) -> Result<Vec<Part>> {
    let table = read_table(path, &PART_COLUMNS)?;
    let custom_columns: Vec<&String> =
        table.headers.iter().filter(|h| !PART_COLUMNS.contains(&h.as_str())).collect();
    let mut parts = Vec::new();
    for (index, row) in table.rows.iter().enumerate() {
        let row_no = index + 1;
        let id = cell(&table, row, "part_id");
        if id.is_empty() {
            return Err(load_error(path, row_no, "part_id", "must not be empty"));
        }
        let kind = match cell(&table, row, "kind") {
            "class" => PartKind::Class,
            "module" => PartKind::Module,
            other => {
                return Err(load_error(path, row_no, "kind", format!("unknown kind {other:?} (expected class or module)")));
            }
        };
        let waste_text = cell(&table, row, "waste_per_line");
        let waste_per_line = if waste_text.is_empty() {
            None
        } else {
            Some(parse_f64(path, row_no, "waste_per_line", waste_text)?)
        };
        let mut custom_metrics = BTreeMap::new();
        for column in &custom_columns {
            let text = cell(&table, row, column);
            if !text.is_empty() {
                custom_metrics.insert((*column).clone(), parse_f64(path, row_no, column, text)?);
            }
        }
        parts.push(Part {
            id: id.to_string(),
            name: cell(&table, row, "name").to_string(),
            kind,
            loc: parse_u64(path, row_no, "loc", cell(&table, row, "loc"))?,
            mean_method_length: parse_f64(path, row_no, "mean_method_length", cell(&table, row, "mean_method_length"))?,
            mccabe: parse_u64(path, row_no, "mccabe", cell(&table, row, "mccabe"))?,
            waste_per_line,
            custom_metrics,
        });
    }
    Ok(parts)
}

fn load_defects(path: &Path) -> Result<Vec<DefectRecord>> {
    let table = read_table(path, &DEFECT_COLUMNS)?;
    let mut defects = Vec::new();
    for (index, row) in table.rows.iter().enumerate() {
        let row_no = index + 1;
        let phase = match cell(&table, row, "phase") {
            "inspection" => Phase::Inspection,
            "test" => Phase::Test,
            other => {
                return Err(load_error(path, row_no, "phase", format!("unknown phase {other:?} (expected inspection or test)")));
            }
        };
        let severity = match cell(&table, row, "severity") {
            "high" => Severity::High,
            "medium" => Severity::Medium,
            "low" => Severity::Low,
            "unclassified" | "" => Severity::Unclassified,
            other => {
                return Err(load_error(path, row_no, "severity", format!("unknown severity {other:?}")));
            }
        };
        let finding_kind = match cell(&table, row, "finding_kind") {
            "defect" | "" => FindingKind::Defect,
            "comment" => FindingKind::Comment,
            other => {
                return Err(load_error(path, row_no, "finding_kind", format!("unknown finding kind {other:?}")));
            }
        };
        let description = cell(&table, row, "description");
        defects.push(DefectRecord {
            id: cell(&table, row, "defect_id").to_string(),
            part_id: cell(&table, row, "part_id").to_string(),
            phase,
            severity,
            finding_kind,
            description: if description.is_empty() { None } else { Some(description.to_string()) },
        });
    }
    Ok(defects)
}

/// Loads and validates a run from its three interchange files. Any invariant
/// violation (dangling part references, bad coverage values, duplicate ids)
/// fails the load.
pub fn load_run(parts_csv: &Path, defects_csv: &Path, run_json: &Path) -> Result<QaRun> {
    let meta_text = fs::read_to_string(run_json).map_err(|e| Error::io(run_json, e))?;
    let meta: RunMeta = serde_json::from_str(&meta_text)
        .map_err(|e| Error::Parse { path: run_json.to_path_buf(), message: e.to_string() })?;
    let run = QaRun {
        id: meta.id,
        timestamp: meta.timestamp,
        context_notes: meta.context_notes,
        parts: load_parts(parts_csv)?,
        defects: load_defects(defects_csv)?,
        inspection_coverage: meta.inspection_coverage,
        reading_rate: meta.reading_rate,
    };
    let violations = run.validate();
    if !violations.is_empty() {
        return Err(Error::validation(violations));
    }
    Ok(run)
}

/// Writes a parts table in the interchange schema.
pub fn write_parts_csv(path: &Path, parts: &[Part]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| {
        Error::io(path, std::io::Error::other(e.to_string()))
    })?;
    writer.write_record(PART_COLUMNS).map_err(|e| Error::io(path, std::io::Error::other(e.to_string())))?;
    for part in parts {
        let kind = match part.kind {
            PartKind::Class => "class",
            PartKind::Module => "module",
        };
        writer
            .write_record([
                part.id.as_str(),
                part.name.as_str(),
                kind,
                &part.loc.to_string(),
                &part.mean_method_length.to_string(),
                &part.mccabe.to_string(),
                &part.waste_per_line.map(|w| w.to_string()).unwrap_or_default(),
            ])
            .map_err(|e| Error::io(path, std::io::Error::other(e.to_string())))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}
