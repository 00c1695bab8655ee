//! Report assembly and rendering: evaluation tables, trend tables, and
//! coverage-by-top-N tables as CSV, JSON, or a single Markdown document.
//!
//! Tables are plot-ready; rendering charts is left to external tools.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluate::TrendClass;
use crate::model::{Condition, EvaluationResult, QaRun};
use crate::monitor::{MonitorLevel, MonitorNote};
use crate::rules::{describe_rule, RuleSet};

/// Output format of a rendered report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
    Markdown,
}

impl ReportFormat {
    pub fn parse(text: &str) -> Option<ReportFormat> {
        match text {
            "csv" => Some(ReportFormat::Csv),
            "json" => Some(ReportFormat::Json),
            "md" | "markdown" => Some(ReportFormat::Markdown),
            _ => None,
        }
    }
}

/// One evaluation-table row: a rule's scores on the reported run plus its
/// current cross-run significance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationRow {
    pub rule_set: String,
    pub rule_id: String,
    pub description: String,
    pub category: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub defect_coverage: f64,
    pub selection_ratio: f64,
    pub significance: u32,
    pub selected: String,
    pub vacuous_precision: bool,
    pub diagnostics: String,
}

/// One cumulative-coverage cell of the top-N table. `increment` is the gain
/// over the next-smaller N of the same assumption, so the increments stack
/// to the cumulative value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageRow {
    pub rule_set: String,
    pub assumption_id: String,
    pub top_n: u32,
    pub coverage: f64,
    pub increment: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendRow {
    pub rule_set: String,
    pub rule_id: String,
    pub classification: String,
    pub significance: u32,
    pub category_sequence: String,
}

/// Everything the report emits for one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub run_id: String,
    pub timestamp: String,
    pub context_notes: String,
    pub monitor: Vec<MonitorNote>,
    pub evaluations: Vec<EvaluationRow>,
    pub coverage_top_n: Vec<CoverageRow>,
    pub trend: Vec<TrendRow>,
}

/// Per-rule-set inputs: the folded rule set (histories applied), the
/// results on the reported run, and the cross-run trend classes.
pub struct RuleSetSection {
    pub rule_set: RuleSet,
    pub results: Vec<EvaluationResult>,
    pub trend: Vec<TrendClass>,
}

/// Builds the report tables from per-rule-set sections. Sections are
/// processed in order; rows keep the evaluator's rule-id ordering.
pub fn assemble(run: &QaRun, sections: &[RuleSetSection], monitor: Vec<MonitorNote>) -> Report {
    let mut evaluations = Vec::new();
    let mut coverage_top_n = Vec::new();
    let mut trend = Vec::new();

    for section in sections {
        let set_id = &section.rule_set.id;
        for result in &section.results {
            let (description, significance) = section
                .rule_set
                .rule(&result.rule_id)
                .map(|r| (describe_rule(r), r.significance))
                .unwrap_or_else(|| ("(rule not in set)".to_string(), 0));
            evaluations.push(EvaluationRow {
                rule_set: set_id.clone(),
                rule_id: result.rule_id.clone(),
                description,
                category: result.category.to_string(),
                precision: result.precision,
                recall: result.recall,
                f1: result.f1,
                defect_coverage: result.defect_coverage,
                selection_ratio: result.selection_ratio,
                significance,
                selected: result.selected.iter().cloned().collect::<Vec<_>>().join(" "),
                vacuous_precision: result.vacuous_precision,
                diagnostics: result.diagnostics.join("; "),
            });
        }
        coverage_top_n.extend(coverage_rows(set_id, &section.rule_set, &section.results));
        for class in &section.trend {
            trend.push(TrendRow {
                rule_set: set_id.clone(),
                rule_id: class.rule_id.clone(),
                classification: class.classification.to_string(),
                significance: class.significance,
                category_sequence: class
                    .category_sequence
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(" "),
            });
        }
    }

    Report {
        run_id: run.id.clone(),
        timestamp: run.timestamp.to_rfc3339(),
        context_notes: run.context_notes.clone(),
        monitor,
        evaluations,
        coverage_top_n,
        trend,
    }
}

/// Cumulative coverage per assumption and N, from the top-N rules of the
/// set. Rows are ordered by assumption id, then N ascending.
fn coverage_rows(set_id: &str, rule_set: &RuleSet, results: &[EvaluationResult]) -> Vec<CoverageRow> {
    let mut per_assumption: std::collections::BTreeMap<String, Vec<(u32, f64)>> =
        std::collections::BTreeMap::new();
    for result in results {
        let Some(rule) = rule_set.rule(&result.rule_id) else { continue };
        let Condition::TopN { n } = rule.condition else { continue };
        per_assumption
            .entry(rule.assumption_id.clone())
            .or_default()
            .push((n, result.defect_coverage));
    }
    let mut rows = Vec::new();
    for (assumption_id, mut cells) in per_assumption {
        cells.sort_by_key(|(n, _)| *n);
        cells.dedup_by_key(|(n, _)| *n);
        let mut previous = 0.0;
        for (top_n, coverage) in cells {
            rows.push(CoverageRow {
                rule_set: set_id.to_string(),
                assumption_id: assumption_id.clone(),
                top_n,
                coverage,
                increment: coverage - previous,
            });
            previous = coverage;
        }
    }
    rows
}

fn csv_string<S: Serialize>(rows: &[S], headers: &[&str]) -> Result<String> {
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    writer.write_record(headers).map_err(csv_err)?;
    for row in rows {
        writer.serialize(row).map_err(csv_err)?;
    }
    let bytes = writer.into_inner().map_err(|e| csv_err(csv::Error::from(e.into_error())))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse {
        path: "<csv>".into(),
        message: e.to_string(),
    })
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse { path: "<csv>".into(), message: e.to_string() }
}

impl Report {
    pub fn evaluations_csv(&self) -> Result<String> {
        csv_string(
            &self.evaluations,
            &[
                "rule_set",
                "rule_id",
                "description",
                "category",
                "precision",
                "recall",
                "f1",
                "defect_coverage",
                "selection_ratio",
                "significance",
                "selected",
                "vacuous_precision",
                "diagnostics",
            ],
        )
    }

    pub fn coverage_csv(&self) -> Result<String> {
        csv_string(&self.coverage_top_n, &["rule_set", "assumption_id", "top_n", "coverage", "increment"])
    }

    pub fn trend_csv(&self) -> Result<String> {
        csv_string(&self.trend, &["rule_set", "rule_id", "classification", "significance", "category_sequence"])
    }

    pub fn to_json(&self) -> Result<String> {
        let mut text = serde_json::to_string_pretty(self)
            .map_err(|e| Error::Parse { path: "<json>".into(), message: e.to_string() })?;
        text.push('\n');
        Ok(text)
    }

    pub fn to_markdown(&self) -> String {
        let mut md = String::new();
        md.push_str(&format!("# Calibration report for run {}\n\n", self.run_id));
        md.push_str(&format!("- timestamp: {}\n", self.timestamp));
        if !self.context_notes.is_empty() {
            md.push_str(&format!("- context: {}\n", self.context_notes));
        }
        md.push('\n');

        md.push_str("## Inspection quality\n\n");
        if self.monitor.is_empty() {
            md.push_str("No monitor notes recorded for this run.\n\n");
        } else {
            for note in &self.monitor {
                let tag = match note.level {
                    MonitorLevel::Warning => "WARNING",
                    MonitorLevel::Info => "info",
                };
                md.push_str(&format!("- **{}**: {}\n", tag, note.message));
            }
            md.push('\n');
        }

        md.push_str("## Rule evaluations\n\n");
        if self.evaluations.is_empty() {
            md.push_str("No evaluations stored for this run.\n\n");
        } else {
            md.push_str("| rule set | rule | category | precision | recall | F1 | coverage | selection ratio | significance | selected |\n");
            md.push_str("|---|---|---|---|---|---|---|---|---|---|\n");
            for row in &self.evaluations {
                md.push_str(&format!(
                    "| {} | {} | {} | {:.3} | {:.3} | {:.3} | {:.3} | {:.3} | {} | {} |\n",
                    row.rule_set,
                    row.rule_id,
                    row.category,
                    row.precision,
                    row.recall,
                    row.f1,
                    row.defect_coverage,
                    row.selection_ratio,
                    row.significance,
                    row.selected,
                ));
            }
            md.push('\n');
            md.push_str("### Best effective rules\n\n");
            let mut best: Vec<&EvaluationRow> = self
                .evaluations
                .iter()
                .filter(|r| (r.category == "cat1" || r.category == "cat2") && !r.vacuous_precision)
                .collect();
            best.sort_by(|a, b| {
                a.category
                    .cmp(&b.category)
                    .then(b.f1.total_cmp(&a.f1))
                    .then_with(|| a.rule_id.cmp(&b.rule_id))
            });
            if best.is_empty() {
                md.push_str("No effective rules on this run.\n\n");
            } else {
                for row in best.iter().take(10) {
                    md.push_str(&format!(
                        "- `{}` ({}): {} selected {{{}}}\n",
                        row.rule_id, row.category, row.description, row.selected
                    ));
                }
                md.push('\n');
            }
        }

        if !self.coverage_top_n.is_empty() {
            md.push_str("## Test-defect coverage by top-N selection\n\n");
            md.push_str("| rule set | assumption | top-N | cumulative coverage | increment |\n");
            md.push_str("|---|---|---|---|---|\n");
            for row in &self.coverage_top_n {
                md.push_str(&format!(
                    "| {} | {} | {} | {:.3} | {:.3} |\n",
                    row.rule_set, row.assumption_id, row.top_n, row.coverage, row.increment
                ));
            }
            md.push('\n');
        }

        md.push_str("## Trend across runs\n\n");
        if self.trend.is_empty() {
            md.push_str("No cross-run history yet.\n");
        } else {
            md.push_str("| rule set | rule | classification | significance | categories |\n");
            md.push_str("|---|---|---|---|---|\n");
            for row in &self.trend {
                md.push_str(&format!(
                    "| {} | {} | {} | {} | {} |\n",
                    row.rule_set, row.rule_id, row.classification, row.significance, row.category_sequence
                ));
            }
        }
        md
    }

    /// File names and contents for one format.
    pub fn render(&self, format: ReportFormat) -> Result<Vec<(String, String)>> {
        Ok(match format {
            ReportFormat::Markdown => vec![("report.md".to_string(), self.to_markdown())],
            ReportFormat::Json => vec![("report.json".to_string(), self.to_json()?)],
            ReportFormat::Csv => vec![
                ("evaluations.csv".to_string(), self.evaluations_csv()?),
                ("coverage_by_top_n.csv".to_string(), self.coverage_csv()?),
                ("trend.csv".to_string(), self.trend_csv()?),
            ],
        })
    }
}
