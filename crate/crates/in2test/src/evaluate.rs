//! Scores prioritizations against test defects: quality categories,
//! precision/recall/F-measure, defect coverage, significance bookkeeping,
//! and cross-run trend classification.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Category, EvaluationResult, HistoryEntry, QaRun, SelectionRule};
use crate::prioritize::prioritize;

/// Cross-run standing of a rule: effective everywhere, mixed, never
/// effective, or never assessable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrendClassification {
    Acceptable,
    Potential,
    NonAcceptable,
    NotAssessable,
}

impl std::fmt::Display for TrendClassification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TrendClassification::Acceptable => "acceptable",
            TrendClassification::Potential => "potential",
            TrendClassification::NonAcceptable => "non_acceptable",
            TrendClassification::NotAssessable => "not_assessable",
        })
    }
}

/// Trend entry for one rule over all evaluated runs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrendClass {
    pub rule_id: String,
    pub classification: TrendClassification,
    pub significance: u32,
    pub category_sequence: Vec<Category>,
}

/// Rejected significance updates.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UpdateError {
    #[error("result for rule {result} does not belong to rule {rule}")]
    RuleMismatch { rule: String, result: String },
    #[error("rule {rule_id} was already evaluated on run {run_id}")]
    DuplicateEvaluation { rule_id: String, run_id: String },
}

/// Classifies a selection against the parts where test defects were found.
///
/// With `D` the set of defect-prone parts: category 1 when the selection is
/// exactly `D`, category 2 when it is a strict superset, category 3 when it
/// covers some but not all of `D` (extra parts do not matter), and category 4
/// when it misses `D` entirely. A run without any test defects is not
/// assessable.
pub fn classify(selected: &BTreeSet<String>, run: &QaRun) -> Category {
    let prone = run.defect_prone_parts();
    if prone.is_empty() {
        return Category::NotAssessable;
    }
    let hit = selected.intersection(&prone).count();
    if hit == 0 {
        Category::Cat4
    } else if hit == prone.len() {
        if selected.len() == prone.len() {
            Category::Cat1
        } else {
            Category::Cat2
        }
    } else {
        Category::Cat3
    }
}

/// Whether a category counts as effective. Categories 1-2 covered every
/// defect-prone part; 3-4 overlooked defects. Not assessable has no answer.
pub fn effectiveness(category: Category) -> Option<bool> {
    match category {
        Category::Cat1 | Category::Cat2 => Some(true),
        Category::Cat3 | Category::Cat4 => Some(false),
        Category::NotAssessable => None,
    }
}

/// Precision, recall, and F-measure of one selection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scores {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Precision of an empty selection is reported as 1 so the F-measure
    /// stays defined; the flag marks it as vacuous.
    pub vacuous_precision: bool,
}

/// Computes precision, recall, and F1 against the defect-prone parts, or
/// `None` when the run has no test defects and is therefore not assessable.
pub fn precision_recall(selected: &BTreeSet<String>, run: &QaRun) -> Option<Scores> {
    let prone = run.defect_prone_parts();
    if prone.is_empty() {
        return None;
    }
    let hit = selected.intersection(&prone).count() as f64;
    let (precision, vacuous) =
        if selected.is_empty() { (1.0, true) } else { (hit / selected.len() as f64, false) };
    let recall = hit / prone.len() as f64;
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    Some(Scores { precision, recall, f1, vacuous_precision: vacuous })
}

/// Fraction of all test defects residing in the selected parts, or `None`
/// when the run has no test defects at all.
pub fn defect_coverage(selected: &BTreeSet<String>, run: &QaRun) -> Option<f64> {
    let total: usize = run.parts.iter().map(|p| run.test_defect_count(&p.id)).sum();
    if total == 0 {
        return None;
    }
    let covered: usize = selected.iter().map(|id| run.test_defect_count(id)).sum();
    Some(covered as f64 / total as f64)
}

/// Records an evaluation in the rule's history, returning the updated rule.
///
/// Effective results increase the significance by one; ineffective and
/// not-assessable results only append to the history. A second evaluation of
/// the same run is rejected.
pub fn update_significance(
    rule: &SelectionRule,
    result: &EvaluationResult,
) -> Result<SelectionRule, UpdateError> {
    if rule.rule_id != result.rule_id {
        return Err(UpdateError::RuleMismatch {
            rule: rule.rule_id.clone(),
            result: result.rule_id.clone(),
        });
    }
    if rule.history.iter().any(|h| h.run_id == result.run_id) {
        return Err(UpdateError::DuplicateEvaluation {
            rule_id: rule.rule_id.clone(),
            run_id: result.run_id.clone(),
        });
    }
    let mut updated = rule.clone();
    updated.history.push(HistoryEntry { run_id: result.run_id.clone(), category: result.category });
    if effectiveness(result.category) == Some(true) {
        updated.significance += 1;
    }
    Ok(updated)
}

/// Classifies each rule's history across runs.
///
/// A rule is acceptable when every assessable run was effective,
/// non-acceptable when every assessable run was ineffective, potential when
/// mixed, and not assessable when no run could be assessed. Rules without any
/// history are omitted. The output is sorted best first: by classification,
/// then significance descending, then the best category sequence, then rule
/// id.
pub fn trend(rules: &[SelectionRule]) -> Vec<TrendClass> {
    let mut classes: Vec<TrendClass> = rules
        .iter()
        .filter(|rule| !rule.history.is_empty())
        .map(|rule| {
            let sequence: Vec<Category> = rule.history.iter().map(|h| h.category).collect();
            let verdicts: Vec<bool> =
                sequence.iter().filter_map(|c| effectiveness(*c)).collect();
            let classification = if verdicts.is_empty() {
                TrendClassification::NotAssessable
            } else if verdicts.iter().all(|e| *e) {
                TrendClassification::Acceptable
            } else if verdicts.iter().all(|e| !*e) {
                TrendClassification::NonAcceptable
            } else {
                TrendClassification::Potential
            };
            TrendClass {
                rule_id: rule.rule_id.clone(),
                classification,
                significance: rule.significance,
                category_sequence: sequence,
            }
        })
        .collect();
    classes.sort_by(|a, b| {
        a.classification
            .cmp(&b.classification)
            .then(b.significance.cmp(&a.significance))
            .then_with(|| a.category_sequence.cmp(&b.category_sequence))
            .then_with(|| a.rule_id.cmp(&b.rule_id))
    });
    classes
}

/// Evaluates every rule of a set against one run.
///
/// Each rule is prioritized, classified, and scored, and its significance
/// history is updated in place. Per-rule failures (unusable metrics,
/// duplicate evaluations) are recorded in the result diagnostics and never
/// abort the batch. Results are ordered by rule id.
pub fn evaluate_run(rules: &mut [SelectionRule], run: &QaRun) -> Vec<EvaluationResult> {
    let part_count = run.parts.len();
    let mut results: Vec<EvaluationResult> = rules
        .iter_mut()
        .map(|rule| {
            let mut result = match prioritize(rule, run) {
                Ok(prioritization) => {
                    let category = classify(&prioritization.selected, run);
                    let scores = precision_recall(&prioritization.selected, run);
                    let coverage = defect_coverage(&prioritization.selected, run).unwrap_or(0.0);
                    let selection_ratio = if part_count == 0 {
                        0.0
                    } else {
                        prioritization.selected.len() as f64 / part_count as f64
                    };
                    EvaluationResult {
                        rule_id: rule.rule_id.clone(),
                        run_id: run.id.clone(),
                        category,
                        effective: effectiveness(category),
                        precision: scores.map_or(0.0, |s| s.precision),
                        recall: scores.map_or(0.0, |s| s.recall),
                        f1: scores.map_or(0.0, |s| s.f1),
                        defect_coverage: coverage,
                        selection_ratio,
                        selected: prioritization.selected,
                        vacuous_precision: scores.is_some_and(|s| s.vacuous_precision),
                        diagnostics: prioritization.diagnostics,
                    }
                }
                Err(err) => EvaluationResult {
                    rule_id: rule.rule_id.clone(),
                    run_id: run.id.clone(),
                    category: Category::NotAssessable,
                    effective: None,
                    precision: 0.0,
                    recall: 0.0,
                    f1: 0.0,
                    defect_coverage: 0.0,
                    selection_ratio: 0.0,
                    selected: BTreeSet::new(),
                    vacuous_precision: false,
                    diagnostics: vec![err.to_string()],
                },
            };
            match update_significance(rule, &result) {
                Ok(updated) => *rule = updated,
                Err(err) => result.diagnostics.push(format!("{err}; significance not updated")),
            }
            result
        })
        .collect();
    results.sort_by(|a, b| a.rule_id.cmp(&b.rule_id));
    results
}
