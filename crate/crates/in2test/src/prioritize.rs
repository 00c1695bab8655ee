//! Applies a selection rule to a run, producing the prioritized part set.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::model::{Condition, Direction, MetricSpec, Prioritization, QaRun, SelectionRule};
use crate::rules::{compute_threshold, metric_label, metric_value, passes_threshold, MetricError};

/// Why a rule could not produce a selection on a run.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrioritizeError {
    #[error("rule {rule_id} unusable on run {run_id}: {reason}")]
    RuleUnusable { rule_id: String, run_id: String, reason: String },
    #[error("rule {rule_id} is structurally invalid: {reason}")]
    InvalidRule { rule_id: String, reason: String },
}

/// Parts ordered by a metric. `ordered` holds the parts where the metric is
/// defined, best first; `undefined` lists the rest with the reason, sorted by
/// part id. Ties in the metric break by ascending part id.
#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    pub ordered: Vec<(String, f64)>,
    pub undefined: Vec<(String, MetricError)>,
}

impl Ranking {
    /// The ids of the first `n` defined parts.
    pub fn top(&self, n: usize) -> impl Iterator<Item = &str> {
        self.ordered.iter().take(n).map(|(id, _)| id.as_str())
    }
}

/// Ranks all parts of a run by a metric: descending for `large`, ascending
/// for `small`. Parts whose metric is undefined rank last and are flagged.
pub fn rank_parts(spec: &MetricSpec, direction: Direction, run: &QaRun) -> Ranking {
    let mut ordered = Vec::new();
    let mut undefined = Vec::new();
    for part in &run.parts {
        match metric_value(spec, part, run) {
            Ok(value) => ordered.push((part.id.clone(), value)),
            Err(err) => undefined.push((part.id.clone(), err)),
        }
    }
    ordered.sort_by(|a, b| {
        let by_value = match direction {
            Direction::Large => b.1.total_cmp(&a.1),
            Direction::Small => a.1.total_cmp(&b.1),
        };
        by_value.then_with(|| a.0.cmp(&b.0))
    });
    undefined.sort_by(|a, b| a.0.cmp(&b.0));
    Ranking { ordered, undefined }
}

struct MetricSelection {
    selected: BTreeSet<String>,
    threshold: Option<(String, f64)>,
    diagnostics: Vec<String>,
    defined_parts: usize,
}

fn select_by_threshold(
    rule: &SelectionRule,
    spec: &MetricSpec,
    direction: Direction,
    p: f64,
    run: &QaRun,
) -> Result<MetricSelection, PrioritizeError> {
    let ranking = rank_parts(spec, direction, run);
    let diagnostics: Vec<String> = ranking.undefined.iter().map(|(_, e)| e.to_string()).collect();
    let values: Vec<f64> = ranking.ordered.iter().map(|(_, v)| *v).collect();
    let threshold =
        compute_threshold(&values, direction, p, spec.integer_valued()).map_err(|_| {
            PrioritizeError::RuleUnusable {
                rule_id: rule.rule_id.clone(),
                run_id: run.id.clone(),
                reason: format!("metric {} undefined for every part", metric_label(spec)),
            }
        })?;
    let selected = ranking
        .ordered
        .iter()
        .filter(|(_, v)| passes_threshold(*v, threshold, direction))
        .map(|(id, _)| id.clone())
        .collect();
    Ok(MetricSelection {
        selected,
        threshold: Some((metric_label(spec), threshold)),
        diagnostics,
        defined_parts: ranking.ordered.len(),
    })
}

fn select_top_n(
    spec: &MetricSpec,
    direction: Direction,
    n: u32,
    run: &QaRun,
) -> MetricSelection {
    let ranking = rank_parts(spec, direction, run);
    let diagnostics = ranking.undefined.iter().map(|(_, e)| e.to_string()).collect();
    let selected = ranking.top(n as usize).map(str::to_string).collect();
    MetricSelection { selected, threshold: None, diagnostics, defined_parts: ranking.ordered.len() }
}

/// Applies a rule to a run.
///
/// Percent-of-max rules derive each metric's threshold over this run's
/// values and keep parts passing the strict comparison; a conjunction
/// intersects the two selections. Top-N rules take the first `n` parts of
/// the ranking; a union rule unites the two top-N sets, so its selection may
/// exceed `n`. Parts with undefined metrics are never selected and appear in
/// the diagnostics. The rule is unusable when every part lacks a required
/// metric.
pub fn prioritize(rule: &SelectionRule, run: &QaRun) -> Result<Prioritization, PrioritizeError> {
    let violations = rule.validate();
    if !violations.is_empty() {
        return Err(PrioritizeError::InvalidRule {
            rule_id: rule.rule_id.clone(),
            reason: violations.join("; "),
        });
    }

    let mut metrics = vec![(&rule.primary_metric, rule.primary_direction)];
    if let (Some(spec), Some(direction)) = (&rule.secondary_metric, rule.secondary_direction) {
        metrics.push((spec, direction));
    }

    let mut selected: Option<BTreeSet<String>> = None;
    let mut thresholds_used = Vec::new();
    let mut diagnostics = Vec::new();

    match rule.condition {
        Condition::PercentOfMax { p } => {
            for (spec, direction) in metrics {
                let part = select_by_threshold(rule, spec, direction, p, run)?;
                diagnostics.extend(part.diagnostics);
                thresholds_used.extend(part.threshold);
                selected = Some(match selected.take() {
                    None => part.selected,
                    Some(previous) => previous.intersection(&part.selected).cloned().collect(),
                });
            }
        }
        Condition::TopN { n } => {
            let mut defined_parts = 0;
            for (spec, direction) in metrics {
                let part = select_top_n(spec, direction, n, run);
                defined_parts += part.defined_parts;
                diagnostics.extend(part.diagnostics);
                selected = Some(match selected.take() {
                    None => part.selected,
                    Some(previous) => previous.union(&part.selected).cloned().collect(),
                });
            }
            if !run.parts.is_empty() && defined_parts == 0 {
                return Err(PrioritizeError::RuleUnusable {
                    rule_id: rule.rule_id.clone(),
                    run_id: run.id.clone(),
                    reason: "metrics undefined for every part".to_string(),
                });
            }
        }
    }

    diagnostics.sort();
    diagnostics.dedup();
    Ok(Prioritization {
        rule_id: rule.rule_id.clone(),
        run_id: run.id.clone(),
        selected: selected.unwrap_or_default(),
        thresholds_used,
        diagnostics,
    })
}
