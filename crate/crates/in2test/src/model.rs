//! Shared domain types for calibration runs, selection rules, and evaluation
//! results.
//!
//! Everything here is immutable value data after construction: the rest of the
//! crate operates on these types and produces new values instead of mutating
//! in place, so they are safe to share read-only across workers.

use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

/// Granularity of a prioritized part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PartKind {
    Class,
    Module,
}

/// A unit of prioritization (code class or module) together with its product
/// metrics.
///
/// `loc` counts total lines including blank and comment lines. `mccabe` is the
/// per-part aggregate cyclomatic complexity. `waste_per_line` is an ingested
/// stability metric; it is optional because not every context tracks it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Part {
    pub id: String,
    pub name: String,
    pub kind: PartKind,
    pub loc: u64,
    pub mean_method_length: f64,
    pub mccabe: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub waste_per_line: Option<f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub custom_metrics: BTreeMap<String, f64>,
}

/// Phase in which a finding was recorded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Inspection,
    Test,
}

/// Severity of a finding. `Unclassified` lets data without a severity
/// breakdown load cleanly; severity-scoped metrics treat it as matching only
/// the all-severities scope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    High,
    Medium,
    Low,
    Unclassified,
}

/// Whether an inspection finding is a true defect or an inspector remark.
/// Only meaningful for inspection-phase records; test records are always
/// defects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FindingKind {
    Defect,
    Comment,
}

/// One inspection finding or test defect attributed to a part.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefectRecord {
    pub id: String,
    pub part_id: String,
    pub phase: Phase,
    pub severity: Severity,
    pub finding_kind: FindingKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

/// One calibration run: the inspected parts, all findings from inspection and
/// testing, how much of each part was inspected, and context notes.
///
/// Parts absent from `inspection_coverage` count as fully inspected (1.0).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QaRun {
    pub id: String,
    pub timestamp: DateTime<Utc>,
    #[serde(default)]
    pub context_notes: String,
    pub parts: Vec<Part>,
    pub defects: Vec<DefectRecord>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub inspection_coverage: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reading_rate: Option<f64>,
}

impl QaRun {
    /// Inspected fraction for a part, defaulting to 1.0 when unrecorded.
    pub fn coverage(&self, part_id: &str) -> f64 {
        self.inspection_coverage.get(part_id).copied().unwrap_or(1.0)
    }

    pub fn part(&self, part_id: &str) -> Option<&Part> {
        self.parts.iter().find(|p| p.id == part_id)
    }

    /// Ids of all parts, in stored order.
    pub fn part_ids(&self) -> Vec<&str> {
        self.parts.iter().map(|p| p.id.as_str()).collect()
    }

    /// Number of test defects attributed to a part.
    pub fn test_defect_count(&self, part_id: &str) -> usize {
        self.defects
            .iter()
            .filter(|d| d.phase == Phase::Test && d.part_id == part_id)
            .count()
    }

    /// Parts in which at least one test defect was found.
    pub fn defect_prone_parts(&self) -> BTreeSet<String> {
        self.defects
            .iter()
            .filter(|d| d.phase == Phase::Test)
            .map(|d| d.part_id.clone())
            .collect()
    }

    /// Checks every structural invariant and returns a description per
    /// violation. An empty list means the run is consistent. Violations are
    /// reported in a fixed order (parts, defects, coverage, run fields), so
    /// the output is deterministic for a given run.
    pub fn validate(&self) -> Vec<String> {
        let mut violations = Vec::new();
        let mut seen_parts = BTreeSet::new();
        for part in &self.parts {
            if !seen_parts.insert(part.id.as_str()) {
                violations.push(format!("part {}: duplicate id", part.id));
            }
            if !part.mean_method_length.is_finite() || part.mean_method_length < 0.0 {
                violations.push(format!("part {}: mean_method_length must be a non-negative number", part.id));
            }
            if let Some(w) = part.waste_per_line {
                if !w.is_finite() || w < 0.0 {
                    violations.push(format!("part {}: waste_per_line must be a non-negative number", part.id));
                }
            }
            for (name, value) in &part.custom_metrics {
                if !value.is_finite() {
                    violations.push(format!("part {}: custom metric {} is not finite", part.id, name));
                }
            }
        }

        let mut seen_defects = BTreeSet::new();
        for defect in &self.defects {
            if !seen_defects.insert(defect.id.as_str()) {
                violations.push(format!("defect {}: duplicate id", defect.id));
            }
            if !seen_parts.contains(defect.part_id.as_str()) {
                violations.push(format!("defect {}: unknown part_id {}", defect.id, defect.part_id));
            }
            if defect.phase == Phase::Test && defect.finding_kind == FindingKind::Comment {
                violations.push(format!("defect {}: test findings must be defects, not comments", defect.id));
            }
        }

        for (part_id, value) in &self.inspection_coverage {
            if !seen_parts.contains(part_id.as_str()) {
                violations.push(format!("coverage for {}: unknown part_id", part_id));
            }
            if !value.is_finite() || *value <= 0.0 || *value > 1.0 {
                violations.push(format!("coverage for {} outside (0,1]", part_id));
            }
        }

        if let Some(rate) = self.reading_rate {
            if !rate.is_finite() || rate < 0.0 {
                violations.push("reading_rate must be a non-negative number".to_string());
            }
        }

        violations
    }
}

/// Which inspection count a metric uses: the absolute defect content or the
/// density (content divided by part length).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InspectionValue {
    Content,
    Density,
}

/// Severity filter for inspection metrics. `All` matches every severity
/// including `Unclassified`; the named scopes match only their own severity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeverityScope {
    All,
    High,
    Medium,
    Low,
}

impl SeverityScope {
    pub fn matches(self, severity: Severity) -> bool {
        match self {
            SeverityScope::All => true,
            SeverityScope::High => severity == Severity::High,
            SeverityScope::Medium => severity == Severity::Medium,
            SeverityScope::Low => severity == Severity::Low,
        }
    }
}

/// A product metric read directly from a part.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProductMetric {
    ClassLength,
    MethodLength,
    Mccabe,
    WastePerLine,
    Custom { name: String },
}

/// What a selection rule measures on each part.
///
/// The inspection and product field groups are mutually exclusive by
/// construction, so the "exactly one group populated" invariant cannot be
/// violated. `scaled` divides counts by the part's inspection coverage;
/// `exclude_comments` drops inspector remarks from counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "lowercase")]
pub enum MetricSpec {
    Inspection {
        value: InspectionValue,
        severity_scope: SeverityScope,
        #[serde(default)]
        scaled: bool,
        #[serde(default)]
        exclude_comments: bool,
    },
    Product { metric: ProductMetric },
}

impl MetricSpec {
    /// Convenience constructor for an unscaled, comment-inclusive inspection
    /// metric.
    pub fn inspection(value: InspectionValue, severity_scope: SeverityScope) -> Self {
        MetricSpec::Inspection { value, severity_scope, scaled: false, exclude_comments: false }
    }

    pub fn product(metric: ProductMetric) -> Self {
        MetricSpec::Product { metric }
    }

    /// Whether the metric only ever takes whole-number values. Thresholds for
    /// integer-valued metrics are floored/ceiled; fractional metrics keep full
    /// precision. Scaling by coverage makes counts fractional.
    pub fn integer_valued(&self) -> bool {
        match self {
            MetricSpec::Inspection { value: InspectionValue::Content, scaled, .. } => !scaled,
            MetricSpec::Inspection { value: InspectionValue::Density, .. } => false,
            MetricSpec::Product { metric } => {
                matches!(metric, ProductMetric::ClassLength | ProductMetric::Mccabe)
            }
        }
    }
}

/// Selection direction: prioritize parts where the metric is large or small.
/// For complexity metrics "large" reads as "high" and "small" as "low".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Large,
    Small,
}

/// How a rule's two metrics combine into one selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Combinator {
    None,
    Conjunction,
    Union,
}

/// The selection condition of a rule: either a percent-of-max threshold with
/// strict comparison, or the N best-ranked parts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Condition {
    PercentOfMax { p: f64 },
    TopN { n: u32 },
}

/// Outcome category of one prioritization against the run's test defects.
///
/// The derived ordering (`Cat1 < Cat2 < Cat3 < Cat4 < NotAssessable`) is used
/// when ranking category sequences, best first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    Cat1,
    Cat2,
    Cat3,
    Cat4,
    NotAssessable,
}

impl std::fmt::Display for Category {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Category::Cat1 => "cat1",
            Category::Cat2 => "cat2",
            Category::Cat3 => "cat3",
            Category::Cat4 => "cat4",
            Category::NotAssessable => "not_assessable",
        })
    }
}

/// One evaluated run in a rule's history.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub run_id: String,
    pub category: Category,
}

/// An operational refinement of an assumption: one or two metrics with
/// directions plus a selection condition.
///
/// `significance` counts how many runs in `history` were effective
/// (categories 1-2); a new rule starts at zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionRule {
    pub rule_id: String,
    pub assumption_id: String,
    pub primary_metric: MetricSpec,
    pub primary_direction: Direction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub secondary_metric: Option<MetricSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub secondary_direction: Option<Direction>,
    pub combinator: Combinator,
    pub condition: Condition,
    #[serde(default)]
    pub significance: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub history: Vec<HistoryEntry>,
}

impl SelectionRule {
    /// Single-metric rule with no history.
    pub fn single(
        rule_id: impl Into<String>,
        assumption_id: impl Into<String>,
        metric: MetricSpec,
        direction: Direction,
        condition: Condition,
    ) -> Self {
        SelectionRule {
            rule_id: rule_id.into(),
            assumption_id: assumption_id.into(),
            primary_metric: metric,
            primary_direction: direction,
            secondary_metric: None,
            secondary_direction: None,
            combinator: Combinator::None,
            condition,
            significance: 0,
            history: Vec::new(),
        }
    }

    /// Two-metric rule. The combinator must be `Conjunction` (with a
    /// percent-of-max condition) or `Union` (with a top-N condition).
    pub fn combined(
        rule_id: impl Into<String>,
        assumption_id: impl Into<String>,
        primary: (MetricSpec, Direction),
        secondary: (MetricSpec, Direction),
        combinator: Combinator,
        condition: Condition,
    ) -> Self {
        SelectionRule {
            rule_id: rule_id.into(),
            assumption_id: assumption_id.into(),
            primary_metric: primary.0,
            primary_direction: primary.1,
            secondary_metric: Some(secondary.0),
            secondary_direction: Some(secondary.1),
            combinator,
            condition,
            significance: 0,
            history: Vec::new(),
        }
    }

    /// Checks the rule's structural invariants, returning one description per
    /// violation.
    pub fn validate(&self) -> Vec<String> {
        let mut violations = Vec::new();
        match self.combinator {
            Combinator::None => {
                if self.secondary_metric.is_some() || self.secondary_direction.is_some() {
                    violations.push(format!("rule {}: secondary metric set without a combinator", self.rule_id));
                }
            }
            Combinator::Conjunction => {
                if self.secondary_metric.is_none() || self.secondary_direction.is_none() {
                    violations.push(format!("rule {}: conjunction requires a secondary metric", self.rule_id));
                }
                if !matches!(self.condition, Condition::PercentOfMax { .. }) {
                    violations.push(format!("rule {}: conjunction requires a percent-of-max condition", self.rule_id));
                }
            }
            Combinator::Union => {
                if self.secondary_metric.is_none() || self.secondary_direction.is_none() {
                    violations.push(format!("rule {}: union requires a secondary metric", self.rule_id));
                }
                if !matches!(self.condition, Condition::TopN { .. }) {
                    violations.push(format!("rule {}: union requires a top-N condition", self.rule_id));
                }
            }
        }
        match self.condition {
            Condition::PercentOfMax { p } => {
                if !p.is_finite() || p <= 0.0 || p > 1.0 {
                    violations.push(format!("rule {}: percent-of-max p outside (0,1]", self.rule_id));
                }
            }
            Condition::TopN { n } => {
                if n == 0 {
                    violations.push(format!("rule {}: top-N requires n >= 1", self.rule_id));
                }
            }
        }
        let effective_entries = self
            .history
            .iter()
            .filter(|h| matches!(h.category, Category::Cat1 | Category::Cat2))
            .count() as u32;
        if self.significance != effective_entries {
            violations.push(format!(
                "rule {}: significance {} does not match {} effective history entries",
                self.rule_id, self.significance, effective_entries
            ));
        }
        violations
    }
}

/// The parts a rule selected on one run, plus the numeric thresholds used
/// (empty for top-N rules) and diagnostics for parts whose metric was
/// undefined.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prioritization {
    pub rule_id: String,
    pub run_id: String,
    pub selected: BTreeSet<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub thresholds_used: Vec<(String, f64)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<String>,
}

/// Scores for one (rule, run) pair.
///
/// `effective` is `Some(true)` exactly for categories 1-2, `Some(false)` for
/// categories 3-4, and absent when the run was not assessable.
/// `vacuous_precision` marks an empty selection whose precision was reported
/// as 1 so the F-measure stays defined; such results are skipped when ranking
/// rules by score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationResult {
    pub rule_id: String,
    pub run_id: String,
    pub category: Category,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub effective: Option<bool>,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub defect_coverage: f64,
    pub selection_ratio: f64,
    pub selected: BTreeSet<String>,
    #[serde(default)]
    pub vacuous_precision: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;

    pub(crate) fn part(id: &str, loc: u64, mml: f64, mccabe: u64) -> Part {
        Part {
            id: id.to_string(),
            name: format!("class {id}"),
            kind: PartKind::Class,
            loc,
            mean_method_length: mml,
            mccabe,
            waste_per_line: None,
            custom_metrics: BTreeMap::new(),
        }
    }

    fn small_run() -> QaRun {
        QaRun {
            id: "r".to_string(),
            timestamp: Utc.with_ymd_and_hms(2024, 3, 1, 10, 0, 0).unwrap(),
            context_notes: String::new(),
            parts: vec![part("I", 100, 4.0, 2)],
            defects: vec![],
            inspection_coverage: BTreeMap::new(),
            reading_rate: None,
        }
    }

    #[test]
    fn unknown_part_reference_is_reported() {
        let mut run = small_run();
        run.defects.push(DefectRecord {
            id: "d7".to_string(),
            part_id: "X".to_string(),
            phase: Phase::Inspection,
            severity: Severity::Unclassified,
            finding_kind: FindingKind::Defect,
            description: None,
        });
        assert_eq!(run.validate(), vec!["defect d7: unknown part_id X".to_string()]);
    }

    #[test]
    fn coverage_out_of_range_is_reported() {
        let mut run = small_run();
        run.inspection_coverage.insert("I".to_string(), 1.5);
        assert_eq!(run.validate(), vec!["coverage for I outside (0,1]".to_string()]);
    }

    #[test]
    fn zero_coverage_is_rejected_and_one_is_allowed() {
        let mut run = small_run();
        run.inspection_coverage.insert("I".to_string(), 0.0);
        assert_eq!(run.validate().len(), 1);
        run.inspection_coverage.insert("I".to_string(), 1.0);
        assert!(run.validate().is_empty());
    }

    #[test]
    fn test_phase_comment_is_rejected() {
        let mut run = small_run();
        run.defects.push(DefectRecord {
            id: "t1".to_string(),
            part_id: "I".to_string(),
            phase: Phase::Test,
            severity: Severity::Unclassified,
            finding_kind: FindingKind::Comment,
            description: None,
        });
        let violations = run.validate();
        assert_eq!(violations.len(), 1);
        assert!(violations[0].contains("t1"));
    }

    #[test]
    fn duplicate_ids_are_reported() {
        let mut run = small_run();
        run.parts.push(part("I", 50, 1.0, 1));
        let violations = run.validate();
        assert_eq!(violations, vec!["part I: duplicate id".to_string()]);
    }

    #[test]
    fn coverage_defaults_to_full_inspection() {
        let run = small_run();
        assert_eq!(run.coverage("I"), 1.0);
    }

    #[test]
    fn rule_invariants_catch_mismatched_combinators() {
        let mut rule = SelectionRule::single(
            "r1",
            "A.I",
            MetricSpec::inspection(InspectionValue::Content, SeverityScope::All),
            Direction::Large,
            Condition::PercentOfMax { p: 0.8 },
        );
        assert!(rule.validate().is_empty());

        rule.combinator = Combinator::Union;
        let violations = rule.validate();
        assert!(violations.iter().any(|v| v.contains("union requires a secondary metric")));
        assert!(violations.iter().any(|v| v.contains("union requires a top-N condition")));
    }

    #[test]
    fn significance_must_match_history() {
        let mut rule = SelectionRule::single(
            "r1",
            "A.I",
            MetricSpec::inspection(InspectionValue::Content, SeverityScope::All),
            Direction::Large,
            Condition::TopN { n: 3 },
        );
        rule.history.push(HistoryEntry { run_id: "run-1".to_string(), category: Category::Cat2 });
        assert_eq!(rule.validate().len(), 1);
        rule.significance = 1;
        assert!(rule.validate().is_empty());
    }

    #[test]
    fn severity_scope_matching_treats_unclassified_as_all_only() {
        assert!(SeverityScope::All.matches(Severity::Unclassified));
        assert!(SeverityScope::All.matches(Severity::High));
        assert!(!SeverityScope::High.matches(Severity::Unclassified));
        assert!(SeverityScope::Medium.matches(Severity::Medium));
        assert!(!SeverityScope::Low.matches(Severity::Medium));
    }

    #[test]
    fn metric_spec_integer_valuedness() {
        assert!(MetricSpec::inspection(InspectionValue::Content, SeverityScope::All).integer_valued());
        assert!(!MetricSpec::inspection(InspectionValue::Density, SeverityScope::All).integer_valued());
        let scaled = MetricSpec::Inspection {
            value: InspectionValue::Content,
            severity_scope: SeverityScope::All,
            scaled: true,
            exclude_comments: false,
        };
        assert!(!scaled.integer_valued());
        assert!(MetricSpec::product(ProductMetric::ClassLength).integer_valued());
        assert!(MetricSpec::product(ProductMetric::Mccabe).integer_valued());
        assert!(!MetricSpec::product(ProductMetric::MethodLength).integer_valued());
        assert!(!MetricSpec::product(ProductMetric::WastePerLine).integer_valued());
    }

    #[test]
    fn rule_serialization_round_trips() {
        let rule = SelectionRule::combined(
            "dc-all-large+mcc-low",
            "A.XII",
            (MetricSpec::inspection(InspectionValue::Content, SeverityScope::High), Direction::Large),
            (MetricSpec::product(ProductMetric::Mccabe), Direction::Small),
            Combinator::Conjunction,
            Condition::PercentOfMax { p: 0.8 },
        );
        let json = serde_json::to_string(&rule).unwrap();
        let back: SelectionRule = serde_json::from_str(&json).unwrap();
        assert_eq!(rule, back);
    }
}
