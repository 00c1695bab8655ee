//! Systematic generation of the selection-rule space and the instruction
//! sentences that describe each rule.

use serde::{Deserialize, Serialize};

use crate::model::{
    Combinator, Condition, Direction, InspectionValue, MetricSpec, ProductMetric, SelectionRule,
    SeverityScope,
};

use super::product_label;

/// Which rule families a generated set includes. Each flag corresponds to a
/// row group of the systematic rule space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct FamilyFlags {
    pub inspection: bool,
    pub class_length: bool,
    pub method_length: bool,
    pub mccabe: bool,
    pub inspection_class_length: bool,
    pub inspection_method_length: bool,
    pub inspection_mccabe: bool,
}

impl Default for FamilyFlags {
    fn default() -> Self {
        FamilyFlags {
            inspection: true,
            class_length: true,
            method_length: true,
            mccabe: true,
            inspection_class_length: true,
            inspection_method_length: true,
            inspection_mccabe: true,
        }
    }
}

impl FamilyFlags {
    pub fn none() -> Self {
        FamilyFlags {
            inspection: false,
            class_length: false,
            method_length: false,
            mccabe: false,
            inspection_class_length: false,
            inspection_method_length: false,
            inspection_mccabe: false,
        }
    }
}

/// Configuration of a generated rule set.
///
/// `percent` feeds every percent-of-max condition (0.8 unless configured
/// otherwise). `top_n_list` gives the selection depths of the ranked
/// families, which are generated only when `include_top_n_families` is set;
/// the default set is the 118 percent-of-max rules alone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RuleSetConfig {
    pub percent: f64,
    pub top_n_list: Vec<u32>,
    pub include_families: FamilyFlags,
    pub include_top_n_families: bool,
}

impl Default for RuleSetConfig {
    fn default() -> Self {
        RuleSetConfig {
            percent: 0.8,
            top_n_list: vec![3, 5, 8, 10],
            include_families: FamilyFlags::default(),
            include_top_n_families: false,
        }
    }
}

impl RuleSetConfig {
    pub fn validate(&self) -> Vec<String> {
        let mut violations = Vec::new();
        if !self.percent.is_finite() || self.percent <= 0.0 || self.percent > 1.0 {
            violations.push("percent outside (0,1]".to_string());
        }
        if !self.top_n_list.windows(2).all(|w| w[0] < w[1]) {
            violations.push("top_n_list must be strictly increasing".to_string());
        }
        if self.top_n_list.iter().any(|n| *n == 0) {
            violations.push("top_n_list entries must be positive".to_string());
        }
        violations
    }
}

/// A generated (or hand-authored) rule set with the configuration that
/// produced it. The id is derived from the configuration, so identical
/// configurations always address the same stored artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleSet {
    pub id: String,
    pub config: RuleSetConfig,
    pub rules: Vec<SelectionRule>,
}

impl RuleSet {
    pub fn generate(config: RuleSetConfig) -> RuleSet {
        let rules = generate_rule_set(&config);
        RuleSet { id: config_id(&config), config, rules }
    }

    pub fn rule(&self, rule_id: &str) -> Option<&SelectionRule> {
        self.rules.iter().find(|r| r.rule_id == rule_id)
    }
}

fn config_id(config: &RuleSetConfig) -> String {
    let mut id = format!("rs-p{}", config.percent).replace('.', "_");
    let f = &config.include_families;
    let all = FamilyFlags::default();
    if *f != all {
        let bits: String = [
            f.inspection,
            f.class_length,
            f.method_length,
            f.mccabe,
            f.inspection_class_length,
            f.inspection_method_length,
            f.inspection_mccabe,
        ]
        .iter()
        .map(|b| if *b { '1' } else { '0' })
        .collect();
        id.push_str("-f");
        id.push_str(&bits);
    }
    if config.include_top_n_families {
        let ns: Vec<String> = config.top_n_list.iter().map(u32::to_string).collect();
        id.push_str("-top");
        id.push_str(&ns.join("_"));
    }
    id
}

const DIRECTIONS: [Direction; 2] = [Direction::Large, Direction::Small];
const VALUES: [InspectionValue; 2] = [InspectionValue::Content, InspectionValue::Density];
const SCOPES: [SeverityScope; 4] =
    [SeverityScope::All, SeverityScope::High, SeverityScope::Medium, SeverityScope::Low];

fn value_code(value: InspectionValue) -> &'static str {
    match value {
        InspectionValue::Content => "dc",
        InspectionValue::Density => "dd",
    }
}

fn scope_code(scope: SeverityScope) -> &'static str {
    match scope {
        SeverityScope::All => "all",
        SeverityScope::High => "high",
        SeverityScope::Medium => "med",
        SeverityScope::Low => "low",
    }
}

fn size_code(direction: Direction) -> &'static str {
    match direction {
        Direction::Large => "large",
        Direction::Small => "small",
    }
}

fn mccabe_code(direction: Direction) -> &'static str {
    match direction {
        Direction::Large => "high",
        Direction::Small => "low",
    }
}

/// Generates the systematic rule space for the configured families.
///
/// With the default configuration this is the full percent-of-max space of
/// 118 rules: 16 inspection-only, 2 class length, 2 method length, 2 McCabe,
/// and 32 for each of the three inspection-product combinations. Rule ids
/// encode the metrics and directions and are stable across invocations.
pub fn generate_rule_set(config: &RuleSetConfig) -> Vec<SelectionRule> {
    let mut rules = Vec::new();
    let percent = Condition::PercentOfMax { p: config.percent };
    let fam = &config.include_families;

    if fam.inspection {
        // One assumption per direction: many inspection findings indicate
        // test-defect-prone parts (A.I), or few findings do (A.II).
        for direction in DIRECTIONS {
            let assumption = match direction {
                Direction::Large => "A.I",
                Direction::Small => "A.II",
            };
            for value in VALUES {
                for scope in SCOPES {
                    rules.push(SelectionRule::single(
                        format!("{}-{}-{}", value_code(value), scope_code(scope), size_code(direction)),
                        assumption,
                        MetricSpec::inspection(value, scope),
                        direction,
                        percent.clone(),
                    ));
                }
            }
        }
    }
    if fam.class_length {
        for direction in DIRECTIONS {
            rules.push(SelectionRule::single(
                format!("len-{}", size_code(direction)),
                "A.III",
                MetricSpec::product(ProductMetric::ClassLength),
                direction,
                percent.clone(),
            ));
        }
    }
    if fam.method_length {
        for direction in DIRECTIONS {
            rules.push(SelectionRule::single(
                format!("mlen-{}", size_code(direction)),
                "A.IV",
                MetricSpec::product(ProductMetric::MethodLength),
                direction,
                percent.clone(),
            ));
        }
    }
    if fam.mccabe {
        for direction in DIRECTIONS {
            let assumption = match direction {
                Direction::Large => "A.V",
                Direction::Small => "A.VI",
            };
            rules.push(SelectionRule::single(
                format!("mcc-{}", mccabe_code(direction)),
                assumption,
                MetricSpec::product(ProductMetric::Mccabe),
                direction,
                percent.clone(),
            ));
        }
    }

    let mut combination_family = |product: ProductMetric, code: fn(Direction) -> String, assumption: fn(Direction, Direction) -> &'static str| {
        let mut out = Vec::new();
        for d1 in DIRECTIONS {
            for d2 in DIRECTIONS {
                for value in VALUES {
                    for scope in SCOPES {
                        out.push(SelectionRule::combined(
                            format!(
                                "{}-{}-{}+{}",
                                value_code(value),
                                scope_code(scope),
                                size_code(d1),
                                code(d2)
                            ),
                            assumption(d1, d2),
                            (MetricSpec::inspection(value, scope), d1),
                            (MetricSpec::product(product.clone()), d2),
                            Combinator::Conjunction,
                            percent.clone(),
                        ));
                    }
                }
            }
        }
        out
    };

    if fam.inspection_class_length {
        rules.extend(combination_family(
            ProductMetric::ClassLength,
            |d| format!("len-{}", size_code(d)),
            |d1, _| match d1 {
                Direction::Large => "A.VII",
                Direction::Small => "A.VIII",
            },
        ));
    }
    if fam.inspection_method_length {
        rules.extend(combination_family(
            ProductMetric::MethodLength,
            |d| format!("mlen-{}", size_code(d)),
            |d1, _| match d1 {
                Direction::Large => "A.IX",
                Direction::Small => "A.X",
            },
        ));
    }
    if fam.inspection_mccabe {
        rules.extend(combination_family(
            ProductMetric::Mccabe,
            |d| format!("mcc-{}", mccabe_code(d)),
            |d1, d2| match (d1, d2) {
                (Direction::Large, Direction::Large) => "A.XI",
                (Direction::Large, Direction::Small) => "A.XII",
                (Direction::Small, Direction::Large) => "A.XIII",
                (Direction::Small, Direction::Small) => "A.XIV",
            },
        ));
    }

    if config.include_top_n_families {
        rules.extend(generate_top_n_rules(config));
    }
    rules
}

/// Generates the ranked-selection families: one top-N rule per assumption and
/// per depth in `top_n_list`.
///
/// The assumptions mirror a module-level calibration setting: raw, scaled,
/// comment-excluded, and scaled-comment-excluded inspection counts (N1-N4),
/// small/large size and waste per line (N5-N8), and two union combinations of
/// an inspection count with large size (N9-N10).
pub fn generate_top_n_rules(config: &RuleSetConfig) -> Vec<SelectionRule> {
    let inspection = |scaled: bool, exclude_comments: bool| MetricSpec::Inspection {
        value: InspectionValue::Content,
        severity_scope: SeverityScope::All,
        scaled,
        exclude_comments,
    };
    let singles: [(&str, MetricSpec, Direction); 8] = [
        ("N1", inspection(false, false), Direction::Large),
        ("N2", inspection(true, false), Direction::Large),
        ("N3", inspection(false, true), Direction::Large),
        ("N4", inspection(true, true), Direction::Large),
        ("N5", MetricSpec::product(ProductMetric::ClassLength), Direction::Small),
        ("N6", MetricSpec::product(ProductMetric::ClassLength), Direction::Large),
        ("N7", MetricSpec::product(ProductMetric::WastePerLine), Direction::Small),
        ("N8", MetricSpec::product(ProductMetric::WastePerLine), Direction::Large),
    ];
    let unions: [(&str, MetricSpec, MetricSpec); 2] = [
        ("N9", inspection(false, false), MetricSpec::product(ProductMetric::ClassLength)),
        ("N10", inspection(true, true), MetricSpec::product(ProductMetric::ClassLength)),
    ];

    let mut rules = Vec::new();
    for (assumption, metric, direction) in singles {
        for n in &config.top_n_list {
            rules.push(SelectionRule::single(
                format!("{assumption}-top{n}"),
                assumption,
                metric.clone(),
                direction,
                Condition::TopN { n: *n },
            ));
        }
    }
    for (assumption, primary, secondary) in unions {
        for n in &config.top_n_list {
            rules.push(SelectionRule::combined(
                format!("{assumption}-top{n}"),
                assumption,
                (primary.clone(), Direction::Large),
                (secondary.clone(), Direction::Large),
                Combinator::Union,
                Condition::TopN { n: *n },
            ));
        }
    }
    rules
}

fn direction_word(direction: Direction) -> &'static str {
    match direction {
        Direction::Large => "large",
        Direction::Small => "small",
    }
}

fn complexity_word(direction: Direction) -> &'static str {
    match direction {
        Direction::Large => "high",
        Direction::Small => "low",
    }
}

fn severity_clause(scope: SeverityScope) -> &'static str {
    match scope {
        SeverityScope::All => "all",
        SeverityScope::High => "high severity",
        SeverityScope::Medium => "medium severity",
        SeverityScope::Low => "low severity",
    }
}

fn inspection_extras(scaled: bool, exclude_comments: bool) -> String {
    let mut extras = String::new();
    if scaled {
        extras.push_str(", scaled to full inspection coverage");
    }
    if exclude_comments {
        extras.push_str(", excluding inspection comments");
    }
    extras
}

/// Generic directed-metric phrase used for ranked rules and fallbacks.
fn directed_label(spec: &MetricSpec, direction: Direction) -> String {
    match spec {
        MetricSpec::Inspection { value, severity_scope, scaled, exclude_comments } => {
            let noun = match value {
                InspectionValue::Content => "defect content",
                InspectionValue::Density => "defect density",
            };
            format!(
                "{} {} considering {} inspection defects{}",
                direction_word(direction),
                noun,
                severity_clause(*severity_scope),
                inspection_extras(*scaled, *exclude_comments)
            )
        }
        MetricSpec::Product { metric } => match metric {
            ProductMetric::Mccabe => format!("{} McCabe complexity", complexity_word(direction)),
            other => format!("{} {}", direction_word(direction), product_label(other)),
        },
    }
}

/// Renders a rule as the instruction sentence of its refinement.
pub fn describe_rule(rule: &SelectionRule) -> String {
    let n = match rule.condition {
        Condition::TopN { n } => Some(n),
        Condition::PercentOfMax { .. } => None,
    };

    if rule.combinator == Combinator::Union {
        let (Some(secondary), Some(secondary_direction)) =
            (&rule.secondary_metric, rule.secondary_direction)
        else {
            return format!("Focus testing per rule {}.", rule.rule_id);
        };
        let n = n.unwrap_or(0);
        return format!(
            "Focus testing on the top-{} code classes ranked by {} or by {}.",
            n,
            directed_label(&rule.primary_metric, rule.primary_direction),
            directed_label(secondary, secondary_direction),
        );
    }

    if rule.combinator == Combinator::Conjunction {
        if let (
            MetricSpec::Inspection { value, severity_scope, scaled, exclude_comments },
            Some(MetricSpec::Product { metric }),
            Some(d2),
        ) = (&rule.primary_metric, &rule.secondary_metric, rule.secondary_direction)
        {
            let noun = match value {
                InspectionValue::Content => "defect content",
                InspectionValue::Density => "defect density",
            };
            let (kind, detail) = match metric {
                ProductMetric::Mccabe => (
                    format!("{} complexity", complexity_word(d2)),
                    format!("{} McCabe complexity", complexity_word(d2)),
                ),
                ProductMetric::ClassLength => (
                    format!("{} size", direction_word(d2)),
                    format!("{} class length", direction_word(d2)),
                ),
                ProductMetric::MethodLength => (
                    format!("{} size", direction_word(d2)),
                    format!("{} method length", direction_word(d2)),
                ),
                other => {
                    let label = format!("{} {}", direction_word(d2), product_label(other));
                    (label.clone(), label)
                }
            };
            return format!(
                "Focus testing on code classes with {} {} and {} considering {} inspection defects{} and {}.",
                direction_word(rule.primary_direction),
                noun,
                kind,
                severity_clause(*severity_scope),
                inspection_extras(*scaled, *exclude_comments),
                detail,
            );
        }
        let (Some(secondary), Some(d2)) = (&rule.secondary_metric, rule.secondary_direction) else {
            return format!("Focus testing per rule {}.", rule.rule_id);
        };
        return format!(
            "Focus testing on code classes with {} and {}.",
            directed_label(&rule.primary_metric, rule.primary_direction),
            directed_label(secondary, d2),
        );
    }

    match (&rule.primary_metric, n) {
        (MetricSpec::Inspection { value, severity_scope, scaled, exclude_comments }, None) => {
            let noun = match value {
                InspectionValue::Content => "defect content",
                InspectionValue::Density => "defect density",
            };
            format!(
                "Focus testing on those code classes with {} {} considering {} inspection defects{}.",
                direction_word(rule.primary_direction),
                noun,
                severity_clause(*severity_scope),
                inspection_extras(*scaled, *exclude_comments),
            )
        }
        (MetricSpec::Product { metric: ProductMetric::ClassLength }, None) => {
            format!("Focus testing on {} code classes.", direction_word(rule.primary_direction))
        }
        (MetricSpec::Product { metric: ProductMetric::Mccabe }, None) => format!(
            "Focus testing on code classes with {} McCabe complexity.",
            complexity_word(rule.primary_direction)
        ),
        (MetricSpec::Product { metric }, None) => format!(
            "Focus testing on code classes with {} {}.",
            direction_word(rule.primary_direction),
            product_label(metric)
        ),
        (MetricSpec::Product { metric: ProductMetric::ClassLength }, Some(n)) => {
            let superlative = match rule.primary_direction {
                Direction::Large => "largest",
                Direction::Small => "smallest",
            };
            format!("Focus testing on the top-{n} {superlative} code classes.")
        }
        (spec, Some(n)) => format!(
            "Focus testing on the top-{} code classes ranked by {}.",
            n,
            directed_label(spec, rule.primary_direction)
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn default_config_generates_the_full_space() {
        let rules = generate_rule_set(&RuleSetConfig::default());
        assert_eq!(rules.len(), 118);
        let ids: BTreeSet<_> = rules.iter().map(|r| r.rule_id.clone()).collect();
        assert_eq!(ids.len(), 118, "rule ids must be unique");
        for rule in &rules {
            assert!(rule.validate().is_empty(), "rule {} invalid", rule.rule_id);
            assert_eq!(rule.significance, 0);
        }
    }

    #[test]
    fn family_cardinalities_match_the_row_sums() {
        let family = |set: fn(&mut FamilyFlags)| {
            let mut flags = FamilyFlags::none();
            set(&mut flags);
            let config = RuleSetConfig { include_families: flags, ..Default::default() };
            generate_rule_set(&config).len()
        };
        assert_eq!(family(|f| f.inspection = true), 16);
        assert_eq!(family(|f| f.class_length = true), 2);
        assert_eq!(family(|f| f.method_length = true), 2);
        assert_eq!(family(|f| f.mccabe = true), 2);
        assert_eq!(family(|f| f.inspection_class_length = true), 32);
        assert_eq!(family(|f| f.inspection_method_length = true), 32);
        assert_eq!(family(|f| f.inspection_mccabe = true), 32);
    }

    #[test]
    fn generation_is_deterministic() {
        let a = generate_rule_set(&RuleSetConfig::default());
        let b = generate_rule_set(&RuleSetConfig::default());
        assert_eq!(a, b);
    }

    #[test]
    fn combination_rules_pair_each_severity_with_the_product_metric() {
        let mut flags = FamilyFlags::none();
        flags.inspection_mccabe = true;
        let config = RuleSetConfig { include_families: flags, ..Default::default() };
        let rules = generate_rule_set(&config);
        assert!(rules.iter().all(|r| r.combinator == Combinator::Conjunction));
        assert!(rules.iter().all(|r| matches!(
            r.secondary_metric,
            Some(MetricSpec::Product { metric: ProductMetric::Mccabe })
        )));
        let assumptions: BTreeSet<_> = rules.iter().map(|r| r.assumption_id.clone()).collect();
        assert_eq!(
            assumptions,
            ["A.XI", "A.XII", "A.XIII", "A.XIV"].iter().map(|s| s.to_string()).collect()
        );
    }

    #[test]
    fn top_n_families_are_generated_on_request() {
        let config = RuleSetConfig { include_top_n_families: true, ..Default::default() };
        let rules = generate_rule_set(&config);
        assert_eq!(rules.len(), 118 + 40);
        let top_n: Vec<_> =
            rules.iter().filter(|r| matches!(r.condition, Condition::TopN { .. })).collect();
        assert_eq!(top_n.len(), 40);
        for rule in top_n {
            assert!(rule.validate().is_empty(), "rule {} invalid", rule.rule_id);
        }
    }

    #[test]
    fn instruction_sentence_for_inspection_content() {
        let rules = generate_rule_set(&RuleSetConfig::default());
        let rule = rules.iter().find(|r| r.rule_id == "dc-all-large").unwrap();
        assert_eq!(
            describe_rule(rule),
            "Focus testing on those code classes with large defect content considering all inspection defects."
        );
    }

    #[test]
    fn instruction_sentence_for_content_and_complexity() {
        let rules = generate_rule_set(&RuleSetConfig::default());
        let rule = rules.iter().find(|r| r.rule_id == "dc-high-large+mcc-low").unwrap();
        assert_eq!(rule.assumption_id, "A.XII");
        assert_eq!(
            describe_rule(rule),
            "Focus testing on code classes with large defect content and low complexity considering high severity inspection defects and low McCabe complexity."
        );
    }

    #[test]
    fn instruction_sentence_for_large_classes() {
        let rules = generate_rule_set(&RuleSetConfig::default());
        let rule = rules.iter().find(|r| r.rule_id == "len-large").unwrap();
        assert_eq!(rule.assumption_id, "A.III");
        assert_eq!(describe_rule(rule), "Focus testing on large code classes.");
    }

    #[test]
    fn instruction_sentence_for_ranked_rules() {
        let config = RuleSetConfig::default();
        let rules = generate_top_n_rules(&config);
        let n1 = rules.iter().find(|r| r.rule_id == "N1-top3").unwrap();
        assert_eq!(
            describe_rule(n1),
            "Focus testing on the top-3 code classes ranked by large defect content considering all inspection defects."
        );
        let n6 = rules.iter().find(|r| r.rule_id == "N6-top5").unwrap();
        assert_eq!(describe_rule(n6), "Focus testing on the top-5 largest code classes.");
        let n9 = rules.iter().find(|r| r.rule_id == "N9-top3").unwrap();
        assert_eq!(
            describe_rule(n9),
            "Focus testing on the top-3 code classes ranked by large defect content considering all inspection defects or by large class length."
        );
    }

    #[test]
    fn config_validation_flags_bad_values() {
        let mut config = RuleSetConfig { percent: 0.0, ..Default::default() };
        assert_eq!(config.validate().len(), 1);
        config.percent = 0.8;
        config.top_n_list = vec![3, 3, 5];
        assert_eq!(config.validate().len(), 1);
        config.top_n_list = vec![3, 5, 8, 10];
        assert!(config.validate().is_empty());
    }
}
