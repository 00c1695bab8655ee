//! Inspection-quality monitoring: checks reading rate and inspection defect
//! density against configured reference ranges before the results drive any
//! prioritization.
//!
//! The checks are advisory. Reference ranges come from the user's own history
//! or from literature; there are no built-in defaults, and missing data or
//! configuration produces informational notes instead of warnings.

use serde::{Deserialize, Serialize};

use crate::model::{FindingKind, Phase, QaRun};

/// An inclusive reference range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
}

impl Range {
    pub fn validate(&self, what: &str) -> Vec<String> {
        let mut violations = Vec::new();
        if !(self.lo.is_finite() && self.hi.is_finite()) || self.lo < 0.0 || self.hi < 0.0 {
            violations.push(format!("{what}: bounds must be non-negative numbers"));
        }
        if self.lo > self.hi {
            violations.push(format!("{what}: lo must not exceed hi"));
        }
        violations
    }
}

/// Reference ranges for monitoring, with a note on where they come from.
/// Reading rate is in inspected lines per hour; defect density in defects
/// per thousand lines of code.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MonitorConfig {
    pub reading_rate_range: Option<Range>,
    pub defect_density_range: Option<Range>,
    pub source: String,
}

impl MonitorConfig {
    pub fn validate(&self) -> Vec<String> {
        let mut violations = Vec::new();
        if let Some(range) = &self.reading_rate_range {
            violations.extend(range.validate("reading_rate_range"));
        }
        if let Some(range) = &self.defect_density_range {
            violations.extend(range.validate("defect_density_range"));
        }
        violations
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MonitorLevel {
    Info,
    Warning,
}

/// One monitoring finding. Warnings question the trustworthiness of the
/// inspection data; info notes record absent data or secondary observations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonitorNote {
    pub level: MonitorLevel,
    pub message: String,
}

impl MonitorNote {
    fn warning(message: String) -> Self {
        MonitorNote { level: MonitorLevel::Warning, message }
    }

    fn info(message: String) -> Self {
        MonitorNote { level: MonitorLevel::Info, message }
    }
}

/// Overall inspection defect density of a run in defects per KLoC, over the
/// lines actually inspected (coverage-adjusted). Inspector comments are not
/// counted. `None` when no lines were inspected.
pub fn inspection_defect_density(run: &QaRun) -> Option<f64> {
    let inspected_lines: f64 =
        run.parts.iter().map(|p| p.loc as f64 * run.coverage(&p.id)).sum();
    if inspected_lines <= 0.0 {
        return None;
    }
    let defects = run
        .defects
        .iter()
        .filter(|d| d.phase == Phase::Inspection && d.finding_kind == FindingKind::Defect)
        .count();
    Some(defects as f64 / (inspected_lines / 1000.0))
}

/// Checks a run's inspection signals against the configured ranges.
///
/// A reading rate above the range warns (too fast suggests a shallow
/// inspection); below the range it is noted informationally. A defect density
/// outside its range warns in either direction. Absent data or absent ranges
/// produce informational notes. The run itself is never modified and
/// prioritization may proceed regardless.
pub fn monitor_inspection(run: &QaRun, config: &MonitorConfig) -> Vec<MonitorNote> {
    let mut notes = Vec::new();

    match (config.reading_rate_range, run.reading_rate) {
        (Some(range), Some(rate)) => {
            if rate > range.hi {
                notes.push(MonitorNote::warning(format!(
                    "reading rate {} above reference {}",
                    rate, range.hi
                )));
            } else if rate < range.lo {
                notes.push(MonitorNote::info(format!(
                    "reading rate {} below reference {}",
                    rate, range.lo
                )));
            }
        }
        (Some(_), None) => {
            notes.push(MonitorNote::info("no reading rate recorded for this run".to_string()));
        }
        (None, _) => {
            notes.push(MonitorNote::info(
                "no reading rate reference range configured".to_string(),
            ));
        }
    }

    match (config.defect_density_range, inspection_defect_density(run)) {
        (Some(range), Some(density)) => {
            if density < range.lo {
                notes.push(MonitorNote::warning(format!(
                    "inspection defect density below reference ({:.2} < {})",
                    density, range.lo
                )));
            } else if density > range.hi {
                notes.push(MonitorNote::warning(format!(
                    "inspection defect density above reference ({:.2} > {})",
                    density, range.hi
                )));
            }
        }
        (Some(_), None) => {
            notes.push(MonitorNote::info(
                "no inspected lines recorded, defect density unavailable".to_string(),
            ));
        }
        (None, _) => {
            notes.push(MonitorNote::info(
                "no defect density reference range configured".to_string(),
            ));
        }
    }

    notes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testdata;
    use proptest::prelude::*;

    fn config(rate: (f64, f64), density: (f64, f64)) -> MonitorConfig {
        MonitorConfig {
            reading_rate_range: Some(Range { lo: rate.0, hi: rate.1 }),
            defect_density_range: Some(Range { lo: density.0, hi: density.1 }),
            source: "team history".to_string(),
        }
    }

    fn warnings(notes: &[MonitorNote]) -> Vec<&str> {
        notes
            .iter()
            .filter(|n| n.level == MonitorLevel::Warning)
            .map(|n| n.message.as_str())
            .collect()
    }

    #[test]
    fn in_range_signals_produce_no_warnings() {
        let mut run = testdata::run1();
        run.reading_rate = Some(250.0);
        // run 1 density: 67 defects over 1024 lines = ~65/KLoC
        let notes = monitor_inspection(&run, &config((100.0, 400.0), (5.0, 100.0)));
        assert!(warnings(&notes).is_empty());
        assert!(notes.is_empty());
    }

    #[test]
    fn fast_reading_rate_warns_with_the_bound() {
        let mut run = testdata::run1();
        run.reading_rate = Some(900.0);
        let notes = monitor_inspection(&run, &config((100.0, 400.0), (5.0, 100.0)));
        assert_eq!(warnings(&notes), vec!["reading rate 900 above reference 400"]);
    }

    #[test]
    fn slow_reading_rate_is_informational() {
        let mut run = testdata::run1();
        run.reading_rate = Some(50.0);
        let notes = monitor_inspection(&run, &config((100.0, 400.0), (5.0, 100.0)));
        assert!(warnings(&notes).is_empty());
        assert_eq!(notes.len(), 1);
        assert_eq!(notes[0].level, MonitorLevel::Info);
    }

    #[test]
    fn low_defect_density_warns() {
        let mut run = testdata::run1();
        run.reading_rate = Some(250.0);
        run.defects.retain(|d| d.id == "i-I-01");
        // 1 defect over 1024 lines = ~0.98/KLoC, below lo = 5
        let notes = monitor_inspection(&run, &config((100.0, 400.0), (5.0, 100.0)));
        let warns = warnings(&notes);
        assert_eq!(warns.len(), 1);
        assert!(warns[0].starts_with("inspection defect density below reference"));
    }

    #[test]
    fn absent_data_produces_informational_notes() {
        let run = testdata::run1(); // no reading rate recorded
        let notes = monitor_inspection(&run, &config((100.0, 400.0), (5.0, 100.0)));
        assert!(warnings(&notes).is_empty());
        assert_eq!(notes.len(), 1);
        assert!(notes[0].message.contains("no reading rate recorded"));
    }

    #[test]
    fn absent_config_produces_informational_notes() {
        let run = testdata::run1();
        let notes = monitor_inspection(&run, &MonitorConfig::default());
        assert_eq!(notes.len(), 2);
        assert!(notes.iter().all(|n| n.level == MonitorLevel::Info));
    }

    #[test]
    fn density_is_coverage_adjusted() {
        let mut run = testdata::synthetic_run(10, 0, 0.5);
        run.reading_rate = None;
        // 10 defects over 200 * 0.5 = 100 inspected lines = 100/KLoC
        assert_eq!(inspection_defect_density(&run), Some(100.0));
    }

    proptest! {
        #[test]
        fn widening_a_range_never_adds_warnings(
            rate in 0.0f64..1000.0,
            lo in 0.0f64..200.0,
            width in 0.0f64..500.0,
            widen in 0.0f64..300.0,
        ) {
            let mut run = testdata::run1();
            run.reading_rate = Some(rate);
            let narrow = config((lo, lo + width), (0.0, 1000.0));
            let wide = config(((lo - widen).max(0.0), lo + width + widen), (0.0, 1000.0));
            let narrow_warnings = warnings(&monitor_inspection(&run, &narrow)).len();
            let wide_warnings = warnings(&monitor_inspection(&run, &wide)).len();
            prop_assert!(wide_warnings <= narrow_warnings);
        }
    }
}
