//! Shared fixture runs for unit tests: two calibration runs over eight code
//! classes with known inspection counts, test-defect counts, and product
//! metrics.
//!
//! Run 1 covers classes I-IV (inspection defects 26/6/27/8, test defects
//! 3/0/4/0), run 2 covers classes V-VIII (14/40/39/7 and 0/0/6/0).

use std::collections::{BTreeMap, BTreeSet};

use chrono::{TimeZone, Utc};

use crate::model::{DefectRecord, FindingKind, Part, PartKind, Phase, QaRun, Severity};

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

fn cycle_severity(index: usize) -> Severity {
    match index % 3 {
        0 => Severity::High,
        1 => Severity::Medium,
        _ => Severity::Low,
    }
}

fn push_defects(
    defects: &mut Vec<DefectRecord>,
    part_id: &str,
    phase: Phase,
    count: usize,
) {
    let prefix = match phase {
        Phase::Inspection => "i",
        Phase::Test => "t",
    };
    for k in 0..count {
        defects.push(DefectRecord {
            id: format!("{prefix}-{part_id}-{:02}", k + 1),
            part_id: part_id.to_string(),
            phase,
            severity: cycle_severity(k),
            finding_kind: FindingKind::Defect,
            description: None,
        });
    }
}

fn run(id: &str, parts: Vec<Part>, counts: &[(&str, usize, usize)]) -> QaRun {
    let mut defects = Vec::new();
    for (part_id, inspection, test) in counts {
        push_defects(&mut defects, part_id, Phase::Inspection, *inspection);
        push_defects(&mut defects, part_id, Phase::Test, *test);
    }
    QaRun {
        id: id.to_string(),
        timestamp: Utc.with_ymd_and_hms(2024, 3, 1, 10, 0, 0).unwrap(),
        context_notes: String::new(),
        parts,
        defects,
        inspection_coverage: BTreeMap::new(),
        reading_rate: None,
    }
}

pub(crate) fn run1() -> QaRun {
    run(
        "run-1",
        vec![
            part("I", 469, 4.0, 2),
            part("II", 37, 9.0, 5),
            part("III", 275, 7.0, 2),
            part("IV", 243, 177.0, 44),
        ],
        &[("I", 26, 3), ("II", 6, 0), ("III", 27, 4), ("IV", 8, 0)],
    )
}

pub(crate) fn run2() -> QaRun {
    run(
        "run-2",
        vec![
            part("V", 231, 3.0, 2),
            part("VI", 1364, 14.0, 4),
            part("VII", 701, 8.0, 3),
            part("VIII", 115, 7.0, 2),
        ],
        &[("V", 14, 0), ("VI", 40, 0), ("VII", 39, 6), ("VIII", 7, 0)],
    )
}

/// Run with 5 inspection findings on part I, two of which are comments.
pub(crate) fn run_with_comments() -> QaRun {
    let mut qa = run("run-c", vec![part("I", 100, 4.0, 2)], &[("I", 3, 1)]);
    for k in 0..2 {
        qa.defects.push(DefectRecord {
            id: format!("c-I-{:02}", k + 1),
            part_id: "I".to_string(),
            phase: Phase::Inspection,
            severity: Severity::Unclassified,
            finding_kind: FindingKind::Comment,
            description: Some("inspector remark".to_string()),
        });
    }
    qa
}

/// Single-part run with configurable defect/comment counts and coverage.
pub(crate) fn synthetic_run(defects: u8, comments: u8, coverage: f64) -> QaRun {
    let mut qa = run("run-s", vec![part("P", 200, 5.0, 3)], &[("P", defects as usize, 0)]);
    for k in 0..comments {
        qa.defects.push(DefectRecord {
            id: format!("c-P-{:02}", k + 1),
            part_id: "P".to_string(),
            phase: Phase::Inspection,
            severity: Severity::Unclassified,
            finding_kind: FindingKind::Comment,
            description: None,
        });
    }
    qa.inspection_coverage.insert("P".to_string(), coverage);
    qa
}

pub(crate) fn ids(parts: &[&str]) -> BTreeSet<String> {
    parts.iter().map(|s| s.to_string()).collect()
}
