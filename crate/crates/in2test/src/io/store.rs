//! Flat-file store for runs, rule sets, evaluations, trend snapshots, and
//! reports.
//!
//! Artifacts are pretty-printed JSON addressed purely by the ids carried in
//! the data, so identical inputs always produce byte-identical store
//! contents. Writes go to a temp file first and are renamed into place.

use std::fs;
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluate::TrendClass;
use crate::model::{EvaluationResult, Prioritization, QaRun};
use crate::monitor::MonitorNote;
use crate::rules::RuleSet;

/// One stored evaluation: every rule of a set scored against one run. The
/// run timestamp is carried so cross-run folds can order evaluations
/// chronologically without re-reading the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationRecord {
    pub rule_set_id: String,
    pub run_id: String,
    pub run_timestamp: DateTime<Utc>,
    pub results: Vec<EvaluationResult>,
}

/// Content-hash-free flat-file store rooted at one directory.
#[derive(Debug, Clone)]
pub struct RunStore {
    root: PathBuf,
}

impl RunStore {
    /// Opens (and creates, if needed) a store under `root`.
    pub fn open(root: impl Into<PathBuf>) -> Result<RunStore> {
        let store = RunStore { root: root.into() };
        for dir in ["runs", "rulesets", "prioritizations", "evaluations", "monitor", "trends", "reports"] {
            let path = store.root.join(dir);
            fs::create_dir_all(&path).map_err(|e| Error::io(path, e))?;
        }
        Ok(store)
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn write_atomic(&self, path: &Path, bytes: &[u8]) -> Result<()> {
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
        fs::rename(&tmp, path).map_err(|e| Error::io(path, e))?;
        Ok(())
    }

    fn put_json<T: Serialize>(&self, path: PathBuf, value: &T) -> Result<PathBuf> {
        let mut text = serde_json::to_string_pretty(value)
            .map_err(|e| Error::Parse { path: path.clone(), message: e.to_string() })?;
        text.push('\n');
        self.write_atomic(&path, text.as_bytes())?;
        Ok(path)
    }

    fn get_json<T: DeserializeOwned>(&self, path: &Path, kind: &'static str, id: &str) -> Result<T> {
        if !path.exists() {
            return Err(Error::NotFound { kind, id: id.to_string() });
        }
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Parse { path: path.to_path_buf(), message: e.to_string() })
    }

    pub fn put_run(&self, run: &QaRun) -> Result<PathBuf> {
        let violations = run.validate();
        if !violations.is_empty() {
            return Err(Error::validation(violations));
        }
        self.put_json(self.root.join("runs").join(format!("{}.json", run.id)), run)
    }

    pub fn get_run(&self, id: &str) -> Result<QaRun> {
        self.get_json(&self.root.join("runs").join(format!("{id}.json")), "run", id)
    }

    pub fn list_runs(&self) -> Result<Vec<String>> {
        self.list_ids("runs")
    }

    pub fn put_rule_set(&self, rule_set: &RuleSet) -> Result<PathBuf> {
        self.put_json(self.root.join("rulesets").join(format!("{}.json", rule_set.id)), rule_set)
    }

    pub fn get_rule_set(&self, id: &str) -> Result<RuleSet> {
        self.get_json(&self.root.join("rulesets").join(format!("{id}.json")), "rule set", id)
    }

    pub fn list_rule_sets(&self) -> Result<Vec<String>> {
        self.list_ids("rulesets")
    }

    pub fn put_prioritizations(
        &self,
        rule_set_id: &str,
        run_id: &str,
        prioritizations: &[Prioritization],
    ) -> Result<PathBuf> {
        self.put_json(
            self.root.join("prioritizations").join(format!("{rule_set_id}__{run_id}.json")),
            &prioritizations,
        )
    }

    /// Stores an evaluation; the referenced run and rule set must already be
    /// in the store.
    pub fn put_evaluation(&self, record: &EvaluationRecord) -> Result<PathBuf> {
        self.get_run(&record.run_id)?;
        self.get_rule_set(&record.rule_set_id)?;
        self.put_json(
            self.root
                .join("evaluations")
                .join(format!("{}__{}.json", record.rule_set_id, record.run_id)),
            record,
        )
    }

    /// All stored evaluations of one rule set, ordered by run timestamp and
    /// then run id.
    pub fn list_evaluations(&self, rule_set_id: &str) -> Result<Vec<EvaluationRecord>> {
        let dir = self.root.join("evaluations");
        let prefix = format!("{rule_set_id}__");
        let mut records = Vec::new();
        for name in self.list_ids("evaluations")? {
            if name.starts_with(&prefix) {
                let path = dir.join(format!("{name}.json"));
                records.push(self.get_json::<EvaluationRecord>(&path, "evaluation", &name)?);
            }
        }
        records.retain(|r| r.rule_set_id == rule_set_id);
        records.sort_by(|a, b| {
            a.run_timestamp.cmp(&b.run_timestamp).then_with(|| a.run_id.cmp(&b.run_id))
        });
        Ok(records)
    }

    pub fn put_monitor_notes(&self, run_id: &str, notes: &[MonitorNote]) -> Result<PathBuf> {
        self.put_json(self.root.join("monitor").join(format!("{run_id}.json")), &notes)
    }

    /// Monitor notes previously attached to a run, if any.
    pub fn get_monitor_notes(&self, run_id: &str) -> Result<Option<Vec<MonitorNote>>> {
        let path = self.root.join("monitor").join(format!("{run_id}.json"));
        if !path.exists() {
            return Ok(None);
        }
        self.get_json(&path, "monitor notes", run_id).map(Some)
    }

    pub fn put_trend(&self, rule_set_id: &str, classes: &[TrendClass]) -> Result<PathBuf> {
        self.put_json(self.root.join("trends").join(format!("{rule_set_id}.json")), &classes)
    }

    /// Directory for a run's rendered reports (created on demand).
    pub fn report_dir(&self, run_id: &str) -> Result<PathBuf> {
        let dir = self.root.join("reports").join(run_id);
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        Ok(dir)
    }

    pub fn write_report_file(&self, run_id: &str, name: &str, contents: &str) -> Result<PathBuf> {
        let path = self.report_dir(run_id)?.join(name);
        self.write_atomic(&path, contents.as_bytes())?;
        Ok(path)
    }

    fn list_ids(&self, subdir: &str) -> Result<Vec<String>> {
        let dir = self.root.join(subdir);
        let mut ids = Vec::new();
        let entries = fs::read_dir(&dir).map_err(|e| Error::io(&dir, e))?;
        for entry in entries {
            let entry = entry.map_err(|e| Error::io(&dir, e))?;
            let name = entry.file_name().to_string_lossy().to_string();
            if let Some(stem) = name.strip_suffix(".json") {
                ids.push(stem.to_string());
            }
        }
        ids.sort();
        Ok(ids)
    }
}
