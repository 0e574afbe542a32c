//! Recorded interactions with expected outcomes.
//!
//! ```json
//! {
//!   "site": "../mini-congress.xml",
//!   "steps": [
//!     {"utterance": ["d"], "accepted": true, "state": "A[PE[A[PE[s] PE[h]] ga] PE[A[PE[h]] al]]"},
//!     {"utterance": ["ga"], "completed": "/ga/s/d"}
//!   ]
//! }
//! ```
//!
//! A trace names either a `script` or a `site` path (relative to the trace
//! file). Site traces run through an interaction manager, so dependencies and
//! collapsing apply and `completed` can be checked.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use staging_core::dialog::{apply_utterance, parse_script, render_script, DialogNode, ParseError};
use staging_core::site::PageRef;
use staging_core::Utterance;
use staging_manager::{InteractionManager, ManagerConfig, ManagerError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("{}: {source}", path.display())]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("trace needs exactly one of `script` or `site`")]
    Source,
    #[error("step {step}: expected state does not parse: {source}")]
    ExpectedState { step: usize, source: ParseError },
    #[error("step {step}: `completed` only applies to site traces")]
    CompletedOnScript { step: usize },
    #[error(transparent)]
    Script(#[from] ParseError),
    #[error(transparent)]
    Manager(#[from] ManagerError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub script: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub site: Option<PathBuf>,
    pub steps: Vec<TraceStep>,
    #[serde(skip)]
    pub base: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceStep {
    pub utterance: Utterance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub accepted: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub completed: Option<PageRef>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepReport {
    pub utterance: Utterance,
    pub accepted: bool,
    pub state: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub completed: Option<PageRef>,
    pub mismatches: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReplayReport {
    pub initial: String,
    pub steps: Vec<StepReport>,
}

impl ReplayReport {
    pub fn passed(&self) -> bool {
        self.steps.iter().all(|s| s.mismatches.is_empty())
    }

    pub fn write_text(&self, out: &mut dyn Write) -> std::io::Result<()> {
        writeln!(out, "{}", self.initial)?;
        for (i, s) in self.steps.iter().enumerate() {
            let verdict = if s.mismatches.is_empty() { "ok" } else { "MISMATCH" };
            let mark = if s.accepted { "" } else { " (rejected)" };
            writeln!(out, "{} {}{mark} {verdict}: {}", i + 1, s.utterance, s.state)?;
            if let Some(page) = &s.completed {
                writeln!(out, "  completed {page}")?;
            }
            for m in &s.mismatches {
                writeln!(out, "  {m}")?;
            }
        }
        let bad = self.steps.iter().filter(|s| !s.mismatches.is_empty()).count();
        writeln!(out, "{} steps, {bad} mismatched", self.steps.len())
    }
}

impl TraceFile {
    pub fn load(path: &Path) -> Result<Self, TraceError> {
        let text = std::fs::read_to_string(path).map_err(|source| TraceError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        let mut file: TraceFile = serde_json::from_str(&text).map_err(|source| TraceError::Json {
            path: path.to_path_buf(),
            source,
        })?;
        file.base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        file.validate()?;
        Ok(file)
    }

    pub fn validate(&self) -> Result<(), TraceError> {
        if self.script.is_some() == self.site.is_some() {
            return Err(TraceError::Source);
        }
        for (i, step) in self.steps.iter().enumerate() {
            if let Some(state) = &step.state {
                parse_script(state).map_err(|source| TraceError::ExpectedState { step: i + 1, source })?;
            }
            if self.script.is_some() && step.completed.is_some() {
                return Err(TraceError::CompletedOnScript { step: i + 1 });
            }
        }
        Ok(())
    }

    pub fn replay(&self) -> Result<ReplayReport, TraceError> {
        self.validate()?;
        match (&self.script, &self.site) {
            (Some(script), None) => Ok(self.replay_script(parse_script(script)?)),
            (None, Some(site)) => {
                let path = self.base.join(site);
                let document = std::fs::read_to_string(&path).map_err(|source| TraceError::Read { path, source })?;
                self.replay_site(&document)
            }
            _ => Err(TraceError::Source),
        }
    }

    fn replay_script(&self, start: DialogNode) -> ReplayReport {
        let mut current = start.clone();
        let steps = self
            .steps
            .iter()
            .map(|step| {
                let r = apply_utterance(&current, &step.utterance);
                if r.accepted {
                    current = r.result;
                }
                check(step, r.accepted, render_script(&current), None)
            })
            .collect();
        ReplayReport {
            initial: render_script(&start),
            steps,
        }
    }

    fn replay_site(&self, document: &str) -> Result<ReplayReport, TraceError> {
        let manager = InteractionManager::new(ManagerConfig::default());
        let site = manager.ingest_site(document)?;
        let token = manager.create_session(&site.site_id)?.session;
        let initial = render_script(&manager.snapshot(token.as_str())?.dialog_state);
        let mut steps = Vec::new();
        for step in &self.steps {
            let r = manager.submit_input(token.as_str(), &step.utterance)?;
            let state = render_script(&manager.snapshot(token.as_str())?.dialog_state);
            steps.push(check(step, !r.rejected, state, r.completed));
        }
        Ok(ReplayReport { initial, steps })
    }
}

fn check(step: &TraceStep, accepted: bool, state: String, completed: Option<PageRef>) -> StepReport {
    let mut mismatches = Vec::new();
    if let Some(want) = step.accepted {
        if want != accepted {
            mismatches.push(format!("accepted: expected {want}, got {accepted}"));
        }
    }
    if let Some(want) = &step.state {
        let want = parse_script(want).map(|n| render_script(&n)).unwrap_or_else(|_| want.clone());
        if want != state {
            mismatches.push(format!("state: expected {want}"));
        }
    }
    if let Some(want) = &step.completed {
        if completed.as_ref() != Some(want) {
            let got = completed.clone().unwrap_or_else(|| "nothing".into());
            mismatches.push(format!("completed: expected {want}, got {got}"));
        }
    }
    StepReport {
        utterance: step.utterance.clone(),
        accepted,
        state,
        completed,
        mismatches,
    }
}
