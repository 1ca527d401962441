//! Structured command reports: per-stage results, printed as plain text or
//! JSON, with the exit-code convention 0 = pass, 1 = fail, 2 = usage/parse
//! error.

use serde::Serialize;

#[derive(Serialize, Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Serialize, Clone, Debug)]
pub struct StageResult {
    pub stage: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Serialize, Clone, Debug)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub stages: Vec<StageResult>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            status: Status::Pass,
            stages: Vec::new(),
        }
    }

    pub fn push(&mut self, stage: impl Into<String>, status: Status, detail: impl Into<String>) {
        self.status = self.status.max(status);
        self.stages.push(StageResult {
            stage: stage.into(),
            status,
            detail: detail.into(),
        });
    }

    pub fn pass(&mut self, stage: impl Into<String>, detail: impl Into<String>) {
        self.push(stage, Status::Pass, detail);
    }

    pub fn fail(&mut self, stage: impl Into<String>, detail: impl Into<String>) {
        self.push(stage, Status::Fail, detail);
    }

    pub fn error(&mut self, stage: impl Into<String>, detail: impl Into<String>) {
        self.push(stage, Status::Error, detail);
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Error => 2,
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for s in &self.stages {
            let tag = match s.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Error => "ERROR",
            };
            out.push_str(&format!("[{tag}] {}: {}\n", s.stage, s.detail));
        }
        let overall = match self.status {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        };
        out.push_str(&format!("{}: {overall}\n", self.command));
        out
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            self.render_json()
        } else {
            self.render_text()
        }
    }
}
