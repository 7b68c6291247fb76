//! Check reports: one section per run statement, one entry per check,
//! rendered as stable text or JSON. Two runs of the same script produce
//! byte-identical output.

use serde_json::{json, Value};

pub const SCHEMA: &str = "fincat-report/1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail { witness: String },
    Skipped { reason: String },
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub details: Vec<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: Status::Pass,
            details: Vec::new(),
        }
    }

    pub fn fail(name: impl Into<String>, witness: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: Status::Fail {
                witness: witness.into(),
            },
            details: Vec::new(),
        }
    }

    pub fn skipped(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: Status::Skipped {
                reason: reason.into(),
            },
            details: Vec::new(),
        }
    }

    pub fn detail(mut self, line: impl Into<String>) -> Self {
        self.details.push(line.into());
        self
    }

    pub fn details(mut self, lines: impl IntoIterator<Item = String>) -> Self {
        self.details.extend(lines);
        self
    }
}

#[derive(Debug, Clone)]
pub struct Section {
    pub command: String,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub sections: Vec<Section>,
}

impl Report {
    pub fn counts(&self) -> (usize, usize, usize) {
        let mut passed = 0;
        let mut failed = 0;
        let mut skipped = 0;
        for section in &self.sections {
            for check in &section.checks {
                match check.status {
                    Status::Pass => passed += 1,
                    Status::Fail { .. } => failed += 1,
                    Status::Skipped { .. } => skipped += 1,
                }
            }
        }
        (passed, failed, skipped)
    }

    pub fn all_pass(&self) -> bool {
        self.counts().1 == 0
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("fincat report ({SCHEMA})\n"));
        for section in &self.sections {
            out.push('\n');
            out.push_str(&format!("== {}\n", section.command));
            for check in &section.checks {
                match &check.status {
                    Status::Pass => out.push_str(&format!("[pass] {}\n", check.name)),
                    Status::Fail { witness } => {
                        out.push_str(&format!("[fail] {}\n", check.name));
                        out.push_str(&format!("    witness: {witness}\n"));
                    }
                    Status::Skipped { reason } => {
                        out.push_str(&format!("[skip] {}\n", check.name));
                        out.push_str(&format!("    reason: {reason}\n"));
                    }
                }
                for line in &check.details {
                    out.push_str(&format!("    {line}\n"));
                }
            }
        }
        let (passed, failed, skipped) = self.counts();
        out.push('\n');
        out.push_str(&format!(
            "summary: {passed} passed, {failed} failed, {skipped} skipped\n"
        ));
        out
    }

    pub fn render_json(&self) -> String {
        let sections: Vec<Value> = self
            .sections
            .iter()
            .map(|section| {
                let checks: Vec<Value> = section
                    .checks
                    .iter()
                    .map(|check| {
                        let mut entry = json!({
                            "name": check.name,
                            "details": check.details,
                        });
                        let obj = entry.as_object_mut().unwrap();
                        match &check.status {
                            Status::Pass => {
                                obj.insert("status".into(), json!("pass"));
                            }
                            Status::Fail { witness } => {
                                obj.insert("status".into(), json!("fail"));
                                obj.insert("witness".into(), json!(witness));
                            }
                            Status::Skipped { reason } => {
                                obj.insert("status".into(), json!("skipped"));
                                obj.insert("reason".into(), json!(reason));
                            }
                        }
                        entry
                    })
                    .collect();
                json!({
                    "command": section.command,
                    "checks": checks,
                })
            })
            .collect();
        let (passed, failed, skipped) = self.counts();
        let doc = json!({
            "schema": SCHEMA,
            "sections": sections,
            "summary": {
                "passed": passed,
                "failed": failed,
                "skipped": skipped,
            },
        });
        let mut text = serde_json::to_string_pretty(&doc).expect("reports are valid JSON");
        text.push('\n');
        text
    }
}
