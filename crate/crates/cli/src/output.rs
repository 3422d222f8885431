//! Command reports and their text and structured renderings.

use grla_core::report::{Check, Report};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

/// A titled group of facts and checks. Checks in an informational section
/// are shown but do not affect the exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub title: String,
    pub counted: bool,
    pub facts: Vec<(String, String)>,
    pub checks: Vec<Check>,
}

impl Section {
    pub fn new(title: impl Into<String>) -> Self {
        Section {
            title: title.into(),
            counted: true,
            facts: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn info(title: impl Into<String>) -> Self {
        Section {
            counted: false,
            ..Section::new(title)
        }
    }

    pub fn fact(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.facts.push((key.into(), value.to_string()));
        self
    }

    pub fn checks(&mut self, r: &Report) -> &mut Self {
        self.checks.extend(r.checks.iter().cloned());
        self
    }

    pub fn check(
        &mut self,
        name: &'static str,
        pass: bool,
        detail: impl Into<String>,
    ) -> &mut Self {
        self.checks.push(Check {
            name,
            pass,
            detail: detail.into(),
        });
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub command: String,
    pub input: String,
    pub kind: String,
    pub settings: Vec<(String, String)>,
    pub sections: Vec<Section>,
    /// A computation that could not be completed because the input violates an axiom.
    pub error: Option<String>,
}

impl Output {
    pub fn new(command: &str, input: &str, kind: &str) -> Self {
        Output {
            command: command.into(),
            input: input.into(),
            kind: kind.into(),
            settings: Vec::new(),
            sections: Vec::new(),
            error: None,
        }
    }

    pub fn failed_checks(&self) -> Vec<&Check> {
        self.sections
            .iter()
            .filter(|s| s.counted)
            .flat_map(|s| s.checks.iter())
            .filter(|c| !c.pass)
            .collect()
    }

    pub fn passed(&self) -> bool {
        self.error.is_none() && self.failed_checks().is_empty()
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn section(&self, title: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.title == title)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.render_text(),
            Format::Structured => {
                let mut s =
                    serde_json::to_string_pretty(&self.to_json()).expect("json values serialize");
                s.push('\n');
                s
            }
        }
    }

    fn status(&self) -> &'static str {
        if self.error.is_some() {
            "error"
        } else if self.passed() {
            "pass"
        } else {
            "fail"
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "command: {}\ninput: {}\nkind: {}\n",
            self.command, self.input, self.kind
        ));
        for (k, v) in &self.settings {
            out.push_str(&format!("{}: {}\n", k, v));
        }
        for s in &self.sections {
            out.push_str(&format!(
                "\n[{}]{}\n",
                s.title,
                if s.counted { "" } else { " (informational)" }
            ));
            for (k, v) in &s.facts {
                out.push_str(&format!("{}: {}\n", k, v));
            }
            for c in &s.checks {
                out.push_str(&format!("{}\n", c));
            }
        }
        out.push('\n');
        if let Some(e) = &self.error {
            out.push_str(&format!("error: {}\n", e));
        }
        let failed: Vec<&str> = self.failed_checks().iter().map(|c| c.name).collect();
        if !failed.is_empty() {
            out.push_str(&format!("failed: {}\n", failed.join(", ")));
        }
        out.push_str(&format!(
            "status: {} (exit {})\n",
            self.status(),
            self.exit_code()
        ));
        out
    }

    pub fn to_json(&self) -> Value {
        let sections: Vec<Value> = self
            .sections
            .iter()
            .map(|s| {
                json!({
                    "title": s.title,
                    "counted": s.counted,
                    "facts": s.facts.iter().map(|(k, v)| json!({"key": k, "value": v})).collect::<Vec<_>>(),
                    "checks": s.checks.iter().map(|c| json!({"name": c.name, "pass": c.pass, "detail": c.detail})).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({
            "command": self.command,
            "input": self.input,
            "kind": self.kind,
            "settings": self.settings.iter().map(|(k, v)| json!({"key": k, "value": v})).collect::<Vec<_>>(),
            "sections": sections,
            "error": self.error,
            "failed": self.failed_checks().iter().map(|c| c.name).collect::<Vec<_>>(),
            "status": self.status(),
            "exit_code": self.exit_code(),
        })
    }
}
