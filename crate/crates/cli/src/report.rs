use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Certified,
    Failed,
    Inconclusive,
    UnspecifiedConstant,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Certified => "certified",
            Status::Failed => "failed",
            Status::Inconclusive => "inconclusive",
            Status::UnspecifiedConstant => "unspecified-constant",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GoalRecord {
    pub name: String,
    pub status: Status,
    pub detail: String,
    /// Relation instances in the certificate, when there is one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate_entries: Option<usize>,
    pub time_ms: f64,
}

impl GoalRecord {
    pub fn new(name: impl Into<String>, status: Status, detail: impl Into<String>) -> Self {
        GoalRecord { name: name.into(), status, detail: detail.into(), certificate_entries: None, time_ms: 0.0 }
    }

    pub fn entries(mut self, n: usize) -> Self {
        self.certificate_entries = Some(n);
        self
    }

    pub fn took(mut self, d: Duration) -> Self {
        self.time_ms = ms(d);
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DiscrepancyRecord {
    /// Module or derivation the record comes from.
    pub source: String,
    pub location: String,
    pub printed: String,
    pub computed: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<String>,
    pub citation: String,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    #[serde(rename = "type")]
    pub ty: Option<String>,
    pub goals: Vec<GoalRecord>,
    pub discrepancies: Vec<DiscrepancyRecord>,
    pub summary: Summary,
    pub timings: Timings,
    pub data: Value,
}

#[derive(Debug, Default, Serialize)]
pub struct Summary {
    pub certified: usize,
    pub failed: usize,
    pub inconclusive: usize,
    #[serde(rename = "unspecified-constant")]
    pub unspecified_constant: usize,
}

#[derive(Debug, Default, Serialize)]
pub struct Timings {
    pub total_ms: f64,
}

pub fn ms(d: Duration) -> f64 {
    (d.as_secs_f64() * 1e6).round() / 1e3
}

impl Report {
    pub fn new(command: &str, ty: Option<String>) -> Self {
        Report {
            tool: "qaffine",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            ty,
            goals: Vec::new(),
            discrepancies: Vec::new(),
            summary: Summary::default(),
            timings: Timings::default(),
            data: Value::Object(Default::default()),
        }
    }

    pub fn set(&mut self, key: &str, v: Value) {
        if let Value::Object(m) = &mut self.data {
            m.insert(key.to_string(), v);
        }
    }

    /// Sort goals by name and recount.
    pub fn finish(&mut self, total: Duration) {
        self.goals.sort_by(|a, b| a.name.cmp(&b.name));
        let mut s = Summary::default();
        for g in &self.goals {
            match g.status {
                Status::Certified => s.certified += 1,
                Status::Failed => s.failed += 1,
                Status::Inconclusive => s.inconclusive += 1,
                Status::UnspecifiedConstant => s.unspecified_constant += 1,
            }
        }
        self.summary = s;
        self.timings.total_ms = ms(total);
    }

    pub fn exit_code(&self, strict: bool) -> i32 {
        let bad = self.goals.iter().any(|g| match g.status {
            Status::Failed => true,
            Status::Inconclusive | Status::UnspecifiedConstant => strict,
            Status::Certified => false,
        });
        i32::from(bad)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let ty = self.ty.as_deref().map(|t| format!(" {t}")).unwrap_or_default();
        let _ = writeln!(out, "qaffine {}: {}{}", self.version, self.command, ty);
        for g in &self.goals {
            let _ = write!(out, "  {:<22} {}", g.status.name(), g.name);
            if !g.detail.is_empty() {
                let _ = write!(out, "  ({})", g.detail);
            }
            out.push('\n');
        }
        for d in &self.discrepancies {
            let _ = writeln!(out, "  discrepancy [{}] {}: printed {} vs computed {}", d.citation, d.location, d.printed, shorten(&d.computed));
            if let Some(r) = &d.ratio {
                let _ = writeln!(out, "      printed/computed = {r}");
            }
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "{} certified, {} failed, {} inconclusive, {} unspecified-constant, {} discrepancies; {:.1} ms",
            s.certified,
            s.failed,
            s.inconclusive,
            s.unspecified_constant,
            self.discrepancies.len(),
            self.timings.total_ms
        );
        out
    }
}

fn shorten(s: &str) -> String {
    const MAX: usize = 160;
    if s.chars().count() <= MAX {
        s.to_string()
    } else {
        let head: String = s.chars().take(MAX).collect();
        format!("{head}…")
    }
}
