//! Reports: one JSON object per check, written as JSON lines.
//!
//! Objects go through `serde_json::Value`, whose maps are key-sorted, so the
//! same job always serializes to the same bytes. Wall-clock timings are kept
//! out of the JSON for that reason and only go to stderr.

use std::fmt;

use bentcode_core::bent::Sign;
use bentcode_core::codes::{CodeSummary, SetKind};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    /// no exact comparison was made
    #[serde(rename = "INFO")]
    Info,
}

impl Status {
    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Info => "INFO",
        })
    }
}

#[derive(Debug, Clone)]
pub struct Line {
    pub check: String,
    pub status: Status,
    pub message: String,
    pub data: Value,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub job: Value,
    pub lines: Vec<Line>,
}

impl Report {
    pub fn new(job: Value) -> Report {
        Report {
            job,
            lines: Vec::new(),
        }
    }

    pub fn push(&mut self, check: impl Into<String>, status: Status, message: impl Into<String>, data: Value) {
        self.lines.push(Line {
            check: check.into(),
            status,
            message: message.into(),
            data,
        });
    }

    /// FAIL iff some exact comparison mismatched.
    pub fn overall(&self) -> Status {
        if self.lines.iter().any(|l| l.status == Status::Fail) {
            Status::Fail
        } else {
            Status::Pass
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.overall() {
            Status::Fail => 1,
            _ => 0,
        }
    }

    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        let mut emit = |v: Value| {
            out.push_str(&serde_json::to_string(&v).expect("Value always serializes"));
            out.push('\n');
        };
        emit(json!({ "job": self.job }));
        for l in &self.lines {
            emit(json!({
                "check": l.check,
                "status": l.status,
                "data": l.data,
            }));
        }
        emit(json!({ "overall": self.overall() }));
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(&format!("{} {}: {}\n", l.status, l.check, l.message));
        }
        out.push_str(&format!("overall: {}\n", self.overall()));
        out
    }
}

pub fn sign_json(s: Option<Sign>) -> Value {
    match s {
        Some(s) => json!(s.value()),
        None => Value::Null,
    }
}

/// The serialized form of a code summary.
#[derive(Debug, Clone, Serialize)]
pub struct CodeSummaryJson {
    pub p: u32,
    pub m: u32,
    pub family: String,
    pub params: Value,
    pub set_kind: &'static str,
    pub punctured: bool,
    pub n: u64,
    pub k: u32,
    pub d: Option<u64>,
    pub distribution: Vec<[u64; 2]>,
}

impl CodeSummaryJson {
    pub fn new(cs: &CodeSummary, family: &str, params: Value, kind: SetKind, punctured: bool) -> CodeSummaryJson {
        CodeSummaryJson {
            p: cs.p,
            m: cs.m,
            family: family.to_string(),
            params,
            set_kind: kind.name(),
            punctured,
            n: cs.n,
            k: cs.k,
            d: cs.d,
            distribution: cs.distribution.iter().map(|&(w, a)| [w, a]).collect(),
        }
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("plain data serializes")
    }
}
