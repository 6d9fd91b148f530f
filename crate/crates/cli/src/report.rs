//! Query results and their plain and structured renderings.

use std::fmt::Write;

use cuntz::axioms::{AxiomReport, Verdict};
use cuntz::Semigroup;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub role: String,
    pub value: String,
}

/// One verdict with the instance that decided it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub verdict: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witness: Vec<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multiplier: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub examined: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn from_report(s: &Semigroup, r: &AxiomReport<i128>) -> Self {
        Check {
            name: r.axiom.name().to_string(),
            verdict: r.verdict.name().to_string(),
            witness: r
                .rendered(s)
                .into_iter()
                .map(|(role, value)| Witness { role, value })
                .collect(),
            multiplier: r.multiplier,
            examined: Some(r.examined),
            note: r.note.clone(),
        }
    }

    /// A yes/no expectation, reported as pass or fail.
    pub fn expect(name: impl Into<String>, ok: bool) -> Self {
        Check {
            name: name.into(),
            verdict: if ok { Verdict::Pass } else { Verdict::Fail }
                .name()
                .to_string(),
            witness: vec![],
            multiplier: None,
            examined: None,
            note: None,
        }
    }

    pub fn with_witness(mut self, w: Vec<(String, String)>) -> Self {
        self.witness = w
            .into_iter()
            .map(|(role, value)| Witness { role, value })
            .collect();
        self
    }

    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Fail.name()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Outcome {
    Bool {
        value: bool,
    },
    Value {
        value: String,
    },
    List {
        values: Vec<String>,
    },
    Checks {
        checks: Vec<Check>,
    },
    Demo {
        lines: Vec<String>,
        checks: Vec<Check>,
    },
    Error {
        message: String,
    },
}

impl Outcome {
    pub fn checks(&self) -> &[Check] {
        match self {
            Outcome::Checks { checks } | Outcome::Demo { checks, .. } => checks,
            _ => &[],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub index: usize,
    pub command: String,
    pub query: String,
    pub result: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_us: Option<u128>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub queries: usize,
    pub failed: usize,
    pub errors: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub entries: Vec<Entry>,
    pub summary: Summary,
}

impl Report {
    pub fn new(entries: Vec<Entry>) -> Self {
        let summary = Summary {
            queries: entries.len(),
            failed: entries
                .iter()
                .filter(|e| e.result.checks().iter().any(Check::failed))
                .count(),
            errors: entries
                .iter()
                .filter(|e| matches!(e.result, Outcome::Error { .. }))
                .count(),
        };
        Report { entries, summary }
    }

    /// 0 on success, 1 when some check failed, 2 when some query errored.
    pub fn exit_code(&self) -> u8 {
        if self.summary.errors > 0 {
            2
        } else if self.summary.failed > 0 {
            1
        } else {
            0
        }
    }

    pub fn structured(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn plain(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let time = e
                .elapsed_us
                .map(|t| format!(" ({t} us)"))
                .unwrap_or_default();
            match &e.result {
                Outcome::Bool { value } => {
                    writeln!(out, "[{}] {}: {value}{time}", e.index, e.query)
                }
                Outcome::Value { value } => {
                    writeln!(out, "[{}] {}: {value}{time}", e.index, e.query)
                }
                Outcome::Error { message } => {
                    writeln!(out, "[{}] {}: error: {message}{time}", e.index, e.query)
                }
                Outcome::List { values } => {
                    let _ = writeln!(
                        out,
                        "[{}] {}: {} items{time}",
                        e.index,
                        e.query,
                        values.len()
                    );
                    values.iter().try_for_each(|v| writeln!(out, "    {v}"))
                }
                Outcome::Checks { checks } => {
                    let _ = writeln!(out, "[{}] {}{time}", e.index, e.query);
                    checks
                        .iter()
                        .try_for_each(|c| writeln!(out, "    {}", plain_check(c)))
                }
                Outcome::Demo { lines, checks } => {
                    let _ = writeln!(out, "[{}] {}{time}", e.index, e.query);
                    lines
                        .iter()
                        .try_for_each(|l| writeln!(out, "    {l}"))
                        .and_then(|_| {
                            checks
                                .iter()
                                .try_for_each(|c| writeln!(out, "    {}", plain_check(c)))
                        })
                }
            }
            .expect("writing to a string");
        }
        let s = &self.summary;
        writeln!(
            out,
            "{} queries, {} failed, {} errors",
            s.queries, s.failed, s.errors
        )
        .expect("writing to a string");
        out
    }
}

fn plain_check(c: &Check) -> String {
    let mut line = format!("{}: {}", c.name, c.verdict);
    if !c.witness.is_empty() {
        let w: Vec<String> = c
            .witness
            .iter()
            .map(|w| format!("{}={}", w.role, w.value))
            .collect();
        let _ = write!(line, " at {}", w.join(", "));
    }
    if let Some(n) = c.multiplier {
        let _ = write!(line, " with n={n}");
    }
    if let Some(k) = c.examined {
        let _ = write!(line, " [{k} examined]");
    }
    if let Some(note) = &c.note {
        let _ = write!(line, " ({note})");
    }
    line
}
