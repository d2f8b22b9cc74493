//! Machine- and human-readable reports. Every command emits one; the
//! serialization carries the seed, caps, and tool version that produced it,
//! and contains nothing run-dependent (no timestamps, no durations), so the
//! same inputs give byte-identical output.

use serde::Serialize;

use crate::collage::StageReport;

pub const TOOL_NAME: &str = "collagekit";

pub fn tool_version() -> String {
    format!("{TOOL_NAME} {}", env!("CARGO_PKG_VERSION"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "UNKNOWN")]
    Unknown,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Unknown => "UNKNOWN",
        }
    }
}

/// One named check. A failing item always carries a witness with enough
/// context to replay it (seed, instance label, broken obligation).
#[derive(Debug, Clone, Serialize)]
pub struct ReportItem {
    pub name: String,
    pub verdict: Verdict,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl ReportItem {
    pub fn pass(name: impl Into<String>, detail: impl Into<String>) -> ReportItem {
        ReportItem { name: name.into(), verdict: Verdict::Pass, detail: detail.into(), witness: None }
    }

    pub fn fail(
        name: impl Into<String>,
        detail: impl Into<String>,
        witness: impl Into<String>,
    ) -> ReportItem {
        ReportItem {
            name: name.into(),
            verdict: Verdict::Fail,
            detail: detail.into(),
            witness: Some(witness.into()),
        }
    }

    pub fn unknown(
        name: impl Into<String>,
        detail: impl Into<String>,
        witness: impl Into<String>,
    ) -> ReportItem {
        ReportItem {
            name: name.into(),
            verdict: Verdict::Unknown,
            detail: detail.into(),
            witness: Some(witness.into()),
        }
    }

    /// Collapse a staged certification into one item. `context` prefixes
    /// the witness so the failing instance can be found again.
    pub fn from_stages(name: impl Into<String>, rep: &StageReport, context: &str) -> ReportItem {
        let name = name.into();
        match rep.outcome() {
            "PASS" => {
                let detail = rep
                    .stages
                    .last()
                    .map(|s| s.detail.clone())
                    .unwrap_or_else(|| "no stages ran".into());
                ReportItem::pass(name, format!("{} ({} stages)", detail, rep.stages.len()))
            }
            "FAIL" => {
                let stage = rep.first_failure().expect("failing report has a failing stage");
                ReportItem::fail(
                    name,
                    format!("{} failed at stage {}", rep.subject, stage.name),
                    format!("{context}: {} :: {}: {}", rep.subject, stage.name, stage.detail),
                )
            }
            _ => {
                let reason = rep.unknown.clone().unwrap_or_default();
                ReportItem::unknown(
                    name,
                    format!("{} undecided: budget exhausted", rep.subject),
                    format!("{context}: {} :: {}", rep.subject, reason),
                )
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub unknown: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: String,
    pub command: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scale: Option<String>,
    pub cap: usize,
    pub budget: usize,
    pub items: Vec<ReportItem>,
    pub summary: Summary,
}

impl Report {
    pub fn new(
        command: impl Into<String>,
        seed: u64,
        scale: Option<String>,
        cap: usize,
        budget: usize,
        items: Vec<ReportItem>,
    ) -> Report {
        let summary = Summary {
            pass: items.iter().filter(|i| i.verdict == Verdict::Pass).count(),
            fail: items.iter().filter(|i| i.verdict == Verdict::Fail).count(),
            unknown: items.iter().filter(|i| i.verdict == Verdict::Unknown).count(),
        };
        Report {
            tool: tool_version(),
            command: command.into(),
            seed,
            scale,
            cap,
            budget,
            items,
            summary,
        }
    }

    pub fn ok(&self) -> bool {
        self.summary.fail == 0 && self.summary.unknown == 0
    }

    /// Process exit code: failures dominate, then strict-mode unknowns.
    pub fn exit_code(&self, strict: bool) -> i32 {
        if self.summary.fail > 0 {
            1
        } else if strict && self.summary.unknown > 0 {
            3
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let mut s = String::new();
        let _ = writeln!(s, "{} :: {}", self.tool, self.command);
        let _ = write!(s, "seed={}", self.seed);
        if let Some(sc) = &self.scale {
            let _ = write!(s, " scale={sc}");
        }
        let _ = writeln!(s, " cap={} budget={}", self.cap, self.budget);
        for item in &self.items {
            let _ = writeln!(s, "[{:<7}] {}: {}", item.verdict.label(), item.name, item.detail);
            if let Some(w) = &item.witness {
                let _ = writeln!(s, "          witness: {w}");
            }
        }
        let _ = writeln!(
            s,
            "{} pass, {} fail, {} unknown",
            self.summary.pass, self.summary.fail, self.summary.unknown
        );
        s
    }

    pub fn render(&self, format: &str) -> String {
        if format == "json" {
            self.to_json()
        } else {
            self.to_text()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_rank_failures_over_unknowns() {
        let items = vec![
            ReportItem::pass("a", "fine"),
            ReportItem::unknown("b", "ran out", "w"),
            ReportItem::fail("c", "broke", "w"),
        ];
        let r = Report::new("suite", 7, Some("smoke".into()), 4, 1000, items);
        assert_eq!(r.exit_code(false), 1);
        assert_eq!(r.exit_code(true), 1);
        let r = Report::new(
            "suite",
            7,
            None,
            4,
            1000,
            vec![ReportItem::unknown("b", "ran out", "w")],
        );
        assert_eq!(r.exit_code(false), 0);
        assert_eq!(r.exit_code(true), 3);
    }

    #[test]
    fn json_rendering_is_stable() {
        let r = Report::new("check", 7, None, 4, 10, vec![ReportItem::pass("x", "ok")]);
        assert_eq!(r.to_json(), r.to_json());
        assert!(r.to_json().contains("\"PASS\""));
    }
}
