//! Verification verdicts and JSON-lines reports.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::json;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    ExpectedFail,
    Flagged,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::ExpectedFail => "expected-fail",
            Status::Flagged => "flagged",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Verdict {
    pub check: String,
    pub subject: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Verdict {
    pub fn pass(check: impl Into<String>, subject: impl Into<String>) -> Verdict {
        Verdict {
            check: check.into(),
            subject: subject.into(),
            status: Status::Pass,
            witness: None,
            note: None,
        }
    }

    pub fn fail(check: impl Into<String>, subject: impl Into<String>, witness: impl Into<String>) -> Verdict {
        Verdict {
            check: check.into(),
            subject: subject.into(),
            status: Status::Fail,
            witness: Some(witness.into()),
            note: None,
        }
    }

    /// Pass when `residual` renders as "0", fail with the residual as witness otherwise.
    pub fn from_residual(check: impl Into<String>, subject: impl Into<String>, residual: String) -> Verdict {
        if residual == "0" {
            Verdict::pass(check, subject)
        } else {
            Verdict::fail(check, subject, residual)
        }
    }

    pub fn with_status(mut self, status: Status) -> Verdict {
        self.status = status;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Verdict {
        self.note = Some(note.into());
        self
    }

    pub fn is_pass(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub verdicts: Vec<Verdict>,
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    pub fn from_verdicts(mut verdicts: Vec<Verdict>) -> Report {
        verdicts.sort_by(|a, b| (&a.check, &a.subject).cmp(&(&b.check, &b.subject)));
        Report { verdicts }
    }

    pub fn push(&mut self, v: Verdict) {
        self.verdicts.push(v);
    }

    pub fn extend(&mut self, other: Report) {
        self.verdicts.extend(other.verdicts);
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(Verdict::is_pass)
    }

    pub fn count(&self, status: Status) -> usize {
        self.verdicts.iter().filter(|v| v.status == status).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| v.status == Status::Fail)
    }

    /// Re-label every failing verdict matching `pred`.
    pub fn reclassify(&mut self, status: Status, pred: impl Fn(&Verdict) -> bool) {
        for v in &mut self.verdicts {
            if v.status == Status::Fail && pred(v) {
                v.status = status;
            }
        }
    }

    pub fn summary(&self) -> BTreeMap<&'static str, usize> {
        [Status::Pass, Status::Fail, Status::ExpectedFail, Status::Flagged]
            .into_iter()
            .map(|s| (s.as_str(), self.count(s)))
            .collect()
    }

    pub fn summary_json(&self) -> serde_json::Value {
        json!({ "summary": self.summary(), "total": self.verdicts.len() })
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for v in &self.verdicts {
            out.push_str(&serde_json::to_string(v).expect("verdicts serialize"));
            out.push('\n');
        }
        out.push_str(&self.summary_json().to_string());
        out.push('\n');
        out
    }

    pub fn to_text(&self) -> String {
        let cw = self.verdicts.iter().map(|v| v.check.len()).max().unwrap_or(0);
        let sw = self.verdicts.iter().map(|v| v.subject.len()).max().unwrap_or(0);
        let mut out = String::new();
        for v in &self.verdicts {
            let mut line = format!("{:<cw$}  {:<sw$}  {}", v.check, v.subject, v.status.as_str());
            if let Some(w) = &v.witness {
                line.push_str(&format!("  witness: {w}"));
            }
            if let Some(n) = &v.note {
                line.push_str(&format!("  note: {n}"));
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        let s = self.summary();
        out.push_str(&format!(
            "summary: {} pass, {} fail, {} expected-fail, {} flagged\n",
            s["pass"], s["fail"], s["expected-fail"], s["flagged"]
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jsonl_layout() {
        let r = Report::from_verdicts(vec![
            Verdict::fail("b", "x", "1*a"),
            Verdict::pass("a", "y"),
        ]);
        let text = r.to_jsonl();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], r#"{"check":"a","subject":"y","status":"pass"}"#);
        assert_eq!(lines[1], r#"{"check":"b","subject":"x","status":"fail","witness":"1*a"}"#);
        assert!(lines[2].contains(r#""fail":1"#));
        assert!(!r.all_pass());
    }

    #[test]
    fn reclassify_only_touches_failures() {
        let mut r = Report::from_verdicts(vec![Verdict::fail("u", "p", "w"), Verdict::pass("u", "q")]);
        r.reclassify(Status::Flagged, |_| true);
        assert_eq!(r.count(Status::Flagged), 1);
        assert_eq!(r.count(Status::Pass), 1);
    }
}
