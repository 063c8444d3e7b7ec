//! The single JSON object emitted per invocation, plus its text rendering
//! and the process exit-code convention.

use serde::Serialize;
use serde_json::Value;

use crate::error::Error;
use crate::theorems::Verdict;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INELIGIBLE: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ring_fingerprint: Option<String>,
    pub results: Value,
    pub verdicts: Vec<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Wall-clock milliseconds; omitted under `--deterministic`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl Report {
    pub fn new(command: Vec<String>) -> Self {
        Report {
            command,
            version: env!("CARGO_PKG_VERSION").to_string(),
            ring_fingerprint: None,
            results: Value::Null,
            verdicts: Vec::new(),
            error: None,
            timing_ms: None,
        }
    }

    /// Records a failed invocation; the verdict follows the error kind.
    pub fn failed(mut self, err: &Error) -> Self {
        self.verdicts.push(match err {
            Error::Ineligible(_) => Verdict::Ineligible,
            _ => Verdict::Error,
        });
        self.error = Some(err.to_string());
        self
    }

    /// Exit code from the worst verdict, or from the error when one is set.
    pub fn exit_code(&self, err: Option<&Error>) -> i32 {
        if let Some(e) = err {
            return exit_code_for_error(e);
        }
        if self.verdicts.contains(&Verdict::Violation) {
            EXIT_VIOLATION
        } else if self.verdicts.contains(&Verdict::Error) {
            EXIT_USAGE
        } else if self.verdicts.contains(&Verdict::Ineligible) {
            EXIT_INELIGIBLE
        } else {
            EXIT_OK
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is plain data")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command.join(" ")));
        out.push_str(&format!("version: {}\n", self.version));
        if let Some(f) = &self.ring_fingerprint {
            out.push_str(&format!("ring: {f}\n"));
        }
        if !self.verdicts.is_empty() {
            let v: Vec<String> = self.verdicts.iter().map(|v| v.to_string()).collect();
            out.push_str(&format!("verdicts: {}\n", v.join(" ")));
        }
        if let Some(e) = &self.error {
            out.push_str(&format!("error: {e}\n"));
        }
        if !self.results.is_null() {
            out.push_str("results:\n");
            render(&self.results, 1, &mut out);
        }
        if let Some(t) = self.timing_ms {
            out.push_str(&format!("time: {t} ms\n"));
        }
        out
    }
}

pub fn exit_code_for_error(err: &Error) -> i32 {
    match err {
        Error::Ineligible(_) | Error::RetriesExhausted(_) => EXIT_INELIGIBLE,
        Error::ResourceBound(_) => EXIT_RESOURCE,
        _ => EXIT_USAGE,
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Object(m) if m.is_empty() => Some("{}".into()),
        Value::Array(a) if a.iter().all(|x| !x.is_array() && !x.is_object()) => {
            Some(a.iter().filter_map(scalar).collect::<Vec<_>>().join(", "))
        }
        _ => None,
    }
}

fn render(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render(x, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}[{i}]\n"));
                        render(x, depth + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn exit_codes_follow_the_worst_verdict() {
        let mut r = Report::new(vec!["theta".into()]);
        assert_eq!(r.exit_code(None), EXIT_OK);
        r.verdicts = vec![Verdict::Pass, Verdict::Ineligible];
        assert_eq!(r.exit_code(None), EXIT_INELIGIBLE);
        r.verdicts.push(Verdict::Violation);
        assert_eq!(r.exit_code(None), EXIT_VIOLATION);
        assert_eq!(r.exit_code(Some(&Error::ResourceBound("basis".into()))), EXIT_RESOURCE);
        assert_eq!(r.exit_code(Some(&Error::Semantic("x".into()))), EXIT_USAGE);
    }

    #[test]
    fn text_rendering_is_stable() {
        let mut r = Report::new(vec!["tor".into(), "--index".into(), "1".into()]);
        r.results = json!({"betti": [1, 2], "tor": {"length": 3}});
        let text = r.to_text();
        assert!(text.contains("  betti: 1, 2\n"));
        assert!(text.contains("  tor:\n    length: 3\n"));
        assert_eq!(text, r.clone().to_text());
    }
}
