//! Report envelope and tabular rendering shared by the CLI and the C API.
//!
//! Every command emits either one report object — `{tool_version, command,
//! params, results, elapsed_ms}` with results entries that are verdicts or
//! identity records — or, for scans, one JSON line per verdict with no
//! envelope and no timing, so reruns are byte-identical.

use serde::Serialize;
use serde_json::Value;

use crate::conjectures::ConjectureVerdict;
use crate::proofcheck::CheckRecord;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool_version: &'static str,
    pub command: String,
    pub params: Value,
    pub results: Vec<Value>,
    pub elapsed_ms: u64,
}

impl Report {
    pub fn new(command: &str, params: Value) -> Report {
        Report {
            tool_version: TOOL_VERSION,
            command: command.to_string(),
            params,
            results: Vec::new(),
            elapsed_ms: 0,
        }
    }

    pub fn push<T: Serialize>(&mut self, result: &T) {
        self.results
            .push(serde_json::to_value(result).expect("report types serialize"));
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// One compact JSON line per verdict.
pub fn verdicts_to_jsonl(verdicts: &[ConjectureVerdict]) -> String {
    let mut out = String::new();
    for v in verdicts {
        out.push_str(&serde_json::to_string(v).expect("verdict serializes"));
        out.push('\n');
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_line(fields: &[String]) -> String {
    let mut line = fields
        .iter()
        .map(|f| csv_field(f))
        .collect::<Vec<_>>()
        .join(",");
    line.push('\n');
    line
}

pub fn verdicts_to_csv(verdicts: &[ConjectureVerdict]) -> String {
    let mut out = csv_line(
        &[
            "shape",
            "mode",
            "verdict",
            "dominance_holds",
            "h_count",
            "v_count",
            "matrix_built",
            "rank",
            "certification",
            "resource_limited",
            "reason",
        ]
        .map(String::from),
    );
    for v in verdicts {
        let (rank, cert) = match &v.rank_report {
            Some(r) => (
                r.rank.to_string(),
                serde_json::to_value(r.certification)
                    .expect("serializes")
                    .as_str()
                    .expect("string variant")
                    .to_string(),
            ),
            None => (String::new(), String::new()),
        };
        out.push_str(&csv_line(&[
            v.shape.clone(),
            serde_json::to_value(v.mode)
                .expect("serializes")
                .as_str()
                .expect("string variant")
                .to_string(),
            serde_json::to_value(v.verdict)
                .expect("serializes")
                .as_str()
                .expect("string variant")
                .to_string(),
            v.dominance_holds.to_string(),
            v.h_count.clone(),
            v.v_count.clone(),
            v.matrix_built.to_string(),
            rank,
            cert,
            v.resource_limited.to_string(),
            v.reason.clone().unwrap_or_default(),
        ]));
    }
    out
}

pub fn records_to_csv(records: &[CheckRecord]) -> String {
    let mut out = csv_line(
        &["check", "n", "k", "nu_prime", "expected", "observed", "pass"].map(String::from),
    );
    for r in records {
        out.push_str(&csv_line(&[
            r.check.to_string(),
            r.n.to_string(),
            r.k.map(|k| k.to_string()).unwrap_or_default(),
            r.nu_prime.clone().unwrap_or_default(),
            r.expected.clone(),
            r.observed.clone(),
            r.pass.to_string(),
        ]));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn envelope_shape() {
        let mut report = Report::new("count", serde_json::json!({"shape": "[2,2]"}));
        report.push(&serde_json::json!({"ok": true}));
        report.elapsed_ms = 3;
        let value: Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(value["tool_version"], TOOL_VERSION);
        assert_eq!(value["command"], "count");
        assert_eq!(value["params"]["shape"], "[2,2]");
        assert_eq!(value["results"].as_array().unwrap().len(), 1);
        assert!(value["elapsed_ms"].is_u64());
    }

    #[test]
    fn csv_escaping() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("[2,2]"), "\"[2,2]\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }
}
