//! The report document shared by every subcommand, and its renderings.

use std::fmt::Write;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Meta {
    pub command: String,
    pub seed: u64,
    pub trials: usize,
    pub primes: Vec<u64>,
    pub version: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Report {
    pub meta: Meta,
    pub records: Vec<Value>,
    pub verdict: String,
    pub certified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summary: Option<String>,
}

impl Report {
    /// 0 for success or a verified "holds", 2 for a verified "fails", 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self.verdict.as_str() {
            "holds" | "agrees" | "ok" => 0,
            "fails" => 2,
            _ => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Csv => table(report, ",", true),
        Format::Text => {
            let mut s = String::new();
            if let Some(summary) = &report.summary {
                writeln!(s, "{summary}").unwrap();
            }
            s.push_str(&table(report, "  ", false));
            writeln!(s, "verdict: {}", report.verdict).unwrap();
            writeln!(s, "certified: {}", report.certified).unwrap();
            writeln!(
                s,
                "seed {} | trials {} | primes {:?}",
                report.meta.seed, report.meta.trials, report.meta.primes
            )
            .unwrap();
            s
        }
    }
}

fn cell(v: &Value, csv: bool) -> String {
    let text = match v {
        Value::Null => "-".to_string(),
        Value::String(s) => s.clone(),
        Value::Array(items) if items.iter().all(Value::is_number) => {
            let inner: Vec<String> = items.iter().map(Value::to_string).collect();
            format!("({})", inner.join(","))
        }
        other => other.to_string(),
    };
    if csv && (text.contains(',') || text.contains('"')) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text
    }
}

/// Columns are the keys of the first record, in order.
fn table(report: &Report, sep: &str, csv: bool) -> String {
    let Some(Value::Object(first)) = report.records.first() else {
        return String::new();
    };
    let keys: Vec<&String> = first.keys().collect();
    let mut rows: Vec<Vec<String>> = vec![keys.iter().map(|k| k.to_string()).collect()];
    for rec in &report.records {
        rows.push(keys.iter().map(|k| cell(rec.get(k.as_str()).unwrap_or(&Value::Null), csv)).collect());
    }
    let widths: Vec<usize> = (0..keys.len())
        .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0))
        .collect();
    let mut s = String::new();
    for row in rows {
        let line: Vec<String> = if csv {
            row
        } else {
            row.iter()
                .zip(&widths)
                .map(|(v, w)| format!("{v:>w$}"))
                .collect()
        };
        writeln!(s, "{}", line.join(sep).trim_end()).unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample() -> Report {
        Report {
            meta: Meta {
                command: "hilbert".into(),
                seed: 1,
                trials: 3,
                primes: vec![7, 11, 13],
                version: "0.0.0".into(),
            },
            records: vec![json!({"degree": 0, "dim": 1, "oracle": null}), json!({"degree": 1, "dim": 5, "oracle": [1, 2]})],
            verdict: "ok".into(),
            certified: true,
            summary: Some("h = (1,5)".into()),
        }
    }

    #[test]
    fn csv_quotes_cells_with_commas() {
        let out = render(&sample(), Format::Csv);
        assert_eq!(out, "degree,dim,oracle\n0,1,-\n1,5,\"(1,2)\"\n");
    }

    #[test]
    fn text_aligns_columns() {
        let out = render(&sample(), Format::Text);
        assert!(out.starts_with("h = (1,5)\ndegree  dim  oracle\n     0    1       -\n"));
        assert!(out.contains("verdict: ok\ncertified: true\n"));
    }

    #[test]
    fn json_round_trips() {
        let r = sample();
        let back: Report = serde_json::from_str(&render(&r, Format::Json)).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn exit_codes() {
        let mut r = sample();
        assert_eq!(r.exit_code(), 0);
        r.verdict = "fails".into();
        assert_eq!(r.exit_code(), 2);
        r.verdict = "disagrees".into();
        assert_eq!(r.exit_code(), 1);
    }
}
