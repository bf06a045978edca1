use std::fmt::Write as _;

use dzeta_core::assembler::AbelianGroup;
use dzeta_core::orbits::{K1Class, OrbitCensus, Verdict};
use dzeta_core::witt::IntSeries;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

pub struct Report {
    pub command: Vec<String>,
    pub inputs: Value,
    pub results: Value,
    pub verdict: Option<Verdict>,
    pub timing_ms: Option<f64>,
}

impl Report {
    pub fn new(command: &[&str], inputs: Value, results: Value) -> Self {
        Report {
            command: command.iter().map(|s| s.to_string()).collect(),
            inputs,
            results,
            verdict: None,
            timing_ms: None,
        }
    }

    pub fn with_verdict(mut self, v: Verdict) -> Self {
        self.verdict = Some(v);
        self
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), json!(self.command));
        m.insert("inputs".into(), self.inputs.clone());
        m.insert("results".into(), self.results.clone());
        if let Some(v) = self.verdict {
            m.insert("verdict".into(), verdict_json(v));
        }
        if let Some(t) = self.timing_ms {
            m.insert("timing_ms".into(), json!(t));
        }
        Value::Object(m)
    }

    /// Two columns: flattened field path and scalar value.
    pub fn to_table(&self) -> String {
        let mut rows = Vec::new();
        flatten("", &self.to_json(), &mut rows);
        let width = rows
            .iter()
            .map(|(k, _)| k.chars().count())
            .max()
            .unwrap_or(0);
        let mut out = String::new();
        for (k, v) in rows {
            let pad = width - k.chars().count();
            let _ = writeln!(out, "{k}{}  {v}", " ".repeat(pad));
        }
        out
    }
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) if !m.is_empty() => {
            for (k, x) in m {
                let p = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&p, x, rows);
            }
        }
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let items: Vec<String> = a.iter().map(scalar_text).collect();
            rows.push((prefix.to_string(), format!("[{}]", items.join(", "))));
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, rows);
            }
        }
        other => rows.push((prefix.to_string(), scalar_text(other))),
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn class_json(c: &K1Class) -> Value {
    json!({ "n": c.n, "sign": c.sign, "twist": c.twist })
}

pub fn verdict_json(v: Verdict) -> Value {
    json!(match v {
        Verdict::NonPermutativeCertified => "non-permutative-certified",
        Verdict::Inconclusive => "inconclusive",
    })
}

pub fn census_json(c: &OrbitCensus) -> Value {
    let types: Vec<Value> = c
        .counts
        .iter()
        .map(|(&(d, a), &count)| json!({ "d": d, "a": a, "count": count }))
        .collect();
    json!({ "n": c.n, "m": c.m, "types": types })
}

pub fn group_json(g: &AbelianGroup) -> Value {
    json!({ "rank": g.rank, "torsion": g.torsion })
}

/// Coefficients as JSON integers, falling back to decimal strings beyond
/// the 64-bit range.
pub fn series_json(s: &IntSeries) -> Value {
    Value::Array(
        s.coeffs()
            .iter()
            .map(|c| match c.to_i64() {
                Some(x) => json!(x),
                None => json!(c.to_string()),
            })
            .collect(),
    )
}
