use std::fmt::Write as _;

use clap::ValueEnum;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use quadunit_core::{Error, QuadInt};
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Md,
}

/// Integers that fit in 64 bits become JSON numbers, larger ones decimal strings.
pub fn big(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(x.to_string()),
    }
}

pub fn big_list<'a>(xs: impl IntoIterator<Item = &'a BigInt>) -> Value {
    Value::Array(xs.into_iter().map(big).collect())
}

pub fn quad(x: &QuadInt) -> Value {
    json!({ "u": big(x.u()), "v": big(x.v()), "d": x.d(), "text": x.to_string() })
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Domain(_) | Error::NotAnIdeal(_) | Error::IterationCap { .. } => 3,
        Error::InvariantViolation(_) | Error::Verification { .. } => 4,
    }
}

pub fn envelope(command: &str, inputs: Value, outcome: &Result<Value, Error>) -> Value {
    let mut env = Map::new();
    env.insert("command".into(), command.into());
    env.insert("inputs".into(), inputs);
    match outcome {
        Ok(result) => {
            env.insert("status".into(), "ok".into());
            env.insert("result".into(), result.clone());
        }
        Err(e) => {
            env.insert("status".into(), "error".into());
            env.insert("error".into(), e.to_string().into());
        }
    }
    Value::Object(env)
}

pub fn render(env: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(env).expect("JSON values always serialize");
            s.push('\n');
            s
        }
        Format::Csv => render_table(env, &CSV),
        Format::Md => render_table(env, &MD),
    }
}

struct TableStyle {
    row: fn(&[String]) -> String,
    after_header: Option<fn(usize) -> String>,
}

const CSV: TableStyle = TableStyle {
    row: |cells| {
        cells
            .iter()
            .map(|c| csv_cell(c))
            .collect::<Vec<_>>()
            .join(",")
    },
    after_header: None,
};

const MD: TableStyle = TableStyle {
    row: |cells| format!("| {} |", cells.join(" | ")),
    after_header: Some(|n| format!("|{}", "---|".repeat(n))),
};

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, v, out);
            }
        }
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

/// Tables: `result.rows` when present, otherwise flattened key/value pairs.
fn render_table(env: &Value, style: &TableStyle) -> String {
    let (header, rows): (Vec<String>, Vec<Vec<String>>) = match env.get("result") {
        Some(Value::Object(res)) if matches!(res.get("rows"), Some(Value::Array(_))) => {
            let rows = res["rows"].as_array().expect("checked");
            let header: Vec<String> = rows
                .first()
                .and_then(Value::as_object)
                .map(|o| o.keys().cloned().collect())
                .unwrap_or_default();
            let body = rows
                .iter()
                .map(|r| header.iter().map(|k| scalar(&r[k])).collect())
                .collect();
            (header, body)
        }
        Some(result) => {
            let mut pairs = Vec::new();
            flatten("", result, &mut pairs);
            (
                vec!["key".into(), "value".into()],
                pairs.into_iter().map(|(k, v)| vec![k, v]).collect(),
            )
        }
        None => (
            vec!["status".into(), "error".into()],
            vec![vec!["error".into(), scalar(&env["error"])]],
        ),
    };
    let mut out = String::new();
    if header.is_empty() {
        return out;
    }
    let _ = writeln!(out, "{}", (style.row)(&header));
    if let Some(sep) = style.after_header {
        let _ = writeln!(out, "{}", sep(header.len()));
    }
    for r in rows {
        let _ = writeln!(out, "{}", (style.row)(&r));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_numbers_become_strings() {
        assert_eq!(big(&BigInt::from(70)), json!(70));
        let huge: BigInt = "90084665203202024260494303744425250249".parse().unwrap();
        assert_eq!(big(&huge), json!("90084665203202024260494303744425250249"));
    }

    #[test]
    fn envelope_has_exactly_one_of_result_and_error() {
        let ok = envelope("cf", json!({}), &Ok(json!({"x": 1})));
        assert!(ok.get("result").is_some() && ok.get("error").is_none());
        let err = envelope("cf", json!({}), &Err(Error::Domain("bad".into())));
        assert!(err.get("result").is_none() && err.get("error").is_some());
        assert_eq!(err["status"], "error");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Domain("x".into())), 3);
        assert_eq!(exit_code(&Error::IterationCap { cap: 3 }), 3);
        assert_eq!(exit_code(&Error::InvariantViolation("x".into())), 4);
        let v = Error::Verification {
            a: 5,
            n: 29,
            reason: "x".into(),
        };
        assert_eq!(exit_code(&v), 4);
    }

    #[test]
    fn keys_are_sorted() {
        let env = envelope("z", json!({"b": 1, "a": 2}), &Ok(json!({"y": 1, "x": 2})));
        let s = render(&env, Format::Json);
        let pos = |k: &str| s.find(k).unwrap();
        assert!(pos("\"command\"") < pos("\"inputs\""));
        assert!(pos("\"inputs\"") < pos("\"result\""));
        assert!(pos("\"x\"") < pos("\"y\""));
    }

    #[test]
    fn tables() {
        let env = envelope(
            "family",
            json!({}),
            &Ok(json!({"rows": [{"a": 3, "N": 13}, {"a": 5, "N": 29}]})),
        );
        assert_eq!(render(&env, Format::Csv), "N,a\n13,3\n29,5\n");
        assert_eq!(
            render(&env, Format::Md),
            "| N | a |\n|---|---|\n| 13 | 3 |\n| 29 | 5 |\n"
        );

        let env = envelope(
            "cf",
            json!({}),
            &Ok(json!({"period": [1, 2], "q": {"u": 1}})),
        );
        assert_eq!(
            render(&env, Format::Csv),
            "key,value\nperiod,\"[1,2]\"\nq.u,1\n"
        );
    }
}
