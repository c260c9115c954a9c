use std::fmt::Write;

use serde_json::Value;

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(match n.as_f64() {
            Some(x) if n.is_f64() => format!("{x:.6e}"),
            _ => n.to_string(),
        }),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => {
            Some(format!(
                "[{}]",
                items
                    .iter()
                    .filter_map(scalar)
                    .collect::<Vec<_>>()
                    .join(", ")
            ))
        }
        _ => None,
    }
}

fn walk(out: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, item) in map {
                match scalar(item) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}{k}: {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}{k}:");
                        walk(out, item, indent + 1);
                    }
                }
            }
        }
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                match scalar(item) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}- {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}[{i}]");
                        walk(out, item, indent + 1);
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar(other).unwrap_or_default());
        }
    }
}

/// Indented `key: value` rendering; a report gets a one-line verdict header.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    if let Some(verdict) = v.get("verdict") {
        let kind = verdict.get("kind").and_then(Value::as_str).unwrap_or("?");
        let _ = match kind {
            "NotExtendable" => {
                let word: Vec<&str> = verdict["witness_word"]
                    .as_array()
                    .map(|w| w.iter().filter_map(Value::as_str).collect())
                    .unwrap_or_default();
                let dev = verdict["deviation"].as_f64().unwrap_or(f64::NAN);
                writeln!(
                    out,
                    "verdict: NotExtendable (witness {}, deviation {dev:.6e})",
                    word.join("·")
                )
            }
            "Inconclusive" => writeln!(
                out,
                "verdict: Inconclusive ({} reached)",
                verdict["limit"].as_str().unwrap_or("limit")
            ),
            other => writeln!(out, "verdict: {other}"),
        };
    }
    walk(&mut out, v, 0);
    out
}
