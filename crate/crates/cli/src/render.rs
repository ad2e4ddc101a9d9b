//! Plain-text rendering of JSON documents.

use serde_json::Value;

pub fn text(value: &Value) -> String {
    let mut out = String::new();
    write_value(value, 0, &mut out);
    out
}

fn scalar(value: &Value) -> Option<String> {
    match value {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(if *b { "yes" } else { "no" }.into()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(if s.is_empty() { "ε".into() } else { s.clone() }),
        Value::Array(items) if items.iter().all(|v| !v.is_object()) => {
            let parts: Option<Vec<String>> = items.iter().map(|v| inline(v)).collect();
            parts.map(|p| format!("[{}]", p.join(", ")))
        }
        _ => None,
    }
}

fn inline(value: &Value) -> Option<String> {
    match value {
        Value::Array(_) => scalar(value),
        Value::Object(_) => None,
        _ => scalar(value),
    }
}

fn write_value(value: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                match scalar(v) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        write_value(v, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                match scalar(v) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}- [{i}]\n"));
                        write_value(v, indent + 1, out);
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
    fn renders_nested_documents() {
        let doc = json!({"r": 2, "ok": true, "root": "", "orbits": [[0, 1], [2, 3]], "d": {"order": 2}});
        let t = text(&doc);
        assert!(t.contains("r: 2\n"));
        assert!(t.contains("ok: yes\n"));
        assert!(t.contains("root: ε\n"));
        assert!(t.contains("orbits: [[0, 1], [2, 3]]\n"));
        assert!(t.contains("d:\n  order: 2\n"));
    }
}
