//! Byte-stable JSON: sorted keys, two-space indent, floats rounded to 12
//! significant digits, non-finite numbers as `null`.

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: &str = "shadowcover/1";

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn number(x: f64) -> String {
    if !x.is_finite() {
        return "null".into();
    }
    let r = round12(x);
    if r == 0.0 {
        return "0.0".into();
    }
    let s = if r.abs() < 1e-6 || r.abs() >= 1e16 { format!("{r:e}") } else { format!("{r}") };
    if s.contains(['.', 'e', 'E']) {
        s
    } else {
        format!("{s}.0")
    }
}

fn write(v: &Value, indent: usize, out: &mut String) {
    let pad = |k: usize| "  ".repeat(k);
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => out.push_str(&i.to_string()),
            (_, Some(u)) => out.push_str(&u.to_string()),
            _ => out.push_str(&number(n.as_f64().unwrap_or(f64::NAN))),
        },
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string")),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            // Short numeric rows stay on one line.
            if items.len() <= 8 && items.iter().all(|x| x.is_number() || x.is_null()) {
                out.push('[');
                for (i, x) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write(x, 0, out);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write(x, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, k) in keys.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&serde_json::to_string(k).expect("key"));
                out.push_str(": ");
                write(&map[*k], indent + 1, out);
                out.push_str(if i + 1 < keys.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
    }
}

/// Canonical text of any serializable value, with a trailing newline.
pub fn to_string<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let v = serde_json::to_value(value)?;
    let mut out = String::new();
    write(&v, 0, &mut out);
    out.push('\n');
    Ok(out)
}

/// Wraps a payload as `{"schema": ..., "<kind>": payload, ...extra}`.
pub fn envelope<T: Serialize>(kind: &str, payload: &T, extra: &[(&str, Value)]) -> serde_json::Result<String> {
    let mut map = serde_json::Map::new();
    map.insert("schema".into(), Value::String(SCHEMA.into()));
    map.insert(kind.into(), serde_json::to_value(payload)?);
    for (k, v) in extra {
        map.insert((*k).into(), v.clone());
    }
    to_string(&Value::Object(map))
}
