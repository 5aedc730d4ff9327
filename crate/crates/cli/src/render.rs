//! Human-oriented text output.

use serde_json::Value;

use diffgoppa::FqMatrix;

/// Right-aligned columns, one matrix row per line.
pub fn matrix(m: &FqMatrix) -> String {
    let f = m.field();
    let cells: Vec<Vec<String>> = (0..m.rows()).map(|i| m.row(i).iter().map(|&a| f.format(a)).collect()).collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    let mut out = format!("{} x {} over F_{}\n", m.rows(), m.cols(), f.order());
    for row in cells {
        let line: Vec<String> = row.iter().map(|c| format!("{:>w$}", c, w = width)).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// Scalars and coordinate arrays print inline.
fn is_leaf(v: &Value) -> bool {
    match v {
        Value::Object(_) => false,
        Value::Array(c) => c.iter().all(Value::is_number),
        _ => true,
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(is_leaf) => {
            let parts: Vec<String> = a.iter().map(|x| scalar(x).unwrap_or_default()).collect();
            Some(format!("[{}]", parts.join(", ")))
        }
        _ => None,
    }
}

fn walk(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{}{}: {}\n", pad, k, s)),
                    None => {
                        out.push_str(&format!("{}{}:\n", pad, k));
                        walk(x, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{}- {}\n", pad, s)),
                    None => {
                        out.push_str(&format!("{}-\n", pad));
                        walk(x, indent + 1, out);
                    }
                }
            }
        }
        _ => out.push_str(&format!("{}{}\n", pad, scalar(v).unwrap_or_default())),
    }
}

/// Indented `key: value` listing of a report.
pub fn value(v: &Value) -> String {
    let mut out = String::new();
    walk(v, 0, &mut out);
    out
}
