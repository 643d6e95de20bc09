use std::fmt::Write as _;

use serde_json::Value;

use crate::{Cli, CliError, Format, Report};

pub fn render(report: &Report, cli: &Cli) -> Result<String, CliError> {
    match cli.format {
        Format::Json => {
            let mut out = serde_json::to_string_pretty(report).expect("reports serialize");
            out.push('\n');
            Ok(out)
        }
        Format::Text => Ok(text(report)),
        Format::Dot => report
            .payload
            .get("dot")
            .and_then(Value::as_str)
            .map(str::to_owned)
            .ok_or_else(|| CliError::Usage("dot output is only available for `explain`".into())),
    }
}

fn text(report: &Report) -> String {
    let mut out = String::new();
    write_value(&mut out, &report.payload, 0);
    for d in &report.diagnostics {
        let _ = writeln!(out, "warning: {d}");
    }
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => {
            let parts: Vec<String> = items.iter().filter_map(scalar).collect();
            Some(format!("[{}]", parts.join(", ")))
        }
        Value::Array(items) if items.iter().all(|i| i.as_array().is_some_and(|a| a.iter().all(|x| !x.is_object() && !x.is_array()))) => {
            let parts: Vec<String> = items.iter().filter_map(scalar).collect();
            Some(parts.join(" "))
        }
        _ => None,
    }
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                if k == "dot" {
                    continue;
                }
                match scalar(v) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}{k}: {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}{k}:");
                        write_value(out, v, indent + 1);
                    }
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match scalar(item) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}- {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}-");
                        write_value(out, item, indent + 1);
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar(other).unwrap_or_default());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn nested_payload() {
        let mut out = String::new();
        write_value(&mut out, &json!({"b": [1, 2], "a": [{"x": null}], "e": [["s1", "s2"]]}), 0);
        assert_eq!(out, "a:\n  -\n    x: -\nb: [1, 2]\ne: [s1, s2]\n");
    }
}
