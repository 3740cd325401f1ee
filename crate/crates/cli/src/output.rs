use std::fmt::Write;

use serde_json::Value;

use crate::{Cli, CliError, Format, Outcome};

/// Rows for CSV output.
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str], rows: Vec<Vec<String>>) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows,
        }
    }

    fn csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        s
    }
}

pub fn render(cli: &Cli, out: &Outcome) -> Result<String, CliError> {
    if cli.format == Format::Csv {
        return match &out.table {
            Some(t) => Ok(t.csv()),
            None => Err(CliError::Input("CSV output is only available for hilbert, tor and betti".into())),
        };
    }
    if cli.pretty {
        let mut s = String::new();
        pretty(&mut s, &out.value, 0);
        return Ok(s);
    }
    Ok(serde_json::to_string(&out.value).expect("json") + "\n")
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_array() && !x.is_object()) => {
            Some(a.iter().map(|x| scalar(x).unwrap()).collect::<Vec<_>>().join(", "))
        }
        _ => None,
    }
}

fn pretty(s: &mut String, v: &Value, indent: usize) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(m) => {
            let width = m.keys().map(|k| k.len()).max().unwrap_or(0);
            for (k, x) in m {
                match scalar(x) {
                    Some(t) => writeln!(s, "{pad}{k:<width$}  {t}").unwrap(),
                    None => {
                        writeln!(s, "{pad}{k}").unwrap();
                        pretty(s, x, indent + 2);
                    }
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match (scalar(x), x) {
                    (Some(t), _) => writeln!(s, "{pad}- {t}").unwrap(),
                    (None, Value::Object(m)) if m.values().all(|y| scalar(y).is_some()) => {
                        let parts: Vec<String> = m.iter().map(|(k, y)| format!("{k}={}", scalar(y).unwrap())).collect();
                        writeln!(s, "{pad}- {}", parts.join("  ")).unwrap();
                    }
                    (None, _) => {
                        writeln!(s, "{pad}-").unwrap();
                        pretty(s, x, indent + 2);
                    }
                }
            }
        }
        other => writeln!(s, "{pad}{}", scalar(other).unwrap_or_default()).unwrap(),
    }
}
