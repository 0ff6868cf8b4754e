use serde_json::Value;

use crate::config::{CliError, OutputFormat, Report};

pub fn render(report: &Report, format: OutputFormat) -> Result<String, CliError> {
    match format {
        OutputFormat::Json => serde_json::to_string_pretty(&report.json)
            .map(|s| s + "\n")
            .map_err(|e| CliError::Input(format!("json output: {e}"))),
        OutputFormat::Csv => {
            let rows = match &report.rows {
                Some(r) => r.clone(),
                None => flatten(&report.json),
            };
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in rows {
                w.write_record(&row)
                    .map_err(|e| CliError::Input(format!("csv output: {e}")))?;
            }
            let bytes = w
                .into_inner()
                .map_err(|e| CliError::Input(format!("csv output: {e}")))?;
            String::from_utf8(bytes).map_err(|e| CliError::Input(format!("csv output: {e}")))
        }
    }
}

/// `key,value` rows for every leaf, with dotted paths for nesting.
fn flatten(v: &Value) -> Vec<Vec<String>> {
    let mut rows = vec![vec!["key".to_string(), "value".to_string()]];
    walk(v, String::new(), &mut rows);
    rows
}

fn walk(v: &Value, path: String, rows: &mut Vec<Vec<String>>) {
    let join = |k: &str| {
        if path.is_empty() {
            k.to_string()
        } else {
            format!("{path}.{k}")
        }
    };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                walk(x, join(k), rows);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (k, x) in a.iter().enumerate() {
                walk(x, join(&k.to_string()), rows);
            }
        }
        Value::String(s) => rows.push(vec![path, s.clone()]),
        other => rows.push(vec![path, other.to_string()]),
    }
}
