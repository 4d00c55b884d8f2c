use clap::ValueEnum;
use serde_json::Value;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Tables (arrays of rows) become `table,col...` lines; everything else
/// becomes `key,value` pairs.
fn csv(v: &Value) -> String {
    let tables: Vec<(&String, &Vec<Value>)> = match v {
        Value::Object(map) => map
            .iter()
            .filter_map(|(k, x)| match x {
                Value::Array(rows) if !rows.is_empty() && rows.iter().all(Value::is_array) => Some((k, rows)),
                _ => None,
            })
            .collect(),
        _ => Vec::new(),
    };
    let mut lines = Vec::new();
    if !tables.is_empty() {
        lines.push("table,x,y".to_string());
        for (name, rows) in tables {
            for row in rows {
                let cells: Vec<String> = row.as_array().unwrap().iter().map(|c| csv_field(&scalar(c))).collect();
                lines.push(format!("{name},{}", cells.join(",")));
            }
        }
        return lines.join("\n");
    }
    let mut pairs = Vec::new();
    flatten("", v, &mut pairs);
    lines.push("key,value".to_string());
    lines.extend(pairs.into_iter().map(|(k, x)| format!("{},{}", csv_field(&k), csv_field(&x))));
    lines.join("\n")
}

fn plain(v: &Value) -> String {
    let mut pairs = Vec::new();
    flatten("", v, &mut pairs);
    pairs.into_iter().map(|(k, x)| format!("{k}: {x}")).collect::<Vec<_>>().join("\n")
}

pub fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(v).expect("serializable value"),
        Format::Csv => csv(v),
        Format::Plain => plain(v),
    }
}
