//! Human, CSV and JSON rendering of flat records and tables.

use clap::ValueEnum;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Aligned text, six decimals.
    Human,
    /// Header row plus data rows, full precision.
    Csv,
    /// JSON, full precision.
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
    /// A labeled distribution, e.g. a witness.
    Dist(Vec<(String, f64)>),
    /// Not computed for this row.
    Empty,
}

impl Field {
    fn human(&self) -> String {
        match self {
            Field::Num(v) => fmt_num(*v, true),
            Field::Int(v) => v.to_string(),
            Field::Bool(b) => b.to_string(),
            Field::Text(s) => s.clone(),
            Field::Dist(d) => d
                .iter()
                .map(|(l, p)| format!("{l}={}", fmt_num(*p, true)))
                .collect::<Vec<_>>()
                .join(" "),
            Field::Empty => "-".into(),
        }
    }

    fn csv(&self) -> String {
        let raw = match self {
            Field::Num(v) => fmt_num(*v, false),
            Field::Int(v) => v.to_string(),
            Field::Bool(b) => b.to_string(),
            Field::Text(s) => s.clone(),
            Field::Dist(d) => d
                .iter()
                .map(|(l, p)| format!("{l}={}", fmt_num(*p, false)))
                .collect::<Vec<_>>()
                .join(";"),
            Field::Empty => String::new(),
        };
        if raw.contains([',', '"', '\n']) {
            format!("\"{}\"", raw.replace('"', "\"\""))
        } else {
            raw
        }
    }

    fn json(&self) -> Value {
        match self {
            Field::Num(v) => num_json(*v),
            Field::Int(v) => json!(v),
            Field::Bool(b) => json!(b),
            Field::Text(s) => json!(s),
            Field::Dist(d) => Value::Object(d.iter().map(|(l, p)| (l.clone(), num_json(*p))).collect()),
            Field::Empty => Value::Null,
        }
    }
}

fn fmt_num(v: f64, short: bool) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else if short {
        format!("{v:.6}")
    } else {
        format!("{v}")
    }
}

/// JSON has no infinities; they become the strings "inf" / "-inf".
fn num_json(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        json!(fmt_num(v, false))
    }
}

/// Ordered `(column, value)` pairs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record(pub Vec<(&'static str, Field)>);

impl Record {
    pub fn new() -> Self {
        Record(Vec::new())
    }

    pub fn with(mut self, key: &'static str, value: Field) -> Self {
        self.0.push((key, value));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Field> {
        self.0.iter().find(|(k, _)| *k == key).map(|(_, v)| v)
    }

    fn to_json(&self) -> Value {
        Value::Object(
            self.0
                .iter()
                .map(|(k, v)| (k.to_string(), v.json()))
                .collect::<Map<_, _>>(),
        )
    }
}

/// A single record: `key: value` lines, a one-row CSV, or a JSON object.
pub fn render_record(rec: &Record, fmt: Format) -> String {
    match fmt {
        Format::Human => {
            let width = rec.0.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            rec.0
                .iter()
                .map(|(k, v)| format!("{k:<width$}  {}\n", v.human()))
                .collect()
        }
        Format::Csv => render_table(std::slice::from_ref(rec), fmt),
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&rec.to_json()).unwrap()),
    }
}

/// Rows sharing the columns of the first row.
pub fn render_table(rows: &[Record], fmt: Format) -> String {
    let Some(first) = rows.first() else {
        return String::new();
    };
    let columns: Vec<&str> = first.0.iter().map(|(k, _)| *k).collect();
    match fmt {
        Format::Human => {
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| r.0.iter().map(|(_, v)| v.human()).collect())
                .collect();
            let widths: Vec<usize> = (0..columns.len())
                .map(|c| {
                    cells
                        .iter()
                        .map(|r| r[c].len())
                        .chain([columns[c].len()])
                        .max()
                        .unwrap()
                })
                .collect();
            let line = |items: Vec<&str>| {
                let s: Vec<String> = items
                    .iter()
                    .zip(&widths)
                    .map(|(t, w)| format!("{t:<w$}"))
                    .collect();
                format!("{}\n", s.join("  ").trim_end())
            };
            let mut out = line(columns.clone());
            for r in &cells {
                out.push_str(&line(r.iter().map(String::as_str).collect()));
            }
            out
        }
        Format::Csv => {
            let mut out = format!("{}\n", columns.join(","));
            for r in rows {
                let vals: Vec<String> = r.0.iter().map(|(_, v)| v.csv()).collect();
                out.push_str(&vals.join(","));
                out.push('\n');
            }
            out
        }
        Format::Json => {
            let arr = Value::Array(rows.iter().map(Record::to_json).collect());
            format!("{}\n", serde_json::to_string_pretty(&arr).unwrap())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec() -> Record {
        Record::new()
            .with("alpha", Field::Num(0.5))
            .with("value_bits", Field::Num(f64::INFINITY))
            .with("converged", Field::Bool(true))
            .with("qx_opt", Field::Dist(vec![("a".into(), 0.25), ("b".into(), 0.75)]))
            .with("note", Field::Text("x, y".into()))
            .with("k_value", Field::Empty)
    }

    #[test]
    fn human() {
        let s = render_record(&rec(), Format::Human);
        assert!(s.contains("alpha       0.500000"));
        assert!(s.contains("value_bits  inf"));
        assert!(s.contains("qx_opt      a=0.250000 b=0.750000"));
    }

    #[test]
    fn csv_quotes_and_precision() {
        let s = render_record(&rec(), Format::Csv);
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "alpha,value_bits,converged,qx_opt,note,k_value");
        assert_eq!(lines[1], "0.5,inf,true,a=0.25;b=0.75,\"x, y\",");
        let r = Record::new().with("v", Field::Num(1.0 / 3.0));
        assert!(render_record(&r, Format::Csv).contains("0.3333333333333333"));
    }

    #[test]
    fn json_handles_infinity() {
        let v: Value = serde_json::from_str(&render_record(&rec(), Format::Json)).unwrap();
        assert_eq!(v["value_bits"], "inf");
        assert_eq!(v["qx_opt"]["b"], 0.75);
        assert!(v["k_value"].is_null());
    }

    #[test]
    fn table_alignment() {
        let rows = vec![
            Record::new().with("a", Field::Int(1)).with("long_name", Field::Int(2)),
            Record::new().with("a", Field::Int(100)).with("long_name", Field::Int(3)),
        ];
        let s = render_table(&rows, Format::Human);
        assert_eq!(s, "a    long_name\n1    2\n100  3\n");
        assert_eq!(render_table(&rows, Format::Csv), "a,long_name\n1,2\n100,3\n");
    }
}
