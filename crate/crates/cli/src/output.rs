//! Tabular output in CSV, TSV or a JSON envelope.
//!
//! Every row type has a fixed header list; the JSON form wraps the same rows
//! together with the graph description, the run parameters and a summary.

use std::io::Write;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

use pagtc_core::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Tsv,
    Json,
}

/// A record with a stable column set.
pub trait Row: Serialize {
    const HEADERS: &'static [&'static str];
}

/// Percentage with one decimal.
pub fn pct(count: usize, n: usize) -> String {
    format!("{:.1}", 100.0 * count as f64 / n as f64)
}

pub fn graph_info(source: &str, graph: &Graph) -> Value {
    json!({
        "source": source,
        "nodes": graph.node_count(),
        "edges": graph.edge_count(),
    })
}

pub struct Report<R: Row> {
    pub command: &'static str,
    pub graph: Value,
    pub params: Value,
    pub rows: Vec<R>,
    pub summary: Value,
}

impl<R: Row> Report<R> {
    /// Rows go to `out`; in the delimited formats the summary goes to
    /// `notes` as `# key: value` lines.
    pub fn write(
        &self,
        format: Format,
        out: &mut dyn Write,
        notes: &mut dyn Write,
    ) -> anyhow::Result<()> {
        match format {
            Format::Json => {
                let doc = json!({
                    "command": self.command,
                    "graph": self.graph,
                    "params": self.params,
                    "rows": self.rows,
                    "summary": self.summary,
                });
                serde_json::to_writer_pretty(&mut *out, &doc)?;
                writeln!(out)?;
            }
            Format::Csv | Format::Tsv => {
                write_rows(format, &self.rows, out)?;
                if let Value::Object(map) = &self.summary {
                    for (key, value) in map {
                        let text = match value {
                            Value::String(s) => s.clone(),
                            other => other.to_string(),
                        };
                        writeln!(notes, "# {key}: {text}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Header line plus rows; the header is written even when there are no rows.
pub fn write_rows<R: Row>(format: Format, rows: &[R], out: &mut dyn Write) -> anyhow::Result<()> {
    let delimiter = if format == Format::Tsv { b'\t' } else { b',' };
    let mut writer = csv::WriterBuilder::new()
        .delimiter(delimiter)
        .has_headers(false)
        .from_writer(out);
    writer.write_record(R::HEADERS)?;
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Pair {
        name: String,
        value: Option<f64>,
    }

    impl Row for Pair {
        const HEADERS: &'static [&'static str] = &["name", "value"];
    }

    fn render(format: Format, rows: &[Pair]) -> String {
        let mut buf = Vec::new();
        write_rows(format, rows, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn quoting_and_missing_values() {
        let rows = [
            Pair {
                name: "a,b".into(),
                value: Some(1.5),
            },
            Pair {
                name: "c".into(),
                value: None,
            },
        ];
        assert_eq!(render(Format::Csv, &rows), "name,value\n\"a,b\",1.5\nc,\n");
        assert_eq!(render(Format::Tsv, &rows), "name\tvalue\na,b\t1.5\nc\t\n");
        assert_eq!(render(Format::Csv, &[]), "name,value\n");
    }

    #[test]
    fn percentages_use_one_decimal() {
        assert_eq!(pct(9, 15), "60.0");
        assert_eq!(pct(10, 15), "66.7");
        assert_eq!(pct(15, 15), "100.0");
    }
}
