//! Report tables: tab-separated with a header row, or a JSON array.

use std::io::{self, Write};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Tsv,
    Json,
}

/// A report row with a fixed column order for TSV output. Column names are
/// the serialized field names.
pub trait Row: Serialize {
    const COLUMNS: &'static [&'static str];
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".to_string(),
        other => other.to_string(),
    }
}

pub fn write_table<R: Row>(out: &mut dyn Write, format: Format, rows: &[R]) -> io::Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, rows)?;
            writeln!(out)
        }
        Format::Tsv => {
            writeln!(out, "{}", R::COLUMNS.join("\t"))?;
            for row in rows {
                let value = serde_json::to_value(row).map_err(io::Error::other)?;
                let cells: Vec<String> = R::COLUMNS.iter().map(|c| cell(&value[*c])).collect();
                writeln!(out, "{}", cells.join("\t"))?;
            }
            Ok(())
        }
    }
}

/// `key = value` lines for TSV, one JSON object otherwise.
pub fn write_record<R: Row>(out: &mut dyn Write, format: Format, record: &R) -> io::Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, record)?;
            writeln!(out)
        }
        Format::Tsv => {
            let value = serde_json::to_value(record).map_err(io::Error::other)?;
            for c in R::COLUMNS {
                writeln!(out, "{c} = {}", cell(&value[*c]))?;
            }
            Ok(())
        }
    }
}
