//! CSV output with a `# key: value` metadata header.

use std::fmt::Write as _;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl ResultTable {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            metadata: Vec::new(),
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn set_meta(&mut self, key: &str, value: impl Into<String>) {
        let value = value.into();
        match self.metadata.iter_mut().find(|(k, _)| k == key) {
            Some(entry) => entry.1 = value,
            None => self.metadata.push((key.to_string(), value)),
        }
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k}: {v}");
        }
        let mut writer = csv::WriterBuilder::new().from_writer(Vec::new());
        writer.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            // Rust's `Display` for f64 is the shortest string that round-trips.
            writer
                .write_record(row.iter().map(|v| format_number(*v)))
                .expect("in-memory write");
        }
        let body = writer.into_inner().expect("in-memory flush");
        out.push_str(std::str::from_utf8(&body).expect("ascii output"));
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, CliError> {
        let mut metadata = Vec::new();
        let mut body_start = 0;
        for line in text.split_inclusive('\n') {
            let Some(rest) = line.strip_prefix('#') else { break };
            let (k, v) = rest
                .trim()
                .split_once(':')
                .ok_or_else(|| CliError::Table(format!("bad header line {line:?}")))?;
            metadata.push((k.trim().to_string(), v.trim().to_string()));
            body_start += line.len();
        }
        let mut reader = csv::ReaderBuilder::new().from_reader(&text.as_bytes()[body_start..]);
        let columns = reader
            .headers()
            .map_err(|e| CliError::Table(e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect::<Vec<_>>();
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| CliError::Table(e.to_string()))?;
            if record.len() != columns.len() {
                return Err(CliError::Table("ragged row".into()));
            }
            rows.push(
                record
                    .iter()
                    .map(|s| s.parse::<f64>().map_err(|e| CliError::Table(format!("{s:?}: {e}"))))
                    .collect::<Result<Vec<_>, _>>()?,
            );
        }
        Ok(Self { metadata, columns, rows })
    }
}

fn format_number(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        format!("{v}")
    }
}
