//! CSV tables and run summaries.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::config::{Experiment, ExperimentConfig};

pub const TOOL_VERSION: &str = concat!("qmclab ", env!("CARGO_PKG_VERSION"));

/// Floats are written with 17 significant digits so they round-trip.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Bool(bool),
    Text(&'static str),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(v) => (*v).to_string(),
        }
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v.into())
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&'static str> for Cell {
    fn from(v: &'static str) -> Self {
        Cell::Text(v)
    }
}

/// Rows in trial order. The first four columns are always
/// `experiment, trial, seed, copies`.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    experiment: Experiment,
    header: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(experiment: Experiment, columns: &[&'static str]) -> Self {
        let mut header = vec!["experiment", "trial", "seed", "copies"];
        header.extend_from_slice(columns);
        Table {
            experiment,
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, trial: u64, seed: u64, copies: u64, values: Vec<Cell>) {
        assert_eq!(values.len() + 4, self.header.len(), "row width does not match header");
        let mut row = vec![
            Cell::Text(self.experiment.name()),
            trial.into(),
            seed.into(),
            copies.into(),
        ];
        row.extend(values);
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn header(&self) -> &[&'static str] {
        &self.header
    }

    /// CSV text: a `#` comment line, the header, then one line per row.
    pub fn to_csv(&self, comment: &str) -> String {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            writer
                .write_record(row.iter().map(Cell::render))
                .expect("in-memory write");
        }
        let body = String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("ASCII output");
        format!("# {comment}\n{body}")
    }
}

/// Headline statistics of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub experiment: Experiment,
    pub seed: u64,
    pub trials: u64,
    pub rows: usize,
    pub config_hash: String,
    pub metrics: BTreeMap<String, f64>,
    /// Free-form report lines.
    pub notes: Vec<String>,
    pub csv_path: PathBuf,
    pub summary_path: PathBuf,
}

impl Summary {
    pub fn metric(&self, key: &str) -> Option<f64> {
        self.metrics.get(key).copied()
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        writeln!(s, "# {}", comment_line(&self.config_hash)).unwrap();
        writeln!(s, "experiment: {}", self.experiment).unwrap();
        writeln!(s, "seed: {}", self.seed).unwrap();
        writeln!(s, "trials: {}", self.trials).unwrap();
        writeln!(s, "rows: {}", self.rows).unwrap();
        writeln!(s, "\nmetrics:").unwrap();
        for (k, v) in &self.metrics {
            writeln!(s, "  {k} = {}", format_float(*v)).unwrap();
        }
        if !self.notes.is_empty() {
            writeln!(s, "\nnotes:").unwrap();
            for line in &self.notes {
                writeln!(s, "  {line}").unwrap();
            }
        }
        s
    }
}

/// Metrics and notes produced by an experiment runner.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct Report {
    pub metrics: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn set(&mut self, key: impl Into<String>, value: f64) {
        self.metrics.insert(key.into(), value);
    }

    pub fn flag(&mut self, key: impl Into<String>, value: bool) {
        self.set(key, if value { 1.0 } else { 0.0 });
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }
}

pub fn config_hash(config: &ExperimentConfig) -> String {
    hex::encode(Sha256::digest(config.canonical_json().as_bytes()))
}

pub fn comment_line(hash: &str) -> String {
    format!("{TOOL_VERSION} config-sha256={hash}")
}

/// Writes `<out>/<experiment>.csv` and `<out>/<experiment>.summary.txt`.
pub fn write_outputs(out_dir: &Path, config: &ExperimentConfig, table: &Table, report: Report) -> io::Result<Summary> {
    fs::create_dir_all(out_dir)?;
    let hash = config_hash(config);
    let csv_path = out_dir.join(format!("{}.csv", config.experiment));
    let summary_path = out_dir.join(format!("{}.summary.txt", config.experiment));
    fs::write(&csv_path, table.to_csv(&comment_line(&hash)))?;
    let summary = Summary {
        experiment: config.experiment,
        seed: config.seed,
        trials: config.trials,
        rows: table.len(),
        config_hash: hash,
        metrics: report.metrics,
        notes: report.notes,
        csv_path,
        summary_path,
    };
    fs::write(&summary.summary_path, summary.render())?;
    Ok(summary)
}
