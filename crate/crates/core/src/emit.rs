//! Deterministic CSV/JSON output.
//!
//! CSV cells carry 12 significant digits and are quoted per RFC 4180 only
//! when needed. JSON objects have a fixed key order. Identical inputs give
//! byte-identical files.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dynamics::Trajectory;
use crate::error::{Error, Result};
use crate::observables::ObservableRecord;

pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::param(format!("unknown output format `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Missing,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Num)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl Cell {
    fn csv_text(&self) -> String {
        match self {
            Cell::Num(x) => fmt_sig(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(t) => t.clone(),
            Cell::Missing => String::new(),
        }
    }

    fn json_value(&self) -> serde_json::Value {
        match self {
            Cell::Num(x) => serde_json::Number::from_f64(*x).map_or(serde_json::Value::Null, serde_json::Value::Number),
            Cell::Int(i) => serde_json::Value::from(*i),
            Cell::Text(t) => serde_json::Value::String(t.clone()),
            Cell::Missing => serde_json::Value::Null,
        }
    }
}

/// A column-ordered table.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self { columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, w: W) -> io::Result<()> {
        let mut wtr = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
        wtr.write_record(&self.columns)?;
        for row in &self.rows {
            wtr.write_record(row.iter().map(Cell::csv_text))?;
        }
        wtr.flush()
    }

    /// Array of objects. Keys appear in column order.
    pub fn write_json<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "[")?;
        for (r, row) in self.rows.iter().enumerate() {
            write!(w, "  {{")?;
            for (c, (name, cell)) in self.columns.iter().zip(row).enumerate() {
                if c > 0 {
                    write!(w, ", ")?;
                }
                write!(w, "{}: {}", serde_json::Value::String(name.clone()), cell.json_value())?;
            }
            writeln!(w, "}}{}", if r + 1 < self.rows.len() { "," } else { "" })?;
        }
        writeln!(w, "]")
    }

    pub fn write<W: Write>(&self, format: OutputFormat, w: W) -> io::Result<()> {
        match format {
            OutputFormat::Csv => self.write_csv(w),
            OutputFormat::Json => self.write_json(w),
        }
    }
}

/// Formats `x` with [`SIGNIFICANT_DIGITS`] significant digits, like `%.12g`.
pub fn fmt_sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// Writes to `path`, or to stdout when `path` is `None`.
pub fn write_to(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|source| Error::Io { path: p.to_path_buf(), source })?;
            let mut w = BufWriter::new(file);
            f(&mut w)
                .and_then(|_| w.flush())
                .map_err(|source| Error::Io { path: p.to_path_buf(), source })
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            f(&mut lock).map_err(|source| Error::Io { path: "<stdout>".into(), source })
        }
    }
}

pub fn emit_table(table: &Table, format: OutputFormat, path: Option<&Path>) -> Result<()> {
    write_to(path, |w| table.write(format, w))
}

/// Per-sample trajectory table: ρ entries (real and imaginary parts) in the
/// eigenbasis followed by the observables.
pub fn trajectory_table(traj: &Trajectory, records: &[ObservableRecord]) -> Table {
    let mut cols = vec!["s".to_string()];
    for i in 1..=3 {
        for j in 1..=3 {
            cols.push(format!("rho{i}{j}_re"));
            cols.push(format!("rho{i}{j}_im"));
        }
    }
    cols.extend(
        ["dark_population", "stored_energy", "ergotropy", "efficiency", "trace_distance_to_gibbs"]
            .map(String::from),
    );
    let mut table = Table::new(cols);
    for ((s, rho), rec) in traj.samples.iter().zip(records) {
        let mut row = vec![Cell::Num(*s)];
        for i in 0..3 {
            for j in 0..3 {
                row.push(Cell::Num(rho.entries[(i, j)].re));
                row.push(Cell::Num(rho.entries[(i, j)].im));
            }
        }
        row.push(rec.dark_population.into());
        row.push(rec.stored_energy.into());
        row.push(rec.ergotropy.into());
        row.push(rec.efficiency.into());
        row.push(rec.trace_distance_to_gibbs.into());
        table.push(row);
    }
    table
}
