//! File artifacts: sweep and SSH CSVs, run records and configs as JSON,
//! lattice documents and SVG text. Every error names the offending path.

use std::fs::{self, File};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ga::{GaConfig, GaRunRecord};
use crate::lattice::{load_lattice, Lattice};
use crate::ssh::SshRow;
use crate::sweep::{SweepResult, SweepRow};

fn csv_error(path: &Path) -> impl FnOnce(csv::Error) -> Error + '_ {
    move |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    }
}

pub fn write_text(path: impl AsRef<Path>, text: &str) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_text(path: impl AsRef<Path>) -> Result<String> {
    let path = path.as_ref();
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Pretty JSON with a trailing newline. Floats use the shortest
/// round-tripping decimal form.
pub fn write_json<T: Serialize>(value: &T, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut text = serde_json::to_string_pretty(value).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    text.push('\n');
    write_text(path, &text)
}

pub fn read_json<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T> {
    let path = path.as_ref();
    serde_json::from_str(&read_text(path)?).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_run_json(record: &GaRunRecord, path: impl AsRef<Path>) -> Result<()> {
    write_json(record, path)
}

pub fn read_run_json(path: impl AsRef<Path>) -> Result<GaRunRecord> {
    read_json(path)
}

pub fn load_ga_config(path: impl AsRef<Path>) -> Result<GaConfig> {
    read_json(path)
}

pub fn read_lattice_file(path: impl AsRef<Path>) -> Result<Lattice> {
    let path = path.as_ref();
    load_lattice(&read_text(path)?).map_err(|e| match e {
        Error::Parse { source, .. } => Error::Json {
            path: path.to_path_buf(),
            source,
        },
        other => other,
    })
}

pub const SWEEP_CSV_HEADER: &str =
    "n,x,c_nn_ordered,c_nn_optimized,generation_of_best,degenerate_ordered,degenerate_optimized";

/// Incremental sweep CSV: the header is written on creation and every row
/// is flushed as it arrives.
pub struct SweepCsvWriter {
    path: std::path::PathBuf,
    inner: csv::Writer<File>,
}

impl SweepCsvWriter {
    pub fn create(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let file = File::create(&path).map_err(|e| Error::io(&path, e))?;
        let mut inner = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(file);
        inner
            .write_record(SWEEP_CSV_HEADER.split(','))
            .map_err(csv_error(&path))?;
        inner.flush().map_err(|e| Error::io(&path, e))?;
        Ok(SweepCsvWriter { path, inner })
    }

    pub fn write_row(&mut self, row: &SweepRow) -> Result<()> {
        self.inner.serialize(row).map_err(csv_error(&self.path))?;
        self.inner.flush().map_err(|e| Error::io(&self.path, e))
    }
}

pub fn write_sweep_csv(result: &SweepResult, path: impl AsRef<Path>) -> Result<()> {
    let mut w = SweepCsvWriter::create(path)?;
    for row in &result.rows {
        w.write_row(row)?;
    }
    Ok(())
}

fn read_csv<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let mut reader = csv::Reader::from_path(path).map_err(csv_error(path))?;
    reader
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(csv_error(path))
}

pub fn read_sweep_csv(path: impl AsRef<Path>) -> Result<Vec<SweepRow>> {
    read_csv(path.as_ref())
}

pub fn write_ssh_csv(rows: &[SshRow], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_path(path).map_err(csv_error(path))?;
    for row in rows {
        w.serialize(row).map_err(csv_error(path))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_ssh_csv(path: impl AsRef<Path>) -> Result<Vec<SshRow>> {
    read_csv(path.as_ref())
}
