//! Run records and their on-disk formats.
//!
//! * CSV: header `n,residual_p,residual_q,iterate_norm,phi_to_target,elapsed_s`,
//!   one row per iterate, 17 significant digits, summary as `#` footer lines.
//! * Log-log data: whitespace-separated `n residual` pairs, positive residuals only.
//! * JSON: `{"schema": 1, "config": …, "summary": …, "trace": …}`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::RunConfig;
use crate::solver::IterationTrace;

pub const SCHEMA_VERSION: u32 = 1;

pub const CSV_HEADER: [&str; 6] = [
    "n",
    "residual_p",
    "residual_q",
    "iterate_norm",
    "phi_to_target",
    "elapsed_s",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub nfe: usize,
    pub final_residual: f64,
    pub final_residual_dual: Option<f64>,
    pub final_norm: f64,
    pub final_norm_dual: Option<f64>,
    pub converged: bool,
    pub wall_time: f64,
}

impl RunSummary {
    /// Reads the summary off the trace's final row; `None` for an empty trace.
    pub fn from_trace(trace: &IterationTrace) -> Option<Self> {
        let last = trace.last()?;
        Some(Self {
            nfe: trace.nfe(),
            final_residual: last.residual,
            final_residual_dual: last.residual_dual,
            final_norm: last.iterate_norm,
            final_norm_dual: last.iterate_norm_dual,
            converged: trace.converged,
            wall_time: last.elapsed,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub config: RunConfig,
    pub summary: RunSummary,
    pub trace: IterationTrace,
}

#[derive(Serialize, Deserialize)]
struct JsonDocument<R> {
    schema: u32,
    #[serde(flatten)]
    record: R,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    }
}

fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

/// Writes the trace CSV followed by the summary footer.
pub fn write_csv<W: Write>(rec: &RunRecord, out: W, path: &Path) -> Result<()> {
    let mut w = csv::WriterBuilder::new().from_writer(out);
    w.write_record(CSV_HEADER).map_err(csv_err(path))?;
    for row in &rec.trace.rows {
        w.write_record([
            row.n.to_string(),
            fmt_f64(row.residual),
            fmt_opt(row.residual_dual),
            fmt_f64(row.iterate_norm),
            fmt_opt(row.phi_to_target),
            fmt_f64(row.elapsed),
        ])
        .map_err(csv_err(path))?;
    }
    let mut out = w.into_inner().map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e.into_error(),
    })?;
    let s = &rec.summary;
    let footer = [
        format!(
            "# solver={} operator={} init={}",
            rec.config.solver, rec.config.operator, rec.config.init
        ),
        format!("# nfe={}", s.nfe),
        format!("# final_residual_p={}", fmt_f64(s.final_residual)),
        format!("# final_residual_q={}", fmt_opt(s.final_residual_dual)),
        format!("# final_norm={}", fmt_f64(s.final_norm)),
        format!("# converged={}", s.converged),
        format!("# wall_time_s={}", fmt_f64(s.wall_time)),
    ];
    for line in footer {
        writeln!(out, "{line}").map_err(io_err(path))?;
    }
    out.flush().map_err(io_err(path))
}

pub fn export_csv(rec: &RunRecord, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    write_csv(rec, create(path)?, path)
}

/// One parsed CSV data row; absent optional columns are `None`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct CsvRow {
    pub n: usize,
    pub residual_p: f64,
    pub residual_q: Option<f64>,
    pub iterate_norm: f64,
    pub phi_to_target: Option<f64>,
    pub elapsed_s: f64,
}

/// Parses the data rows of a file written by [`export_csv`].
pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<CsvRow>> {
    let path = path.as_ref();
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(csv_err(path))?;
    r.deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(csv_err(path))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LoglogReport {
    pub written: usize,
    pub dropped: usize,
}

/// Writes `n residual` pairs, skipping non-positive residuals.
pub fn write_loglog<W: Write>(rec: &RunRecord, mut out: W, path: &Path) -> Result<LoglogReport> {
    let (kept, dropped): (Vec<_>, Vec<_>) = rec.trace.rows.iter().partition(|r| r.residual > 0.0);
    if kept.is_empty() {
        return Err(Error::EmptyPlot {
            dropped: dropped.len(),
        });
    }
    for row in &kept {
        writeln!(out, "{} {}", row.n, fmt_f64(row.residual)).map_err(io_err(path))?;
    }
    out.flush().map_err(io_err(path))?;
    Ok(LoglogReport {
        written: kept.len(),
        dropped: dropped.len(),
    })
}

pub fn export_loglog(rec: &RunRecord, path: impl AsRef<Path>) -> Result<LoglogReport> {
    let path = path.as_ref();
    // Check before creating the file so a failed export leaves nothing behind.
    if rec.trace.rows.iter().all(|r| r.residual <= 0.0) {
        return Err(Error::EmptyPlot {
            dropped: rec.trace.rows.len(),
        });
    }
    write_loglog(rec, create(path)?, path)
}

pub fn to_json(rec: &RunRecord) -> serde_json::Value {
    serde_json::to_value(JsonDocument {
        schema: SCHEMA_VERSION,
        record: rec,
    })
    .expect("run records serialize")
}

pub fn export_json(rec: &RunRecord, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = create(path)?;
    let doc = JsonDocument {
        schema: SCHEMA_VERSION,
        record: rec,
    };
    serde_json::to_writer_pretty(&mut out, &doc).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    writeln!(out).map_err(io_err(path))?;
    out.flush().map_err(io_err(path))
}

pub fn load_json(path: impl AsRef<Path>) -> Result<RunRecord> {
    let path = path.as_ref();
    let file = File::open(path).map_err(io_err(path))?;
    let doc: JsonDocument<RunRecord> = serde_json::from_reader(std::io::BufReader::new(file))
        .map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        })?;
    if doc.schema != SCHEMA_VERSION {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            message: format!("unsupported schema {}", doc.schema),
        });
    }
    Ok(doc.record)
}

fn read_numeric_rows(path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .map_err(csv_err(path))?;
    let mut rows = Vec::new();
    for (line, record) in r.records().enumerate() {
        let record = record.map_err(csv_err(path))?;
        let row = record
            .iter()
            .map(|field| {
                field.parse::<f64>().map_err(|e| Error::Parse {
                    path: path.to_path_buf(),
                    message: format!("record {}: `{field}`: {e}", line + 1),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

/// Reads a kernel matrix: row `i` holds `k(t_i, s_0), …, k(t_i, s_M)`.
pub fn read_kernel_csv(path: impl AsRef<Path>) -> Result<Vec<Vec<f64>>> {
    read_numeric_rows(path.as_ref())
}

/// Reads node samples, one per record; with two columns the second is the value.
pub fn read_samples_csv(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let path = path.as_ref();
    read_numeric_rows(path)?
        .into_iter()
        .map(|row| {
            row.last().copied().ok_or_else(|| Error::Parse {
                path: path.to_path_buf(),
                message: "empty record".into(),
            })
        })
        .collect()
}

/// `base` with `-suffix` spliced in before the extension.
pub fn suffixed_path(base: &Path, suffix: &str) -> PathBuf {
    let stem = base
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match base.extension() {
        Some(ext) => format!("{stem}-{suffix}.{}", ext.to_string_lossy()),
        None => format!("{stem}-{suffix}"),
    };
    base.with_file_name(name)
}
