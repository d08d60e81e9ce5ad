use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::{BenchError, ExperimentConfig, SummaryStats};
use crate::search::RunRecord;

/// 17 significant digits in scientific notation: exact round trip for `f64`.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// One row per execution:
/// `replication,index,source,t0..t{d-1},rho0..rho{n-1},running_min`, where the
/// `t` columns are normalized test coordinates and `index` is one-based.
pub fn write_runs_csv<W: Write>(records: &[RunRecord], out: &mut W) -> std::io::Result<()> {
    let dim = records
        .iter()
        .flat_map(|r| r.rows.first())
        .map(|row| row.test.dim())
        .next()
        .unwrap_or(0);
    let n = records.first().map_or(0, |r| r.winners.len());
    let mut header = vec!["replication".to_string(), "index".into(), "source".into()];
    header.extend((0..dim).map(|i| format!("t{i}")));
    header.extend((0..n).map(|i| format!("rho{i}")));
    header.push("running_min".into());
    writeln!(out, "{}", header.join(","))?;
    for (rep, record) in records.iter().enumerate() {
        for (k, (row, run_min)) in record.rows.iter().zip(record.running_minimum()).enumerate() {
            let mut fields = vec![rep.to_string(), (k + 1).to_string(), row.source.to_string()];
            fields.extend(row.test.coords().iter().map(|&v| format_float(v)));
            fields.extend(row.robustness.iter().map(|&v| format_float(v)));
            fields.push(format_float(run_min));
            writeln!(out, "{}", fields.join(","))?;
        }
    }
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>, BenchError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| BenchError::Io {
            path: path.to_path_buf(),
            source,
        })
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> BenchError + '_ {
    move |source| BenchError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub(crate) fn write_runs_file(records: &[RunRecord], path: &Path) -> Result<(), BenchError> {
    let mut w = create(path)?;
    write_runs_csv(records, &mut w).map_err(io_err(path))?;
    w.flush().map_err(io_err(path))
}

pub fn write_summary_json(summary: &SummaryStats, path: &Path) -> Result<(), BenchError> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, summary).map_err(|e| BenchError::Io {
        path: path.to_path_buf(),
        source: e.into(),
    })?;
    writeln!(w).map_err(io_err(path))?;
    w.flush().map_err(io_err(path))
}

pub fn write_config_json(cfg: &ExperimentConfig, path: &Path) -> Result<(), BenchError> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, cfg).map_err(|e| BenchError::Io {
        path: path.to_path_buf(),
        source: e.into(),
    })?;
    writeln!(w).map_err(io_err(path))?;
    w.flush().map_err(io_err(path))
}
