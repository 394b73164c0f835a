//! CSV and manifest outputs.
//!
//! Floats are written in scientific notation with 17 significant digits,
//! which round-trips every `f64` exactly.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::problems::ReferenceSolutionSet;
use crate::solver::RunRecord;

use super::{AggregateSummary, ExperimentConfig};

pub const TRACE_FILE: &str = "trace.csv";
pub const FINAL_POSITIONS_FILE: &str = "final_positions.csv";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const MANIFEST_FILE: &str = "manifest.txt";

pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(format_float).unwrap_or_default()
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).map_err(|source| Error::Csv {
        path: path.to_path_buf(),
        source,
    })
}

fn numbered(prefix: &str, n: usize) -> impl Iterator<Item = String> + '_ {
    (1..=n).map(move |k| format!("{prefix}_{k}"))
}

/// Writes `trace.csv`, `final_positions.csv`, `summary.csv` and
/// `manifest.txt` into `dir`, creating it if needed.
pub fn write_outputs(
    records: &[RunRecord],
    summary: &AggregateSummary,
    config: &ExperimentConfig,
    dir: &Path,
) -> Result<()> {
    fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;

    let path = dir.join(TRACE_FILE);
    let csv_err = |source| Error::Csv {
        path: path.clone(),
        source,
    };
    let mut w = csv_writer(&path)?;
    w.write_record(["run", "iter", "err2", "igd"]).map_err(csv_err)?;
    for r in records {
        for m in r.trace.records() {
            w.write_record([
                r.run.to_string(),
                m.iteration.to_string(),
                opt(m.err2),
                opt(m.igd),
            ])
            .map_err(csv_err)?;
        }
    }
    w.flush().map_err(|source| Error::Io {
        path: path.clone(),
        source,
    })?;

    let path = dir.join(FINAL_POSITIONS_FILE);
    let csv_err = |source| Error::Csv {
        path: path.clone(),
        source,
    };
    let (m, d) = records
        .first()
        .and_then(|r| Some((r.weights.first()?.len(), r.positions.first()?.len())))
        .unwrap_or((0, 0));
    let mut w = csv_writer(&path)?;
    let header: Vec<String> = ["run".to_string(), "agent".to_string()]
        .into_iter()
        .chain(numbered("w", m))
        .chain(numbered("x", d))
        .chain(numbered("g", m))
        .collect();
    w.write_record(&header).map_err(csv_err)?;
    for r in records {
        for (i, ((wv, x), g)) in r.weights.iter().zip(&r.positions).zip(&r.images).enumerate() {
            let row: Vec<String> = [r.run.to_string(), i.to_string()]
                .into_iter()
                .chain(wv.as_slice().iter().copied().map(format_float))
                .chain(x.iter().copied().map(format_float))
                .chain(g.iter().copied().map(format_float))
                .collect();
            w.write_record(&row).map_err(csv_err)?;
        }
    }
    w.flush().map_err(|source| Error::Io {
        path: path.clone(),
        source,
    })?;

    let path = dir.join(SUMMARY_FILE);
    let csv_err = |source| Error::Csv {
        path: path.clone(),
        source,
    };
    let mut w = csv_writer(&path)?;
    w.write_record(["iter", "err2_mean", "igd_mean"]).map_err(csv_err)?;
    for row in &summary.rows {
        w.write_record([row.iteration.to_string(), opt(row.err2), opt(row.igd)])
            .map_err(csv_err)?;
    }
    w.flush().map_err(|source| Error::Io {
        path: path.clone(),
        source,
    })?;

    let path = dir.join(MANIFEST_FILE);
    fs::write(&path, config.to_manifest()).map_err(|source| Error::Io { path, source })?;
    Ok(())
}

/// Writes a reference set as CSV with columns `w_1..w_m, x_1..x_d, g_1..g_m`.
pub fn write_reference_set<W: Write>(set: &ReferenceSolutionSet, out: W) -> Result<()> {
    let stdout_err = |source| Error::Csv {
        path: "<output>".into(),
        source,
    };
    let mut w = csv::Writer::from_writer(out);
    let (m, d) = set
        .entries()
        .first()
        .map_or((0, 0), |e| (e.weight.len(), e.position.len()));
    let header: Vec<String> = numbered("w", m)
        .chain(numbered("x", d))
        .chain(numbered("g", m))
        .collect();
    w.write_record(&header).map_err(stdout_err)?;
    for e in set.entries() {
        let row: Vec<String> = e
            .weight
            .as_slice()
            .iter()
            .chain(&e.position)
            .chain(&e.image)
            .copied()
            .map(format_float)
            .collect();
        w.write_record(&row).map_err(stdout_err)?;
    }
    w.flush().map_err(|source| Error::Io {
        path: "<output>".into(),
        source,
    })
}
