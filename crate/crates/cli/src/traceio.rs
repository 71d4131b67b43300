//! Trace files: CSV with a fixed header and JSON mirroring it.

use std::io::Write;
use std::path::Path;

use loxoforge_core::{LoxodromeSpec, LoxodromeTrace, VerificationReport};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const CSV_HEADER: [&str; 7] = ["u", "v", "x", "y", "z", "s", "angle_dev"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub u: f64,
    pub v: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub s: f64,
    pub angle_dev: f64,
}

#[derive(Debug, Serialize)]
struct TraceDoc<'a> {
    schema_version: u32,
    surface: &'a str,
    spec: &'a LoxodromeSpec,
    monotone: bool,
    diverging: bool,
    samples: &'a [Row],
    report: &'a VerificationReport,
}

pub fn rows(trace: &LoxodromeTrace, angle_dev: &[f64]) -> Vec<Row> {
    trace
        .samples
        .iter()
        .zip(angle_dev)
        .map(|(s, &a)| Row {
            u: s.u,
            v: s.v,
            x: s.point[0],
            y: s.point[1],
            z: s.point[2],
            s: s.s,
            angle_dev: a,
        })
        .collect()
}

/// 17 significant digits, enough to read every double back exactly.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv<W: Write>(out: W, rows: &[Row]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([r.u, r.v, r.x, r.y, r.z, r.s, r.angle_dev].map(num))?;
    }
    w.flush()
}

pub fn write_json<W: Write>(
    mut out: W,
    trace: &LoxodromeTrace,
    rows: &[Row],
    report: &VerificationReport,
) -> std::io::Result<()> {
    let doc = TraceDoc {
        schema_version: crate::config::SCHEMA_VERSION,
        surface: &trace.surface_id,
        spec: &trace.spec,
        monotone: trace.monotone,
        diverging: trace.diverging,
        samples: rows,
        report,
    };
    serde_json::to_writer_pretty(&mut out, &doc)?;
    writeln!(out)
}

/// Reads a CSV written by [`write_csv`]. At least two rows are required and
/// `u` must be strictly monotone.
pub fn read_csv(path: &Path) -> Result<Vec<Row>> {
    let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    let bad = |msg: String| CliError::Malformed {
        path: path.to_path_buf(),
        msg,
    };
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(file);
    let header = r.headers().map_err(|e| bad(e.to_string()))?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(bad(format!("expected header {}", CSV_HEADER.join(","))));
    }
    let mut out = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let mut vals = [0.0f64; 7];
        for (slot, field) in vals.iter_mut().zip(rec.iter()) {
            *slot = field
                .trim()
                .parse()
                .map_err(|_| bad(format!("row {}: `{field}` is not a number", i + 2)))?;
        }
        let [u, v, x, y, z, s, angle_dev] = vals;
        if ![u, v, x, y, z, s].iter().all(|t| t.is_finite()) {
            return Err(bad(format!("row {}: non-finite value", i + 2)));
        }
        out.push(Row { u, v, x, y, z, s, angle_dev });
    }
    if out.len() < 2 {
        return Err(bad("a trace needs at least two rows".into()));
    }
    let up = out.windows(2).all(|w| w[1].u > w[0].u);
    let down = out.windows(2).all(|w| w[1].u < w[0].u);
    if !(up || down) {
        return Err(bad("u column is not strictly monotone".into()));
    }
    Ok(out)
}
