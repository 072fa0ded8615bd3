//! CSV writers for snapshots and diagnostic time series.
//!
//! Floats use Rust's shortest round-trip formatting and every line ends in a
//! single `\n`, so identical inputs produce identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::diagnostics::{DiagnosticsRecord, RECORD_COLUMNS};
use crate::solver::FieldSnapshot;
use crate::waves::WaveProfile;
use crate::{Error, Result};

pub const SNAPSHOT_HEADER: &str = "x,v,u,theta,z,V,U,Theta";

fn push_row(out: &mut String, values: &[f64]) {
    for (k, x) in values.iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        write!(out, "{x:?}").expect("writing to a String");
    }
    out.push('\n');
}

pub fn timeseries_header() -> String {
    RECORD_COLUMNS.join(",")
}

/// Snapshot table: solution columns next to the wave on the same nodes.
pub fn snapshot_csv(snapshot: &FieldSnapshot, profile: &WaveProfile) -> Result<String> {
    if snapshot.grid != profile.grid {
        return Err(Error::Internal("snapshot and wave profile live on different grids".into()));
    }
    let mut out = String::with_capacity(160 * (snapshot.grid.n() + 1));
    out.push_str(SNAPSHOT_HEADER);
    out.push('\n');
    for i in 0..snapshot.grid.n() {
        push_row(
            &mut out,
            &[
                snapshot.grid.x(i),
                snapshot.v[i],
                snapshot.u[i],
                snapshot.theta[i],
                snapshot.z[i],
                profile.v[i],
                profile.u[i],
                profile.theta[i],
            ],
        );
    }
    Ok(out)
}

/// Time-series table; `t` must be strictly increasing.
pub fn timeseries_csv(records: &[DiagnosticsRecord]) -> Result<String> {
    for w in records.windows(2) {
        if !(w[1].t > w[0].t) {
            return Err(Error::Internal(format!(
                "time series must be strictly increasing in t, got {} after {}",
                w[1].t, w[0].t
            )));
        }
    }
    let mut out = timeseries_header();
    out.push('\n');
    for r in records {
        push_row(&mut out, &r.values());
    }
    Ok(out)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
        }
    }
    fs::write(path, text).map_err(|e| io_error(path, e))
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Io { path: path.display().to_string(), message: e.to_string() }
}

pub fn write_snapshot_csv(snapshot: &FieldSnapshot, profile: &WaveProfile, path: &Path) -> Result<()> {
    write_text(path, &snapshot_csv(snapshot, profile)?)
}

pub fn write_timeseries_csv(records: &[DiagnosticsRecord], path: &Path) -> Result<()> {
    write_text(path, &timeseries_csv(records)?)
}
