use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::montecarlo::{Comparison, MonteCarloSummary};
use crate::harness::run::{StepRecord, TrialResult};

/// File names written by [`export_results`].
pub const TRAJECTORY_FILE: &str = "trajectory.csv";
pub const DET_TRACE_FILE: &str = "det_trace.csv";
pub const SUMMARY_FILE: &str = "summary.txt";

/// One row of the per-step CSV. Field order is the column order.
///
/// Euler angles are extracted from the estimated attitude for reporting only;
/// `syaw`, `spitch`, `sroll` are the attitude-error standard deviations about
/// z, y and x.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub vx: f64,
    pub vy: f64,
    pub vz: f64,
    pub yaw: f64,
    pub pitch: f64,
    pub roll: f64,
    pub sx: f64,
    pub sy: f64,
    pub sz: f64,
    pub svx: f64,
    pub svy: f64,
    pub svz: f64,
    pub syaw: f64,
    pub spitch: f64,
    pub sroll: f64,
    pub det: f64,
    pub anchor_x: f64,
    pub anchor_y: f64,
    pub anchor_z: f64,
}

impl From<&StepRecord> for CsvRow {
    fn from(r: &StepRecord) -> Self {
        let (yaw, pitch, roll) = r.estimate.attitude.yaw_pitch_roll();
        let p = r.estimate.position;
        let v = r.estimate.velocity;
        Self {
            t: r.t,
            x: p.x,
            y: p.y,
            z: p.z,
            vx: v.x,
            vy: v.y,
            vz: v.z,
            yaw,
            pitch,
            roll,
            sx: r.position_std.x,
            sy: r.position_std.y,
            sz: r.position_std.z,
            svx: r.velocity_std.x,
            svy: r.velocity_std.y,
            svz: r.velocity_std.z,
            syaw: r.attitude_std.z,
            spitch: r.attitude_std.y,
            sroll: r.attitude_std.x,
            det: r.det,
            anchor_x: r.anchor.x,
            anchor_y: r.anchor.y,
            anchor_z: r.anchor.z,
        }
    }
}

/// One row of the planner determinant trace.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetTraceRow {
    pub step: usize,
    pub t: f64,
    pub anchor_x: f64,
    pub anchor_y: f64,
    pub anchor_z: f64,
    pub det: f64,
    pub grad_norm: f64,
}

/// Paths written by [`export_results`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExportedFiles {
    pub trajectory: PathBuf,
    pub det_trace: PathBuf,
    pub summary: PathBuf,
}

/// Writes the per-step CSV, the planner determinant trace and the summary
/// text into `dir`, creating it if needed.
pub fn export_results(result: &TrialResult, dir: &Path) -> Result<ExportedFiles> {
    fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.to_owned(), source })?;
    let files = ExportedFiles {
        trajectory: dir.join(TRAJECTORY_FILE),
        det_trace: dir.join(DET_TRACE_FILE),
        summary: dir.join(SUMMARY_FILE),
    };
    write_csv(&files.trajectory, result.records.iter().map(CsvRow::from))?;
    write_csv(
        &files.det_trace,
        result.planner_trace.iter().map(|p| DetTraceRow {
            step: p.step,
            t: p.t,
            anchor_x: p.anchor.x,
            anchor_y: p.anchor.y,
            anchor_z: p.anchor.z,
            det: p.det,
            grad_norm: p.grad_norm,
        }),
    )?;
    fs::write(&files.summary, trial_summary(result))
        .map_err(|source| Error::Io { path: files.summary.clone(), source })?;
    Ok(files)
}

fn write_csv<R: Serialize>(path: &Path, rows: impl Iterator<Item = R>) -> Result<()> {
    let csv_err = |source| Error::Csv { path: path.to_owned(), source };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    for row in rows {
        w.serialize(row).map_err(csv_err)?;
    }
    w.flush().map_err(|source| Error::Io { path: path.to_owned(), source })
}

/// Reads a file written by [`export_results`] back into rows.
pub fn read_csv<R: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<R>> {
    let csv_err = |source| Error::Csv { path: path.to_owned(), source };
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    r.deserialize().map(|row| row.map_err(csv_err)).collect()
}

/// Human-readable report of one trial.
pub fn trial_summary(result: &TrialResult) -> String {
    let last = result.last();
    let s = &result.stats;
    let mut out = String::new();
    let _ = writeln!(out, "scenario: {}", result.name);
    let _ = writeln!(out, "seed: {}", result.seed);
    let _ = writeln!(out, "duration: {} s ({} IMU steps)", last.t, s.imu_steps);
    let _ = writeln!(out);
    let _ = writeln!(out, "{:<16}{:>14}", "RMSE", "value");
    let _ = writeln!(out, "{:<16}{:>14.6}", "position [m]", result.rmse.position);
    let _ = writeln!(out, "{:<16}{:>14.6}", "velocity [m/s]", result.rmse.velocity);
    let _ = writeln!(out, "{:<16}{:>14.6}", "attitude [deg]", result.rmse.attitude_deg);
    let _ = writeln!(out);
    let _ = writeln!(out, "mean position NEES: {:.4}", result.mean_nees);
    let p = last.position_std;
    let _ = writeln!(out, "final position std [m]: x {:.6}  y {:.6}  z {:.6}", p.x, p.y, p.z);
    let _ = writeln!(out, "final det(AtA): {:.6}", last.det);
    let _ = writeln!(
        out,
        "ranges: {} applied, {} gated, {} skipped; planner ticks: {} ({} skipped); attitude-reset warnings: {}",
        s.range_updates, s.range_gated, s.range_skipped, s.planner_ticks, s.planner_skipped, s.reset_warnings
    );
    let _ = writeln!(out, "final anchors:");
    for a in &result.final_anchors {
        let q = a.position;
        let role = if a.is_mobile() { "mobile" } else { "fixed" };
        let _ = writeln!(out, "  {:>3} {:<6} ({:.4}, {:.4}, {:.4})", a.id, role, q.x, q.y, q.z);
    }
    out
}

/// Human-readable report of a Monte-Carlo batch.
pub fn monte_carlo_summary(s: &MonteCarloSummary) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scenario: {}", s.name);
    let _ = writeln!(out, "trials: {} completed, {} failed", s.completed, s.failures.len());
    for f in &s.failures {
        let _ = writeln!(out, "  seed {}: {}", f.seed, f.message);
    }
    let _ = writeln!(out, "{:<16}{:>14}{:>14}", "RMSE", "mean", "std");
    for (label, st) in
        [("position [m]", s.position), ("velocity [m/s]", s.velocity), ("attitude [deg]", s.attitude_deg)]
    {
        let _ = writeln!(out, "{label:<16}{:>14.6}{:>14.6}", st.mean, st.std);
    }
    let _ = writeln!(out, "mean position NEES: {:.4}", s.mean_nees);
    let [x, y, z] = s.final_position_std;
    let _ = writeln!(out, "mean final position std [m]: x {x:.6}  y {y:.6}  z {z:.6}");
    out
}

/// Side-by-side table of a comparison, with percentage differences.
pub fn comparison_summary(c: &Comparison) -> String {
    let (a, b) = (c.candidate.means(), c.reference.means());
    let pct = c.percent_difference();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "trials: {} ({} / {} completed)",
        c.candidate.trials, c.candidate.completed, c.reference.completed
    );
    let _ = writeln!(out, "{:<16}{:>16}{:>16}{:>12}", "RMSE", c.candidate.name, c.reference.name, "diff [%]");
    for (label, x, y, d) in [
        ("position [m]", a.position, b.position, pct.position),
        ("velocity [m/s]", a.velocity, b.velocity, pct.velocity),
        ("attitude [deg]", a.attitude_deg, b.attitude_deg, pct.attitude_deg),
    ] {
        let _ = writeln!(out, "{label:<16}{x:>16.6}{y:>16.6}{d:>+12.2}");
    }
    out
}
