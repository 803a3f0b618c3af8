//! CSV and JSON writers.
//!
//! Numbers are written in shortest round-trip form with `.` as decimal
//! separator. In trajectory files the `omega` column holds the sample active
//! on the step that starts at the row's time; the final row repeats the last
//! sample, and a zero-length field reports 0.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::dynamics::{MultiModeTrajectory, Trajectory};
use crate::error::{Error, Result};
use crate::field::ControlField;
use crate::reachable::{Prescan, ReachableMap};

fn csv_writer(path: &Path) -> Result<csv::Writer<File>> {
    csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |e| Error::Io(format!("{}: {e}", path.display()))
}

fn omega_at(field: &ControlField, k: usize) -> f64 {
    match field.samples() {
        [] => 0.0,
        s => s[k.min(s.len() - 1)],
    }
}

/// `t_q,re_c1,im_c1,re_y,im_y,pop,omega`, one row per step boundary.
pub fn write_trajectory(path: &Path, traj: &Trajectory, field: &ControlField) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["t_q", "re_c1", "im_c1", "re_y", "im_y", "pop", "omega"])
        .map_err(csv_err(path))?;
    for (k, (t, s)) in traj.times.iter().zip(&traj.states).enumerate() {
        w.serialize((
            t,
            s.c1.re,
            s.c1.im,
            s.y.re,
            s.y.im,
            s.population(),
            omega_at(field, k),
        ))
        .map_err(csv_err(path))?;
    }
    w.flush()?;
    Ok(())
}

/// Multi-mode trajectory: `t_q,re_c1,im_c1,re_y1,im_y1,…,pop,omega`.
pub fn write_multimode_trajectory(
    path: &Path,
    traj: &MultiModeTrajectory,
    field: &ControlField,
) -> Result<()> {
    let n_modes = traj.states.first().map_or(0, |s| s.y.len());
    let mut header = vec!["t_q".to_string(), "re_c1".into(), "im_c1".into()];
    for l in 1..=n_modes {
        header.push(format!("re_y{l}"));
        header.push(format!("im_y{l}"));
    }
    header.push("pop".into());
    header.push("omega".into());
    let mut w = csv_writer(path)?;
    w.write_record(&header).map_err(csv_err(path))?;
    for (k, (t, s)) in traj.times.iter().zip(&traj.states).enumerate() {
        let mut row = vec![*t, s.c1.re, s.c1.im];
        for y in &s.y {
            row.push(y.re);
            row.push(y.im);
        }
        row.push(s.population());
        row.push(omega_at(field, k));
        w.serialize(row).map_err(csv_err(path))?;
    }
    w.flush()?;
    Ok(())
}

/// `t_q,omega`, one row per sample at the start of its step.
pub fn write_field(path: &Path, field: &ControlField) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["t_q", "omega"]).map_err(csv_err(path))?;
    for (k, &omega) in field.samples().iter().enumerate() {
        w.serialize((k as f64 * field.dt(), omega))
            .map_err(csv_err(path))?;
    }
    w.flush()?;
    Ok(())
}

/// `t_q,pop_target,status,final_cost`, row-major.
pub fn write_grid(path: &Path, map: &ReachableMap) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["t_q", "pop_target", "status", "final_cost"])
        .map_err(csv_err(path))?;
    for c in &map.cells {
        w.serialize((c.t_q, c.pop_target, c.status.as_str(), c.final_cost))
            .map_err(csv_err(path))?;
    }
    w.flush()?;
    Ok(())
}

/// `omega,t_q,pop` for each constant-field boundary trajectory.
pub fn write_boundaries(path: &Path, prescan: &Prescan) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["omega", "t_q", "pop"])
        .map_err(csv_err(path))?;
    for curve in &prescan.curves {
        for (t, pop) in curve.times.iter().zip(&curve.pops) {
            w.serialize((curve.omega, t, pop)).map_err(csv_err(path))?;
        }
    }
    w.flush()?;
    Ok(())
}

/// `omega_max,cost` for a bound sweep.
pub fn write_sweep(path: &Path, points: &[(f64, f64)]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["omega_max", "cost"])
        .map_err(csv_err(path))?;
    for p in points {
        w.serialize(p).map_err(csv_err(path))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut f = BufWriter::new(
        File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?,
    );
    serde_json::to_writer_pretty(&mut f, value).map_err(|e| Error::Io(e.to_string()))?;
    f.write_all(b"\n")?;
    f.flush()?;
    Ok(())
}
