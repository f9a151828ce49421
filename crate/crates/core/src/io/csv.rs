//! Snapshot and diagnostics CSV files. Floats carry 17 significant digits.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::solver::{DiagnosticsSeries, Snapshot};

pub const SNAPSHOT_HEADER: &str = "t,x,v,u,P";

/// Columns of a snapshot file, in file order.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotTable {
    pub t: Vec<f64>,
    pub x: Vec<f64>,
    pub v: Vec<f64>,
    pub u: Vec<f64>,
    pub p: Vec<f64>,
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn write_snapshot_csv(grid: &Grid, snap: &Snapshot, path: &Path) -> Result<()> {
    let mut s = String::with_capacity(96 * (grid.n_cells() + 1));
    s.push_str(SNAPSHOT_HEADER);
    s.push('\n');
    for i in 0..grid.n_cells() {
        writeln!(
            s,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            snap.time,
            grid.center(i),
            snap.v.values[i],
            snap.u.values[i],
            snap.p.cells[i]
        )
        .expect("writing to a string");
    }
    write_file(path, &s)
}

pub fn read_snapshot_csv(path: &Path) -> Result<SnapshotTable> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines();
    if lines.next() != Some(SNAPSHOT_HEADER) {
        return Err(Error::Data(format!(
            "{}: header must be `{SNAPSHOT_HEADER}`",
            path.display()
        )));
    }
    let mut table = SnapshotTable {
        t: Vec::new(),
        x: Vec::new(),
        v: Vec::new(),
        u: Vec::new(),
        p: Vec::new(),
    };
    for (k, line) in lines.enumerate() {
        let fields = line
            .split(',')
            .map(str::parse::<f64>)
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Data(format!("{} line {}: {e}", path.display(), k + 2)))?;
        if fields.len() != 5 {
            return Err(Error::Data(format!(
                "{} line {}: expected 5 columns, found {}",
                path.display(),
                k + 2,
                fields.len()
            )));
        }
        table.t.push(fields[0]);
        table.x.push(fields[1]);
        table.v.push(fields[2]);
        table.u.push(fields[3]);
        table.p.push(fields[4]);
    }
    Ok(table)
}

/// One row per recorded state, initial row first.
pub fn write_diagnostics_csv(series: &DiagnosticsSeries, path: &Path) -> Result<()> {
    let mut s = String::from("t,dt,sup_u,sup_x,mass,boundary_flux,clip_count,clip_mass,P_left,P_right");
    for a in &series.alphas {
        write!(s, ",N_{a},D_{a},S_{a},F_{a}").expect("writing to a string");
    }
    s.push('\n');
    for r in series.rows() {
        write!(
            s,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{},{:.16e},{:.16e},{:.16e}",
            r.time,
            r.dt,
            r.sup_u,
            r.sup_x,
            r.mass,
            r.boundary_flux,
            r.clip_count,
            r.clip_mass,
            r.p_left,
            r.p_right
        )
        .expect("writing to a string");
        for k in 0..series.alphas.len() {
            write!(
                s,
                ",{:.16e},{:.16e},{:.16e},{:.16e}",
                r.lp_norms[k], r.dissipation[k], r.source_integral[k], r.forcing_integral[k]
            )
            .expect("writing to a string");
        }
        s.push('\n');
    }
    write_file(path, &s)
}
