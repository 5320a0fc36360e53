//! CSV writers for diagnostics, solution snapshots and convergence tables.

use std::io::{self, Write};

use crate::driver::{DiagnosticsRow, EocTable};
use crate::physics::DoubleWell;
use crate::space::{DgSpace, FieldCoeffs};

pub const DIAGNOSTICS_HEADER: &str =
    "t,mass,momentum,energy,energy_delta,viscous_dissipation,max_abs_velocity,min_density,newton_iters";
pub const SNAPSHOT_HEADER: &str = "x,rho,v,q,tau";
pub const EOC_HEADER: &str = "N,err_rho,eoc_rho,err_v,eoc_v";

/// Streams diagnostics rows so that a partial file survives an aborted run.
pub struct DiagnosticsWriter<W: Write> {
    out: W,
}

impl<W: Write> DiagnosticsWriter<W> {
    pub fn new(mut out: W) -> io::Result<Self> {
        writeln!(out, "{DIAGNOSTICS_HEADER}")?;
        Ok(Self { out })
    }

    pub fn write_row(&mut self, r: &DiagnosticsRow) -> io::Result<()> {
        writeln!(
            self.out,
            "{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{}",
            r.t,
            r.mass,
            r.momentum,
            r.energy,
            r.energy_delta,
            r.viscous_dissipation,
            r.max_abs_velocity,
            r.min_density,
            r.newton_iters
        )?;
        self.out.flush()
    }

    /// Appends the trailing marker of a run that stopped at `step`.
    pub fn abort(&mut self, step: usize) -> io::Result<()> {
        writeln!(self.out, "# aborted at step {step}")?;
        self.out.flush()
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

/// Reference points used for plotting: equispaced with both endpoints, or the midpoint alone.
pub fn sample_points(points_per_elem: usize) -> Vec<f64> {
    match points_per_elem {
        0 | 1 => vec![0.0],
        m => (0..m).map(|j| -1.0 + 2.0 * j as f64 / (m - 1) as f64).collect(),
    }
}

/// Rows `(x, rho, v, q, tau)`; without a `tau` field, `W'(rho)` is written.
pub fn snapshot_rows(
    space: &DgSpace,
    fields: [&FieldCoeffs; 3],
    tau: Option<&FieldCoeffs>,
    well: &DoubleWell,
    points_per_elem: usize,
) -> Vec<[f64; 5]> {
    let [rho, v, q] = fields;
    let pts = sample_points(points_per_elem);
    let mut rows = Vec::with_capacity(space.n_elems() * pts.len());
    for k in 0..space.n_elems() {
        let at = |f: &FieldCoeffs| space.eval(f, k, &pts).expect("element index in range");
        let (r, vv, qq) = (at(rho), at(v), at(q));
        let tt = match tau {
            Some(t) => at(t),
            None => r.iter().map(|&r| well.wp(r)).collect(),
        };
        for (j, &xi) in pts.iter().enumerate() {
            rows.push([space.mesh().to_physical(k, xi), r[j], vv[j], qq[j], tt[j]]);
        }
    }
    rows
}

pub fn write_snapshot<W: Write>(mut out: W, rows: &[[f64; 5]]) -> io::Result<()> {
    writeln!(out, "{SNAPSHOT_HEADER}")?;
    for r in rows {
        writeln!(out, "{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}", r[0], r[1], r[2], r[3], r[4])?;
    }
    out.flush()
}

/// File name for a snapshot requested at time `t`.
pub fn snapshot_file_name(t: f64) -> String {
    format!("snapshot_{t}.csv")
}

pub fn write_eoc_csv<W: Write>(mut out: W, table: &EocTable) -> io::Result<()> {
    writeln!(out, "{EOC_HEADER}")?;
    for r in &table.rows {
        writeln!(out, "{},{:.12e},{:.3},{:.12e},{:.3}", r.n, r.err_rho, r.eoc_rho, r.err_v, r.eoc_v)?;
    }
    out.flush()
}
