//! Plot-oriented dumps: mesh nodes, sampled solutions and the band matrix.

use std::io::Write;

use shishkin_core::banded::BandedMatrix;
use shishkin_core::mesh::{build_mesh_2d, build_mesh_2d_clamped, ShishkinMesh1D};
use shishkin_core::problem::make_manufactured_problem;
use shishkin_core::space::FeFunction;

use crate::config::StudyConfig;
use crate::error::LabResult;
use crate::table::{Cell, Table};

pub const MESH_HEADER: [&str; 6] = ["N", "eps", "axis", "index", "coordinate", "fine"];
pub const SAMPLE_HEADER: [&str; 4] = ["x", "y", "u_h", "u"];

fn push_axis(table: &mut Table, n: usize, eps: f64, axis: &str, mesh: &ShishkinMesh1D) {
    for (i, &x) in mesh.points().iter().enumerate() {
        table.push(vec![
            Cell::Int(n),
            Cell::Real(eps),
            Cell::Text(axis.to_string()),
            Cell::Int(i),
            Cell::Real(x),
            Cell::Text((i <= n / 2).to_string()),
        ]);
    }
}

/// Node coordinates of both mesh directions for every `(ε, N)`; `fine`
/// marks nodes at or below the transition point.
pub fn mesh_table(cfg: &StudyConfig) -> LabResult<Table> {
    let prob = make_manufactured_problem(1.0, cfg.p);
    let mut table = Table::new(&MESH_HEADER);
    for (eps, n) in cfg.cases() {
        let build = if cfg.force {
            build_mesh_2d_clamped
        } else {
            build_mesh_2d
        };
        let mesh = build(n, cfg.sigma, eps, prob.beta1, prob.beta2)?;
        push_axis(&mut table, n, eps, "x", &mesh.mesh_x);
        push_axis(&mut table, n, eps, "y", &mesh.mesh_y);
    }
    Ok(table)
}

/// `f` and `exact` on the uniform `m × m` grid of `[0, 1]²`.
pub fn sample_table(f: &FeFunction<'_>, exact: impl Fn(f64, f64) -> f64, m: usize) -> Table {
    let mut table = Table::new(&SAMPLE_HEADER);
    let step = 1.0 / (m.max(2) - 1) as f64;
    for b in 0..m {
        for a in 0..m {
            let (x, y) = (a as f64 * step, b as f64 * step);
            table.push(vec![
                Cell::Real(x),
                Cell::Real(y),
                Cell::Real(f.eval(x, y)),
                Cell::Real(exact(x, y)),
            ]);
        }
    }
    table
}

/// Matrix-market coordinate listing of the stored band (1-based indices).
pub fn write_band<W: Write>(matrix: &BandedMatrix, mut out: W) -> std::io::Result<()> {
    let n = matrix.dim();
    let (kl, ku) = (matrix.lower_bandwidth(), matrix.upper_bandwidth());
    let mut entries = Vec::new();
    for i in 0..n {
        for j in i.saturating_sub(kl)..(i + ku + 1).min(n) {
            let v = matrix.get(i, j);
            if v != 0.0 {
                entries.push((i, j, v));
            }
        }
    }
    writeln!(out, "%%MatrixMarket matrix coordinate real general")?;
    writeln!(out, "% band kl={kl} ku={ku}")?;
    writeln!(out, "{n} {n} {}", entries.len())?;
    for (i, j, v) in entries {
        writeln!(out, "{} {} {v:.16e}", i + 1, j + 1)?;
    }
    Ok(())
}
