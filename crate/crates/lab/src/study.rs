//! Convergence studies over `(ε, N)` grids.

use rayon::prelude::*;
use shishkin_core::norms::observed_order;
use shishkin_core::study::{run_case, CaseOutcome, CaseSpec};

use crate::config::{Mode, StudyConfig};
use crate::table::{Cell, Table};

pub const STUDY_HEADER: [&str; 19] = [
    "p",
    "N",
    "eps",
    "err_E_galerkin",
    "err_E_sc_GL",
    "err_E_sc_VEC",
    "err_L2_interp",
    "err_E_interp",
    "rate_raw_E_galerkin",
    "rate_adj_E_galerkin",
    "rate_raw_E_sc_GL",
    "rate_adj_E_sc_GL",
    "rate_raw_E_sc_VEC",
    "rate_adj_E_sc_VEC",
    "rate_raw_L2_interp",
    "rate_adj_L2_interp",
    "rate_raw_E_interp",
    "rate_adj_E_interp",
    "status",
];

/// Error columns of one study row, in header order.
pub const ERROR_COLUMNS: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct StudyRow {
    pub p: usize,
    pub n: usize,
    pub eps: f64,
    /// `err_E_galerkin, err_E_sc_GL, err_E_sc_VEC, err_L2_interp, err_E_interp`
    pub errors: [Option<f64>; ERROR_COLUMNS],
    /// `(raw, adjusted)` rate against the previous N of the same ε.
    pub rates: [(Option<f64>, Option<f64>); ERROR_COLUMNS],
    /// `None` on success, the error message otherwise.
    pub failure: Option<String>,
}

impl StudyRow {
    pub fn failed(&self) -> bool {
        self.failure.is_some()
    }
}

fn case_spec(cfg: &StudyConfig, eps: f64, n: usize) -> CaseSpec {
    CaseSpec {
        p: cfg.p,
        n,
        eps,
        sigma: cfg.sigma,
        quad_order: cfg.quad_order,
        clamp: cfg.force,
        solve: cfg.mode == Mode::GalerkinSuperclose,
        gauss_lobatto: cfg.interpolant.gauss_lobatto(),
        vertex_edge_cell: cfg.interpolant.vertex_edge_cell(),
    }
}

/// The interpolation columns report `I^N` unless only `π^N` was requested.
fn errors_of(o: &CaseOutcome) -> [Option<f64>; ERROR_COLUMNS] {
    let interp = o.interp_gl.or(o.interp_vec);
    [
        o.galerkin.map(|r| r.energy),
        o.superclose_gl.map(|r| r.energy),
        o.superclose_vec.map(|r| r.energy),
        interp.map(|r| r.l2),
        interp.map(|r| r.energy),
    ]
}

fn rate(
    prev: Option<f64>,
    cur: Option<f64>,
    n_prev: usize,
    n: usize,
    adjusted: bool,
) -> Option<f64> {
    let (a, b) = (prev?, cur?);
    observed_order(&[a, b], &[n_prev, n], adjusted)
        .ok()
        .map(|r| r[0])
}

/// Runs every `(ε, N)` case in parallel; rows keep configuration order.
pub fn run_study(cfg: &StudyConfig) -> Vec<StudyRow> {
    let mut rows: Vec<StudyRow> = cfg
        .cases()
        .par_iter()
        .map(|&(eps, n)| {
            let (errors, failure) = match run_case(&case_spec(cfg, eps, n)) {
                Ok(o) => (errors_of(&o), None),
                Err(e) => ([None; ERROR_COLUMNS], Some(e.to_string())),
            };
            StudyRow {
                p: cfg.p,
                n,
                eps,
                errors,
                rates: [(None, None); ERROR_COLUMNS],
                failure,
            }
        })
        .collect();
    for k in 1..rows.len() {
        let (head, tail) = rows.split_at_mut(k);
        let (prev, cur) = (&head[k - 1], &mut tail[0]);
        if prev.eps != cur.eps {
            continue;
        }
        for c in 0..ERROR_COLUMNS {
            cur.rates[c] = (
                rate(prev.errors[c], cur.errors[c], prev.n, cur.n, false),
                rate(prev.errors[c], cur.errors[c], prev.n, cur.n, true),
            );
        }
    }
    rows
}

pub fn study_table(rows: &[StudyRow]) -> Table {
    let mut table = Table::new(&STUDY_HEADER);
    for r in rows {
        let mut cells = vec![Cell::Int(r.p), Cell::Int(r.n), Cell::Real(r.eps)];
        cells.extend(r.errors.iter().map(|e| Cell::real(*e)));
        for (raw, adj) in r.rates {
            cells.push(Cell::real(raw));
            cells.push(Cell::real(adj));
        }
        cells.push(Cell::Text(match &r.failure {
            None => "ok".to_string(),
            Some(msg) => format!("failed: {msg}"),
        }));
        table.push(cells);
    }
    table
}
