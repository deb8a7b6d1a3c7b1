//! Identity and hierarchical-basis check suites.

use shishkin_core::hier1d::{
    build_eta_tilde, cross_products, decompose, max_parity_product, reconstruct,
    verify_convective_bound, worst_case_ratio, HierBasis,
};
use shishkin_core::interp::identity_discrepancy;
use shishkin_core::mesh::{
    build_mesh_1d, build_mesh_1d_clamped, build_mesh_2d, build_mesh_2d_clamped, ShishkinMesh2D,
};
use shishkin_core::problem::{make_manufactured_problem, make_manufactured_problem_1d};
use shishkin_core::space::{Boundary, FeFunction1D, FeSpace, FeSpace1D};

use crate::config::StudyConfig;
use crate::error::LabResult;
use crate::table::{Cell, Table};

pub const IDENTITY_HEADER: [&str; 6] = ["p", "N", "eps", "function", "projection", "splitting"];

pub const HIER1D_HEADER: [&str; 15] = [
    "p",
    "N",
    "eps",
    "roundtrip",
    "cross_hat_even",
    "cross_hat_last",
    "parity",
    "eta_orthogonality",
    "ratio",
    "integral",
    "energy_norm",
    "term_I",
    "term_II_III",
    "term_IV",
    "closure",
];

type Smooth2D = fn(f64, f64) -> f64;

/// Smooth test functions for the projection identity.
pub const IDENTITY_FUNCTIONS: [(&str, Smooth2D); 5] = [
    ("exp(xy)", |x, y| (x * y).exp()),
    ("cos(3x)(1+y^2)", |x, y| (3.0 * x).cos() * (1.0 + y * y)),
    ("1/(1+x+y)", |x, y| 1.0 / (1.0 + x + y)),
    ("sin(x+2y)exp(x)", |x, y| (x + 2.0 * y).sin() * x.exp()),
    ("x^5y^4+x-y", |x, y| x.powi(5) * y.powi(4) + x - y),
];

fn mesh_2d(cfg: &StudyConfig, n: usize, eps: f64) -> LabResult<ShishkinMesh2D> {
    let build = if cfg.force {
        build_mesh_2d_clamped
    } else {
        build_mesh_2d
    };
    Ok(build(n, cfg.sigma, eps, 2.0, 3.0)?)
}

/// `max |π_p g - I_p π_{p+1} g|` and the splitting defect for the smooth
/// test functions and the manufactured solution.
pub fn run_identity(cfg: &StudyConfig) -> LabResult<Table> {
    let mut table = Table::new(&IDENTITY_HEADER);
    for (eps, n) in cfg.cases() {
        let mesh = mesh_2d(cfg, n, eps)?;
        let sp = FeSpace::with_boundary(mesh.clone(), cfg.p, Boundary::Free)?;
        let sp1 = FeSpace::with_boundary(mesh, cfg.p + 1, Boundary::Free)?;
        let prob = make_manufactured_problem(eps, cfg.p + 1);
        let mut push = |name: &str, d: shishkin_core::interp::IdentityDiscrepancy| {
            table.push(vec![
                Cell::Int(cfg.p),
                Cell::Int(n),
                Cell::Real(eps),
                Cell::Text(name.to_string()),
                Cell::Real(d.projection),
                Cell::Real(d.splitting),
            ]);
        };
        for (name, f) in IDENTITY_FUNCTIONS {
            push(name, identity_discrepancy(f, &sp, &sp1)?);
        }
        push(
            "u",
            identity_discrepancy(|x, y| prob.exact.value(x, y), &sp, &sp1)?,
        );
    }
    Ok(table)
}

/// Hierarchical-basis identities and the convective bound on the 1D
/// problem, evaluated for the worst-case discrete `v`.
pub fn run_hier1d(cfg: &StudyConfig) -> LabResult<Table> {
    let mut table = Table::new(&HIER1D_HEADER);
    for (eps, n) in cfg.cases() {
        let prob = make_manufactured_problem_1d(eps);
        let build = if cfg.force {
            build_mesh_1d_clamped
        } else {
            build_mesh_1d
        };
        let basis = HierBasis::new(build(n, cfg.sigma, eps, prob.beta)?, cfg.p)?;
        let space = FeSpace1D::new(basis.mesh().clone(), cfg.p, Boundary::Dirichlet)?;
        let profile = prob.exact;
        let s = move |k: usize, x: f64| profile.smooth(k, x);

        let worst = worst_case_ratio(&s, &basis, &prob)?;
        let v = FeFunction1D::new(&space, worst.maximizer.clone());
        let rep = decompose(&v, &basis)?;
        let back = reconstruct(&rep, &basis, &space)?;
        let scale = v
            .coeffs
            .iter()
            .fold(0.0f64, |m, c| m.max(c.abs()))
            .max(f64::MIN_POSITIVE);
        let roundtrip = v
            .coeffs
            .iter()
            .zip(&back.coeffs)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
            / scale;

        let (cross_even, cross_last) = if cfg.p == 3 {
            let c = cross_products(&rep, &basis)?;
            (
                Some((c.hat_even_closed - c.hat_even_quadrature).abs()),
                Some((c.hat_last_odd_closed - c.hat_last_odd_quadrature).abs()),
            )
        } else {
            (None, None)
        };
        let mut eta_orth = 0.0f64;
        for i in (1..n).filter(|&i| i != n / 2) {
            eta_orth = eta_orth.max(build_eta_tilde(i, 1.0, &basis)?.orthogonality(&basis).max());
        }
        let bound = verify_convective_bound(&s, &v, &basis, &prob)?;
        table.push(vec![
            Cell::Int(cfg.p),
            Cell::Int(n),
            Cell::Real(eps),
            Cell::Real(roundtrip),
            Cell::real(cross_even),
            Cell::real(cross_last),
            Cell::Real(max_parity_product(&basis)),
            Cell::Real(eta_orth),
            Cell::Real(bound.ratio),
            Cell::Real(bound.integral),
            Cell::Real(bound.energy_norm),
            Cell::Real(bound.term_i),
            Cell::Real(bound.term_ii_iii),
            Cell::Real(bound.term_iv),
            Cell::Real(bound.closure),
        ]);
    }
    Ok(table)
}
