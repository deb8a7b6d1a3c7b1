//! One `(p, N, ε)` case of a convergence study: build the mesh and space,
//! solve the Galerkin problem and measure interpolation and
//! supercloseness errors against the manufactured solution.

use crate::galerkin::{assemble, default_quad_order};
use crate::interp::{gl_interpolate, vec_interpolate};
use crate::math::sqrt;
use crate::mesh::{build_mesh_2d, build_mesh_2d_clamped};
use crate::norms::{default_exact_quad_order, error_between, error_vs_exact, ErrorReport};
use crate::problem::make_manufactured_problem;
use crate::space::{Difference, FeSpace};
use crate::Result;

/// What to compute for one case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseSpec {
    pub p: usize,
    pub n: usize,
    pub eps: f64,
    pub sigma: f64,
    /// Assembly quadrature points per direction; `None` for `p + 3`.
    pub quad_order: Option<usize>,
    /// Clamp the transition point instead of rejecting large ε.
    pub clamp: bool,
    /// Solve the Galerkin problem (needed for Galerkin and supercloseness errors).
    pub solve: bool,
    pub gauss_lobatto: bool,
    pub vertex_edge_cell: bool,
}

impl CaseSpec {
    /// Solve and measure with both interpolants, `σ = p + 3/2`.
    pub fn full(p: usize, n: usize, eps: f64) -> Self {
        Self {
            p,
            n,
            eps,
            sigma: p as f64 + 1.5,
            quad_order: None,
            clamp: false,
            solve: true,
            gauss_lobatto: true,
            vertex_edge_cell: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseOutcome {
    pub spec: CaseSpec,
    /// `|u - u^N|_E`
    pub galerkin: Option<ErrorReport>,
    /// `|I^N u - u^N|_E`
    pub superclose_gl: Option<ErrorReport>,
    /// `|π^N u - u^N|_E`
    pub superclose_vec: Option<ErrorReport>,
    /// `u - I^N u`
    pub interp_gl: Option<ErrorReport>,
    /// `u - π^N u`
    pub interp_vec: Option<ErrorReport>,
}

pub fn run_case(spec: &CaseSpec) -> Result<CaseOutcome> {
    let prob = make_manufactured_problem(spec.eps, spec.p);
    let mesh = if spec.clamp {
        build_mesh_2d_clamped(spec.n, spec.sigma, spec.eps, prob.beta1, prob.beta2)?
    } else {
        build_mesh_2d(spec.n, spec.sigma, spec.eps, prob.beta1, prob.beta2)?
    };
    let space = FeSpace::new(mesh, spec.p)?;
    let exact = &prob.exact;
    let q_exact = default_exact_quad_order(spec.p);
    let u = |x: f64, y: f64| exact.value(x, y);

    let gl = if spec.gauss_lobatto {
        Some(gl_interpolate(u, &space))
    } else {
        None
    };
    let pi = if spec.vertex_edge_cell {
        Some(vec_interpolate(u, &space)?)
    } else {
        None
    };
    let uh = if spec.solve {
        let q = spec
            .quad_order
            .unwrap_or_else(|| default_quad_order(spec.p));
        Some(assemble(&space, &prob, q)?.solve()?)
    } else {
        None
    };

    let mut out = CaseOutcome {
        spec: *spec,
        galerkin: None,
        superclose_gl: None,
        superclose_vec: None,
        interp_gl: None,
        interp_vec: None,
    };
    if let Some(gl) = &gl {
        out.interp_gl = Some(error_vs_exact(gl, exact, spec.eps, q_exact)?);
    }
    if let Some(pi) = &pi {
        out.interp_vec = Some(error_vs_exact(pi, exact, spec.eps, q_exact)?);
    }
    if let Some(uh) = &uh {
        out.galerkin = Some(error_vs_exact(uh, exact, spec.eps, q_exact)?);
        if let Some(gl) = &gl {
            out.superclose_gl = Some(error_between(gl, uh, spec.eps)?);
        }
        if let Some(pi) = &pi {
            out.superclose_vec = Some(error_between(pi, uh, spec.eps)?);
        }
    }
    Ok(out)
}

/// `ε^{1/2} |∇ R u|_0` with `R u = I_p(u - π_{p+1} u) - (u - π_{p+1} u)` for
/// the manufactured solution.
pub fn remainder_seminorm(p: usize, n: usize, eps: f64, sigma: f64) -> Result<f64> {
    let prob = make_manufactured_problem(eps, p + 1);
    let mesh = build_mesh_2d(n, sigma, eps, prob.beta1, prob.beta2)?;
    let space_p = FeSpace::new(mesh.clone(), p)?;
    let space_p1 = FeSpace::new(mesh, p + 1)?;
    let exact = &prob.exact;
    let pi_p1 = vec_interpolate(|x, y| exact.value(x, y), &space_p1)?;
    let ip = space_p.nodal_project(|x, y| exact.value(x, y) - pi_p1.eval(x, y));
    let report = error_vs_exact(
        &ip,
        &Difference(exact, &pi_p1),
        eps,
        default_exact_quad_order(p + 1),
    )?;
    Ok(sqrt(eps) * report.h1_semi)
}
