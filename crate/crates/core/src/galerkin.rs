//! Galerkin discretisation `a(u, v) = (f, v)` on `V^N` with
//! `a(v, w) = ε(∇v, ∇w) + (c v - b·∇v, w)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::banded::BandedMatrix;
use crate::math::abs;
use crate::polyquad::{gauss_legendre_rule, QuadRule};
use crate::problem::ConvectionDiffusion;
use crate::space::{Boundary, FeFunction, FeSpace, Field2D};
use crate::{Error, Result};

/// Relative residual accepted after the direct solve.
pub const RESIDUAL_TOL: f64 = 1e-9;

/// Default quadrature points per direction for assembly.
pub fn default_quad_order(p: usize) -> usize {
    p + 3
}

#[derive(Debug, Clone)]
pub struct GalerkinSystem<'s> {
    pub matrix: BandedMatrix,
    pub rhs: Vec<f64>,
    pub space: &'s FeSpace,
    pub quad_order: usize,
}

/// Walks every quadrature point of every cell in a fixed order, handing the
/// callback the cell, physical point, weight and the indices of the 1D
/// quadrature nodes.
fn for_each_point<F>(space: &FeSpace, rule: &QuadRule, mut f: F)
where
    F: FnMut(usize, usize, f64, f64, f64, usize, usize),
{
    let mx = &space.mesh().mesh_x;
    let my = &space.mesh().mesh_y;
    for j in 0..my.n() {
        let (ya, yb) = my.cell(j);
        let (ys, yw) = rule.mapped(ya, yb);
        for i in 0..mx.n() {
            let (xa, xb) = mx.cell(i);
            let (xs, xw) = rule.mapped(xa, xb);
            for (qb, (&y, &wy)) in ys.iter().zip(&yw).enumerate() {
                for (qa, (&x, &wx)) in xs.iter().zip(&xw).enumerate() {
                    f(i, j, x, y, wx * wy, qa, qb);
                }
            }
        }
    }
}

/// Assembles the Galerkin system with `q` Gauss points per direction and
/// eliminates the Dirichlet rows and columns.
pub fn assemble<'s, P: ConvectionDiffusion>(
    space: &'s FeSpace,
    prob: &P,
    q: usize,
) -> Result<GalerkinSystem<'s>> {
    let p = space.degree();
    if q < p + 2 {
        return Err(Error::InvalidArgument(
            "assembly quadrature needs q >= p + 2",
        ));
    }
    let rule = gauss_legendre_rule(q)?;
    let table = space.basis().tabulate(&rule.nodes);
    let n1 = p + 1;
    let nloc = n1 * n1;
    let bw = space.bandwidth();
    let mut matrix = BandedMatrix::zeros(space.n_dofs(), bw, bw);
    let mut rhs = vec![0.0; space.n_dofs()];

    let mx = &space.mesh().mesh_x;
    let my = &space.mesh().mesh_y;
    let (xr, wr) = (&rule.nodes, &rule.weights);
    let mut local = vec![0.0; nloc * nloc];
    let mut local_rhs = vec![0.0; nloc];
    let mut dofs = vec![0usize; nloc];
    let mut val = vec![0.0; nloc];
    let mut gx = vec![0.0; nloc];
    let mut gy = vec![0.0; nloc];

    for j in 0..my.n() {
        let (ya, yb) = my.cell(j);
        let hy = yb - ya;
        for i in 0..mx.n() {
            let (xa, xb) = mx.cell(i);
            let hx = xb - xa;
            local.iter_mut().for_each(|v| *v = 0.0);
            local_rhs.iter_mut().for_each(|v| *v = 0.0);
            for qb in 0..q {
                let y = ya + 0.5 * (xr[qb] + 1.0) * hy;
                for qa in 0..q {
                    let x = xa + 0.5 * (xr[qa] + 1.0) * hx;
                    let w = wr[qa] * wr[qb] * 0.25 * hx * hy;
                    for b in 0..n1 {
                        for a in 0..n1 {
                            let l = b * n1 + a;
                            val[l] = table.value(qa, a) * table.value(qb, b);
                            gx[l] = table.derivative(qa, a) * table.value(qb, b) * 2.0 / hx;
                            gy[l] = table.value(qa, a) * table.derivative(qb, b) * 2.0 / hy;
                        }
                    }
                    let [b1, b2] = prob.convection(x, y);
                    let c = prob.reaction(x, y);
                    let f = prob.forcing(x, y);
                    let eps = prob.eps();
                    for test in 0..nloc {
                        let wt = w * val[test];
                        let (wgx, wgy) = (w * eps * gx[test], w * eps * gy[test]);
                        let row = &mut local[test * nloc..(test + 1) * nloc];
                        for trial in 0..nloc {
                            row[trial] += wgx * gx[trial]
                                + wgy * gy[trial]
                                + wt * (c * val[trial] - b1 * gx[trial] - b2 * gy[trial]);
                        }
                        local_rhs[test] += wt * f;
                    }
                }
            }
            space.cell_dofs(i, j, &mut dofs);
            for (test, &g) in dofs.iter().enumerate() {
                rhs[g] += local_rhs[test];
                for (trial, &h) in dofs.iter().enumerate() {
                    assert!(
                        g.abs_diff(h) <= bw,
                        "bandwidth overflow: dofs {g} and {h} (bandwidth {bw})"
                    );
                    matrix.add(g, h, local[test * nloc + trial]);
                }
            }
        }
    }

    if space.boundary() == Boundary::Dirichlet {
        for g in (0..space.n_dofs()).filter(|&g| space.is_boundary(g)) {
            matrix.eliminate(g);
            rhs[g] = 0.0;
        }
    }

    Ok(GalerkinSystem {
        matrix,
        rhs,
        space,
        quad_order: q,
    })
}

impl<'s> GalerkinSystem<'s> {
    /// Solves by banded LU and checks the relative residual.
    pub fn solve(&self) -> Result<FeFunction<'s>> {
        let lu = self.matrix.clone().factorize()?;
        let x = lu.solve(&self.rhs);
        let r = self.matrix.mul_vec(&x);
        let res = r
            .iter()
            .zip(&self.rhs)
            .fold(0.0f64, |m, (a, b)| m.max(abs(a - b)));
        let scale = self.rhs.iter().fold(0.0f64, |m, v| m.max(abs(*v)));
        let relative = if scale > 0.0 { res / scale } else { res };
        if !(relative < RESIDUAL_TOL) {
            return Err(Error::ResidualTooLarge { relative });
        }
        Ok(FeFunction::new(self.space, x))
    }
}

/// `a(trial, test)` by cellwise tensor Gauss quadrature with `q` points
/// per direction, independent of the assembled matrix.
pub fn bilinear_form<P: ConvectionDiffusion, F: Field2D>(
    prob: &P,
    trial: &F,
    test: &FeFunction<'_>,
    q: usize,
) -> Result<f64> {
    let rule = gauss_legendre_rule(q)?;
    let space = test.space();
    let mut sum = 0.0;
    for_each_point(space, &rule, |i, j, x, y, w, _, _| {
        let (xa, xb) = space.mesh().mesh_x.cell(i);
        let (ya, yb) = space.mesh().mesh_y.cell(j);
        let s = 2.0 * (x - xa) / (xb - xa) - 1.0;
        let t = 2.0 * (y - ya) / (yb - ya) - 1.0;
        let (v, gv) = test.eval_in_cell(i, j, s, t);
        let u = trial.value(x, y);
        let gu = trial.gradient(x, y);
        let [b1, b2] = prob.convection(x, y);
        let c = prob.reaction(x, y);
        sum += w
            * (prob.eps() * (gu[0] * gv[0] + gu[1] * gv[1])
                + (c * u - b1 * gu[0] - b2 * gu[1]) * v);
    });
    Ok(sum)
}

/// `(f, test)` by cellwise tensor Gauss quadrature.
pub fn load_functional<P: ConvectionDiffusion>(
    prob: &P,
    test: &FeFunction<'_>,
    q: usize,
) -> Result<f64> {
    let rule = gauss_legendre_rule(q)?;
    let space = test.space();
    let mut sum = 0.0;
    for_each_point(space, &rule, |i, j, x, y, w, _, _| {
        let (xa, xb) = space.mesh().mesh_x.cell(i);
        let (ya, yb) = space.mesh().mesh_y.cell(j);
        let s = 2.0 * (x - xa) / (xb - xa) - 1.0;
        let t = 2.0 * (y - ya) / (yb - ya) - 1.0;
        sum += w * prob.forcing(x, y) * test.eval_in_cell(i, j, s, t).0;
    });
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_mesh_2d, build_mesh_2d_clamped};
    use crate::problem::{make_manufactured_problem, ConstantCoefficients};

    #[test]
    fn rejects_low_quadrature() {
        let space = FeSpace::new(build_mesh_2d(4, 4.5, 1e-3, 2.0, 3.0).unwrap(), 3).unwrap();
        let prob = make_manufactured_problem(1e-3, 3);
        assert!(assemble(&space, &prob, 4).is_err());
        assert!(assemble(&space, &prob, 5).is_ok());
    }

    #[test]
    fn zero_forcing_gives_zero_rhs() {
        let space = FeSpace::new(build_mesh_2d(4, 4.5, 1e-3, 2.0, 3.0).unwrap(), 2).unwrap();
        let prob = ConstantCoefficients {
            eps: 1e-3,
            b: [2.0, 3.0],
            c: 1.0,
            f: |_: f64, _: f64| 0.0,
        };
        let sys = assemble(&space, &prob, 5).unwrap();
        assert!(sys.rhs.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn bilinear_laplace_stencil() {
        // uniform 4x4 mesh, Q_1, pure diffusion: interior rows carry the
        // 8/3, -1/3 nine-point stencil
        let mesh = build_mesh_2d_clamped(4, 4.5, 1.0, 2.0, 3.0).unwrap();
        let space = FeSpace::new(mesh, 1).unwrap();
        let prob = ConstantCoefficients {
            eps: 1.0,
            b: [0.0, 0.0],
            c: 0.0,
            f: |_: f64, _: f64| 0.0,
        };
        let sys = assemble(&space, &prob, 3).unwrap();
        let centre = space.global(2, 2);
        for dy in -1i64..=1 {
            for dx in -1i64..=1 {
                let nb = space.global((2 + dx) as usize, (2 + dy) as usize);
                let expected = if dx == 0 && dy == 0 {
                    8.0 / 3.0
                } else {
                    -1.0 / 3.0
                };
                assert!((sys.matrix.get(centre, nb) - expected).abs() < 1e-14);
            }
        }
        assert_eq!(sys.matrix.get(centre, space.global(4, 2)), 0.0);
    }
}
