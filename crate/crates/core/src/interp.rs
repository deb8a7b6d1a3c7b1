//! Gauss-Lobatto interpolation `I^N` and vertex-edge-cell interpolation `π^N`.
//!
//! On the reference square `[-1, 1]²` the vertex-edge-cell operator
//! `π̂: C → Q_p` is fixed by
//!
//! * the four vertex values,
//! * on each edge the moments against `P_{p-2}`,
//! * on the cell the moments against `Q_{p-2}`.
//!
//! These `(p + 1)²` functionals are mapped to Gauss-Lobatto nodal
//! coefficients by a reference matrix factorised once per degree. Moments
//! use Legendre polynomials as test functions. `π^N` applies `π̂` cellwise
//! through the affine cell map.

use alloc::vec;
use alloc::vec::Vec;

use crate::dense::DenseLu;
use crate::math::abs;
use crate::polyquad::{gauss_legendre_rule, legendre, LagrangeBasis1D, QuadRule};
use crate::space::{FeFunction, FeSpace};
use crate::{Error, Result};

/// Reference vertex-edge-cell interpolator of one degree.
#[derive(Debug, Clone)]
pub struct VecInterpolator {
    p: usize,
    rule: QuadRule,
    /// `L_k(node_q)` for `k <= p - 2`, `[q][k]`.
    legendre_at_nodes: Vec<f64>,
    lu: DenseLu,
}

/// Reference vertices in functional order.
const VERTICES: [(f64, f64); 4] = [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)];

/// Moment quadrature points per direction used by default: `p + 4`.
pub fn default_moment_order(p: usize) -> usize {
    p + 4
}

impl VecInterpolator {
    pub fn new(p: usize) -> Result<Self> {
        Self::with_moment_order(p, default_moment_order(p))
    }

    /// `qm` Gauss points per direction for edge and cell moments.
    pub fn with_moment_order(p: usize, qm: usize) -> Result<Self> {
        if p < 1 {
            return Err(Error::UnsupportedDegree { degree: p });
        }
        if qm < p {
            return Err(Error::InvalidArgument(
                "moment quadrature needs at least p points",
            ));
        }
        let basis = LagrangeBasis1D::gauss_lobatto(p)?;
        let rule = gauss_legendre_rule(qm)?;
        let nm = p - 1; // moments per edge direction, degrees 0..=p-2
        let legendre_at_nodes: Vec<f64> = rule
            .nodes
            .iter()
            .flat_map(|&t| (0..nm).map(move |k| legendre(k, t)))
            .collect();

        // 1D moments of the nodal basis, exact: integrand degree 2p - 2.
        let exact = gauss_legendre_rule(p)?;
        let mut moment = vec![0.0; (p + 1) * nm];
        for (&t, &w) in exact.nodes.iter().zip(&exact.weights) {
            let vals = basis.values(t);
            for a in 0..=p {
                for k in 0..nm {
                    moment[a * nm + k] += w * vals[a] * legendre(k, t);
                }
            }
        }
        let end = |a: usize, side: f64| -> f64 {
            // nodal basis at ±1 is a Kronecker delta
            match (a, side > 0.0) {
                (0, false) => 1.0,
                (a, true) if a == p => 1.0,
                _ => 0.0,
            }
        };

        let n = (p + 1) * (p + 1);
        let mut m = vec![0.0; n * n];
        for b in 0..=p {
            for a in 0..=p {
                let col = b * (p + 1) + a;
                let mut row = 0;
                for &(s, t) in &VERTICES {
                    m[row * n + col] = end(a, s) * end(b, t);
                    row += 1;
                }
                // bottom, right, top, left
                for k in 0..nm {
                    m[row * n + col] = moment[a * nm + k] * end(b, -1.0);
                    row += 1;
                }
                for k in 0..nm {
                    m[row * n + col] = end(a, 1.0) * moment[b * nm + k];
                    row += 1;
                }
                for k in 0..nm {
                    m[row * n + col] = moment[a * nm + k] * end(b, 1.0);
                    row += 1;
                }
                for k in 0..nm {
                    m[row * n + col] = end(a, -1.0) * moment[b * nm + k];
                    row += 1;
                }
                for l in 0..nm {
                    for k in 0..nm {
                        m[row * n + col] = moment[a * nm + k] * moment[b * nm + l];
                        row += 1;
                    }
                }
                debug_assert_eq!(row, n);
            }
        }
        let lu = DenseLu::factorize(n, m).ok_or(Error::SingularReferenceSystem { degree: p })?;
        Ok(Self {
            p,
            rule,
            legendre_at_nodes,
            lu,
        })
    }

    pub fn degree(&self) -> usize {
        self.p
    }

    /// The `(p + 1)²` functionals of `g` on the reference square, in the
    /// order vertices, bottom/right/top/left edge moments, cell moments.
    pub fn functionals<G: Fn(f64, f64) -> f64>(&self, g: G) -> Vec<f64> {
        let nm = self.p - 1;
        let nq = self.rule.len();
        let (nodes, weights) = (&self.rule.nodes, &self.rule.weights);
        let lk = |q: usize, k: usize| self.legendre_at_nodes[q * nm + k];
        let mut out = Vec::with_capacity((self.p + 1) * (self.p + 1));
        for &(s, t) in &VERTICES {
            out.push(g(s, t));
        }
        let edges: [&dyn Fn(f64) -> (f64, f64); 4] =
            [&|s| (s, -1.0), &|t| (1.0, t), &|s| (s, 1.0), &|t| (-1.0, t)];
        for edge in edges {
            let vals: Vec<f64> = nodes
                .iter()
                .zip(weights)
                .map(|(&r, &w)| {
                    let (s, t) = edge(r);
                    w * g(s, t)
                })
                .collect();
            for k in 0..nm {
                out.push((0..nq).map(|q| vals[q] * lk(q, k)).sum());
            }
        }
        let mut cell = vec![0.0; nq * nq];
        for (qb, (&t, &wt)) in nodes.iter().zip(weights).enumerate() {
            for (qa, (&s, &ws)) in nodes.iter().zip(weights).enumerate() {
                cell[qb * nq + qa] = ws * wt * g(s, t);
            }
        }
        for l in 0..nm {
            for k in 0..nm {
                let mut sum = 0.0;
                for qb in 0..nq {
                    let lb = lk(qb, l);
                    for qa in 0..nq {
                        sum += cell[qb * nq + qa] * lk(qa, k) * lb;
                    }
                }
                out.push(sum);
            }
        }
        out
    }

    /// Nodal coefficients (a fastest) of `π̂ g` on the reference square.
    pub fn apply_reference<G: Fn(f64, f64) -> f64>(&self, g: G) -> Vec<f64> {
        self.lu.solve(&self.functionals(g))
    }
}

/// `I^N g`: nodal interpolation at the mapped Gauss-Lobatto points.
pub fn gl_interpolate<'s, G: Fn(f64, f64) -> f64>(g: G, space: &'s FeSpace) -> FeFunction<'s> {
    space.nodal_project(g)
}

/// `π^N g` with a fresh reference interpolator.
pub fn vec_interpolate<'s, G: Fn(f64, f64) -> f64>(
    g: G,
    space: &'s FeSpace,
) -> Result<FeFunction<'s>> {
    let interp = VecInterpolator::new(space.degree())?;
    Ok(vec_interpolate_with(&interp, g, space))
}

/// `π^N g` cellwise; vertex and edge DOFs shared by neighbouring cells are
/// overwritten with values determined by the same edge data.
pub fn vec_interpolate_with<'s, G: Fn(f64, f64) -> f64>(
    interp: &VecInterpolator,
    g: G,
    space: &'s FeSpace,
) -> FeFunction<'s> {
    assert_eq!(interp.degree(), space.degree(), "interpolator degree");
    let mut coeffs = vec![0.0; space.n_dofs()];
    let mut dofs = vec![0usize; space.local_dofs()];
    let mx = &space.mesh().mesh_x;
    let my = &space.mesh().mesh_y;
    for j in 0..my.n() {
        let (ya, yb) = my.cell(j);
        for i in 0..mx.n() {
            let (xa, xb) = mx.cell(i);
            let local = interp.apply_reference(|s, t| {
                g(
                    xa + 0.5 * (s + 1.0) * (xb - xa),
                    ya + 0.5 * (t + 1.0) * (yb - ya),
                )
            });
            space.cell_dofs(i, j, &mut dofs);
            for (&gdof, &c) in dofs.iter().zip(&local) {
                coeffs[gdof] = c;
            }
        }
    }
    FeFunction::new(space, coeffs)
}

fn check_pair(space_p: &FeSpace, space_p1: &FeSpace) -> Result<()> {
    if space_p.mesh() != space_p1.mesh()
        || space_p1.degree() != space_p.degree() + 1
        || space_p.boundary() != space_p1.boundary()
    {
        return Err(Error::SpaceMismatch);
    }
    Ok(())
}

/// Discrete part of the remainder `R g = I_p(g - π_{p+1} g) - (g - π_{p+1} g)`:
/// returns `I_p(g - π_{p+1} g)` in the degree-`p` space. `space_p1` must be
/// the degree-`p + 1` space on the same mesh.
pub fn remainder_r<'s, G: Fn(f64, f64) -> f64>(
    g: G,
    space_p: &'s FeSpace,
    space_p1: &FeSpace,
) -> Result<FeFunction<'s>> {
    check_pair(space_p, space_p1)?;
    let pi_p1 = vec_interpolate(&g, space_p1)?;
    Ok(space_p.nodal_project(|x, y| g(x, y) - pi_p1.eval(x, y)))
}

/// `π_p g` next to `I_p π_{p+1} g` and `π_p g + I_p(g - π_{p+1} g)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityDiscrepancy {
    /// `max |π_p g - I_p π_{p+1} g|` over coefficients.
    pub projection: f64,
    /// `max |I_p g - (π_p g + I_p(g - π_{p+1} g))|` over coefficients.
    pub splitting: f64,
}

pub fn identity_discrepancy<G: Fn(f64, f64) -> f64>(
    g: G,
    space_p: &FeSpace,
    space_p1: &FeSpace,
) -> Result<IdentityDiscrepancy> {
    check_pair(space_p, space_p1)?;
    let pi_p = vec_interpolate(&g, space_p)?;
    let pi_p1 = vec_interpolate(&g, space_p1)?;
    let i_pi = space_p.nodal_project(|x, y| pi_p1.eval(x, y));
    let i_g = space_p.nodal_project(&g);
    let r = space_p.nodal_project(|x, y| g(x, y) - pi_p1.eval(x, y));
    let max_diff =
        |a: &[f64], b: &[f64]| a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max(abs(x - y)));
    let split: Vec<f64> = pi_p
        .coeffs
        .iter()
        .zip(&r.coeffs)
        .map(|(a, b)| a + b)
        .collect();
    Ok(IdentityDiscrepancy {
        projection: max_diff(&pi_p.coeffs, &i_pi.coeffs),
        splitting: max_diff(&i_g.coeffs, &split),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::build_mesh_2d;
    use crate::space::Boundary;

    fn space(p: usize, n: usize) -> FeSpace {
        FeSpace::with_boundary(
            build_mesh_2d(n, 4.5, 1e-3, 2.0, 3.0).unwrap(),
            p,
            Boundary::Free,
        )
        .unwrap()
    }

    #[test]
    fn reference_reproduces_q_p() {
        for p in 1..=6 {
            let interp = VecInterpolator::new(p).unwrap();
            let basis = LagrangeBasis1D::gauss_lobatto(p).unwrap();
            let pts = basis.points();
            let g = |s: f64, t: f64| {
                (0..=p)
                    .map(|k| (k as f64 + 1.0) * s.powi(k as i32))
                    .sum::<f64>()
                    * (1.0 - 0.5 * t.powi(p as i32))
            };
            let c = interp.apply_reference(g);
            for b in 0..=p {
                for a in 0..=p {
                    assert!(
                        (c[b * (p + 1) + a] - g(pts[a], pts[b])).abs() < 1e-12,
                        "p={p}"
                    );
                }
            }
        }
    }

    #[test]
    fn constants_reproduced() {
        let s = space(3, 8);
        let f = vec_interpolate(|_, _| 1.0, &s).unwrap();
        assert!(f.coeffs.iter().all(|c| (c - 1.0).abs() < 1e-13));
    }

    #[test]
    fn identity_holds_for_smooth_function() {
        let sp = space(3, 4);
        let sp1 = space(4, 4);
        let d = identity_discrepancy(|x, y| libm::sin(x + 2.0 * y), &sp, &sp1).unwrap();
        assert!(d.projection < 1e-11, "{d:?}");
        assert!(d.splitting < 1e-11, "{d:?}");
    }

    #[test]
    fn remainder_vanishes_on_q_p() {
        let sp = space(3, 4);
        let sp1 = space(4, 4);
        let r = remainder_r(|x, y| x * x * x * y - 2.0 * x * y * y + 1.0, &sp, &sp1).unwrap();
        assert!(r.coeffs.iter().all(|c| c.abs() < 1e-12));
    }

    #[test]
    fn mismatched_pair_rejected() {
        let sp = space(3, 4);
        let other = space(5, 4);
        assert_eq!(
            remainder_r(|x, _| x, &sp, &other).unwrap_err(),
            Error::SpaceMismatch
        );
        let coarse = space(4, 8);
        assert!(identity_discrepancy(|x, _| x, &sp, &coarse).is_err());
    }
}
