//! Error measurement in `L2`, the `H1` seminorm and the energy norm
//! `|v|_E² = ε |∇v|² + |v|²`, with a breakdown over the four mesh regions.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::{ln, sqrt};
use crate::mesh::Region;
use crate::polyquad::gauss_legendre_rule;
use crate::space::{FeFunction, Field2D, Zero};
use crate::{Error, Result};

/// Squared norms restricted to one region.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RegionNorms {
    pub l2_sq: f64,
    pub h1_semi_sq: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    pub l2: f64,
    pub h1_semi: f64,
    pub energy: f64,
    pub eps: f64,
    /// Indexed by [`Region::index`].
    pub regions: [RegionNorms; 4],
}

impl ErrorReport {
    pub fn region(&self, region: Region) -> RegionNorms {
        self.regions[region.index()]
    }

    /// Energy norm restricted to a region.
    pub fn region_energy(&self, region: Region) -> f64 {
        let r = self.region(region);
        sqrt(self.eps * r.h1_semi_sq + r.l2_sq)
    }
}

/// Default points per direction for errors against exact fields: `p + 5`.
pub fn default_exact_quad_order(p: usize) -> usize {
    p + 5
}

/// `f - g` for a finite element function and an exact field, by tensor
/// Gauss quadrature with `q` points per direction on every cell.
pub fn error_vs_exact<G: Field2D>(
    f: &FeFunction<'_>,
    g: &G,
    eps: f64,
    q: usize,
) -> Result<ErrorReport> {
    if q < f.space().degree() + 3 {
        return Err(Error::InvalidArgument("exact-field errors need q >= p + 3"));
    }
    measure(f, g, eps, q)
}

/// `f1 - f2` on a common space; integrands are polynomials of degree `2p`
/// per direction, integrated exactly with `p + 1` points.
pub fn error_between(f1: &FeFunction<'_>, f2: &FeFunction<'_>, eps: f64) -> Result<ErrorReport> {
    let diff = f1.sub(f2)?;
    measure(&diff, &Zero, eps, f1.space().degree() + 1)
}

fn measure<G: Field2D>(f: &FeFunction<'_>, g: &G, eps: f64, q: usize) -> Result<ErrorReport> {
    let space = f.space();
    let rule = gauss_legendre_rule(q)?;
    let table = space.basis().tabulate(&rule.nodes);
    let n1 = space.degree() + 1;
    let mesh = space.mesh();
    let (mx, my) = (&mesh.mesh_x, &mesh.mesh_y);
    let mut regions = [RegionNorms::default(); 4];
    let mut dofs = vec![0usize; n1 * n1];
    let mut local = vec![0.0; n1 * n1];
    for j in 0..my.n() {
        let (ya, yb) = my.cell(j);
        let hy = yb - ya;
        for i in 0..mx.n() {
            let (xa, xb) = mx.cell(i);
            let hx = xb - xa;
            space.cell_dofs(i, j, &mut dofs);
            for (l, &d) in local.iter_mut().zip(&dofs) {
                *l = f.coeffs[d];
            }
            let (mut l2, mut h1) = (0.0, 0.0);
            for qb in 0..q {
                let y = ya + 0.5 * (rule.nodes[qb] + 1.0) * hy;
                for qa in 0..q {
                    let x = xa + 0.5 * (rule.nodes[qa] + 1.0) * hx;
                    let w = rule.weights[qa] * rule.weights[qb];
                    let (mut v, mut vx, mut vy) = (0.0, 0.0, 0.0);
                    for b in 0..n1 {
                        let (tb, db) = (table.value(qb, b), table.derivative(qb, b));
                        for a in 0..n1 {
                            let c = local[b * n1 + a];
                            let ta = table.value(qa, a);
                            v += c * ta * tb;
                            vx += c * table.derivative(qa, a) * tb;
                            vy += c * ta * db;
                        }
                    }
                    vx *= 2.0 / hx;
                    vy *= 2.0 / hy;
                    let e = v - g.value(x, y);
                    let ge = g.gradient(x, y);
                    let (ex, ey) = (vx - ge[0], vy - ge[1]);
                    l2 += w * e * e;
                    h1 += w * (ex * ex + ey * ey);
                }
            }
            let jac = 0.25 * hx * hy;
            let r = &mut regions[mesh.region(i, j).index()];
            r.l2_sq += jac * l2;
            r.h1_semi_sq += jac * h1;
        }
    }
    let l2_sq: f64 = regions.iter().map(|r| r.l2_sq).sum();
    let h1_sq: f64 = regions.iter().map(|r| r.h1_semi_sq).sum();
    Ok(ErrorReport {
        l2: sqrt(l2_sq),
        h1_semi: sqrt(h1_sq),
        energy: sqrt(eps * h1_sq + l2_sq),
        eps,
        regions,
    })
}

fn mesh_quantity(n: usize, log_adjusted: bool) -> f64 {
    let nf = n as f64;
    if log_adjusted {
        ln(nf) / nf
    } else {
        1.0 / nf
    }
}

fn check_series(errors: &[f64], ns: &[usize]) -> Result<()> {
    if errors.len() != ns.len() || errors.len() < 2 {
        return Err(Error::InvalidArgument(
            "need matching error and N lists of length >= 2",
        ));
    }
    if let Some((index, &value)) = errors.iter().enumerate().find(|(_, e)| !(**e > 0.0)) {
        return Err(Error::NonPositiveError { index, value });
    }
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "N values must be strictly increasing",
        ));
    }
    Ok(())
}

/// Rates between consecutive refinements:
/// `r_k = ln(e_k / e_{k+1}) / ln(m_k / m_{k+1})` with `m = 1/N`, or
/// `m = ln N / N` when `log_adjusted`.
pub fn observed_order(errors: &[f64], ns: &[usize], log_adjusted: bool) -> Result<Vec<f64>> {
    check_series(errors, ns)?;
    Ok(errors
        .windows(2)
        .zip(ns.windows(2))
        .map(|(e, n)| {
            ln(e[0] / e[1])
                / ln(mesh_quantity(n[0], log_adjusted) / mesh_quantity(n[1], log_adjusted))
        })
        .collect())
}

/// Least-squares slope of `ln e` against `ln m` over the whole series.
pub fn fitted_order(errors: &[f64], ns: &[usize], log_adjusted: bool) -> Result<f64> {
    check_series(errors, ns)?;
    let xs: Vec<f64> = ns
        .iter()
        .map(|&n| ln(mesh_quantity(n, log_adjusted)))
        .collect();
    let ys: Vec<f64> = errors.iter().map(|&e| ln(e)).collect();
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}
