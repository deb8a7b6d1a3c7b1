//! Legendre polynomials, Gauss quadrature and Lagrange bases on Gauss-Lobatto points.
//!
//! Nodes are computed by Newton iteration: Gauss-Legendre nodes are the roots
//! of `L_n`, interior Gauss-Lobatto nodes the roots of `L_p'`. Everything lives
//! on the reference interval `[-1, 1]`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::math::{abs, cos};
use crate::{Error, Result};

/// Highest Gauss-Lobatto degree supported. Interpolation of degree `p`
/// needs the rule of degree `p + 1`, so element degrees go up to 9.
pub const MAX_LOBATTO_DEGREE: usize = 10;

/// Highest Gauss-Legendre point count supported.
pub const MAX_GAUSS_POINTS: usize = 64;

const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 100;

/// `L_k(t)`, normalised so that `L_k(1) = 1`.
pub fn legendre(k: usize, t: f64) -> f64 {
    legendre_with_derivative(k, t).0
}

/// `(L_k(t), L_k'(t))` by the three-term recurrence.
pub fn legendre_with_derivative(k: usize, t: f64) -> (f64, f64) {
    if k == 0 {
        return (1.0, 0.0);
    }
    let (mut l_prev, mut l) = (1.0, t);
    let (mut d_prev, mut d) = (0.0, 1.0);
    for j in 1..k {
        let jf = j as f64;
        let l_next = ((2.0 * jf + 1.0) * t * l - jf * l_prev) / (jf + 1.0);
        let d_next = d_prev + (2.0 * jf + 1.0) * l;
        l_prev = l;
        l = l_next;
        d_prev = d;
        d = d_next;
    }
    (l, d)
}

/// A quadrature rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Monomials `t^k` with `k <= exactness_degree` are integrated exactly.
    pub exactness_degree: usize,
}

impl QuadRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integrates `f` over `[a, b]` with the affinely mapped rule.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(mid + half * t))
            .sum::<f64>()
            * half
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        (
            self.nodes.iter().map(|&t| mid + half * t).collect(),
            self.weights.iter().map(|&w| w * half).collect(),
        )
    }
}

fn symmetrize(nodes: &mut [f64]) {
    let n = nodes.len();
    for i in 0..n / 2 {
        let v = 0.5 * (nodes[n - 1 - i] - nodes[i]);
        nodes[i] = -v;
        nodes[n - 1 - i] = v;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
}

/// Newton iteration on `g` with derivative `dg` given jointly by `step`,
/// which returns `(g, g / g')`.
fn newton<F: Fn(f64) -> (f64, f64)>(mut t: f64, step: F, residual_tol: f64) -> Option<f64> {
    for _ in 0..NEWTON_MAX_ITER {
        let (_, dt) = step(t);
        t -= dt;
        if abs(dt) <= NEWTON_TOL {
            return Some(t);
        }
    }
    // Rounding can keep |dt| just above the tolerance; accept a root whose
    // residual is at machine level.
    if abs(step(t).0) <= residual_tol {
        Some(t)
    } else {
        None
    }
}

/// The `p + 1` Gauss-Lobatto points `-1 = t_0 < ... < t_p = 1`, the zeros
/// of `(1 - t²) L_p'(t)`.
pub fn gauss_lobatto_points(p: usize) -> Result<Vec<f64>> {
    if p == 0 || p > MAX_LOBATTO_DEGREE {
        return Err(Error::UnsupportedDegree { degree: p });
    }
    let pf = p as f64;
    let mut nodes = vec![0.0; p + 1];
    nodes[0] = -1.0;
    nodes[p] = 1.0;
    for (i, node) in nodes.iter_mut().enumerate().take(p).skip(1) {
        let guess = -cos(PI * i as f64 / pf);
        let root = newton(
            guess,
            |t| {
                let (l, d) = legendre_with_derivative(p, t);
                // (1 - t²) L'' = 2t L' - p(p+1) L
                let dd = (2.0 * t * d - pf * (pf + 1.0) * l) / (1.0 - t * t);
                ((1.0 - t * t) * d, d / dd)
            },
            1e-13,
        )
        .ok_or(Error::NoConvergence {
            rule: "Gauss-Lobatto",
            degree: p,
        })?;
        *node = root;
    }
    symmetrize(&mut nodes);
    Ok(nodes)
}

/// `n`-point Gauss-Legendre rule, exact for degree `2n - 1`.
pub fn gauss_legendre_rule(n: usize) -> Result<QuadRule> {
    if n == 0 || n > MAX_GAUSS_POINTS {
        return Err(Error::InvalidArgument(
            "Gauss-Legendre point count must lie in 1..=64",
        ));
    }
    let nf = n as f64;
    let mut nodes = vec![0.0; n];
    for (i, node) in nodes.iter_mut().enumerate() {
        let guess = -cos(PI * (i as f64 + 0.75) / (nf + 0.5));
        *node = newton(
            guess,
            |t| {
                let (l, d) = legendre_with_derivative(n, t);
                (l, l / d)
            },
            1e-13,
        )
        .ok_or(Error::NoConvergence {
            rule: "Gauss-Legendre",
            degree: n,
        })?;
    }
    symmetrize(&mut nodes);
    let weights = nodes
        .iter()
        .map(|&t| {
            let (_, d) = legendre_with_derivative(n, t);
            2.0 / ((1.0 - t * t) * d * d)
        })
        .collect();
    Ok(QuadRule {
        nodes,
        weights,
        exactness_degree: 2 * n - 1,
    })
}

/// Gauss-Lobatto rule on the `p + 1` points of [`gauss_lobatto_points`],
/// exact for degree `2p - 1`.
pub fn gauss_lobatto_rule(p: usize) -> Result<QuadRule> {
    let nodes = gauss_lobatto_points(p)?;
    let scale = 2.0 / (p * (p + 1)) as f64;
    let weights = nodes
        .iter()
        .map(|&t| {
            let l = legendre(p, t);
            scale / (l * l)
        })
        .collect();
    Ok(QuadRule {
        nodes,
        weights,
        exactness_degree: 2 * p - 1,
    })
}

/// Lagrange basis on a set of distinct nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangeBasis1D {
    points: Vec<f64>,
    inv_denominators: Vec<f64>,
}

impl LagrangeBasis1D {
    pub fn new(points: Vec<f64>) -> Self {
        let inv_denominators = (0..points.len())
            .map(|k| {
                let prod: f64 = points
                    .iter()
                    .enumerate()
                    .filter(|&(m, _)| m != k)
                    .map(|(_, &tm)| points[k] - tm)
                    .product();
                1.0 / prod
            })
            .collect();
        Self {
            points,
            inv_denominators,
        }
    }

    /// Basis on the Gauss-Lobatto points of degree `p`.
    pub fn gauss_lobatto(p: usize) -> Result<Self> {
        Ok(Self::new(gauss_lobatto_points(p)?))
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.points.len() - 1
    }

    /// Writes `ℓ_k(t)` for all `k` into `out`.
    pub fn values_into(&self, t: f64, out: &mut [f64]) {
        for (k, o) in out.iter_mut().enumerate().take(self.points.len()) {
            let mut prod = self.inv_denominators[k];
            for (m, &tm) in self.points.iter().enumerate() {
                if m != k {
                    prod *= t - tm;
                }
            }
            *o = prod;
        }
    }

    /// Writes `ℓ_k'(t)` for all `k` into `out`.
    pub fn derivatives_into(&self, t: f64, out: &mut [f64]) {
        let n = self.points.len();
        for (k, o) in out.iter_mut().enumerate().take(n) {
            let mut sum = 0.0;
            for j in (0..n).filter(|&j| j != k) {
                let mut prod = 1.0;
                for (m, &tm) in self.points.iter().enumerate() {
                    if m != k && m != j {
                        prod *= t - tm;
                    }
                }
                sum += prod;
            }
            *o = sum * self.inv_denominators[k];
        }
    }

    pub fn values(&self, t: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.points.len()];
        self.values_into(t, &mut out);
        out
    }

    pub fn derivatives(&self, t: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.points.len()];
        self.derivatives_into(t, &mut out);
        out
    }

    /// Value and derivative tables at the query points, row-major
    /// `[query][basis]`.
    pub fn tabulate(&self, query: &[f64]) -> BasisTable {
        let n = self.points.len();
        let mut values = vec![0.0; query.len() * n];
        let mut derivatives = vec![0.0; query.len() * n];
        for (q, &t) in query.iter().enumerate() {
            self.values_into(t, &mut values[q * n..(q + 1) * n]);
            self.derivatives_into(t, &mut derivatives[q * n..(q + 1) * n]);
        }
        BasisTable {
            n_basis: n,
            values,
            derivatives,
        }
    }
}

/// Basis values and derivatives tabulated at a fixed set of reference points.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisTable {
    pub n_basis: usize,
    pub values: Vec<f64>,
    pub derivatives: Vec<f64>,
}

impl BasisTable {
    #[inline]
    pub fn value(&self, q: usize, k: usize) -> f64 {
        self.values[q * self.n_basis + k]
    }

    #[inline]
    pub fn derivative(&self, q: usize, k: usize) -> f64 {
        self.derivatives[q * self.n_basis + k]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn monomial_integral(k: usize) -> f64 {
        if k % 2 == 1 {
            0.0
        } else {
            2.0 / (k as f64 + 1.0)
        }
    }

    #[test]
    fn legendre_values() {
        assert_eq!(legendre(3, 1.0), 1.0);
        assert_abs_diff_eq!(legendre(3, 0.0), 0.0);
        // (3t² - 1)/2 at t = 1/2
        assert_abs_diff_eq!(legendre(2, 0.5), -0.125, epsilon = 1e-16);
        for k in 0..12 {
            assert_abs_diff_eq!(legendre(k, 1.0), 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn legendre_derivative_matches_closed_form() {
        // L_3' = (15t² - 3)/2
        for &t in &[-0.9, -0.3, 0.0, 0.41, 1.0] {
            let (_, d) = legendre_with_derivative(3, t);
            assert_abs_diff_eq!(d, (15.0 * t * t - 3.0) / 2.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn lobatto_points_small_degrees() {
        assert_eq!(gauss_lobatto_points(1).unwrap(), vec![-1.0, 1.0]);
        let p3 = gauss_lobatto_points(3).unwrap();
        let r = 1.0 / 5f64.sqrt();
        for (a, b) in p3.iter().zip(&[-1.0, -r, r, 1.0]) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn lobatto_points_residual_and_symmetry() {
        for p in 1..=MAX_LOBATTO_DEGREE {
            let pts = gauss_lobatto_points(p).unwrap();
            assert_eq!(pts.len(), p + 1);
            for w in pts.windows(2) {
                assert!(w[0] < w[1]);
            }
            for (i, &t) in pts.iter().enumerate() {
                let (_, d) = legendre_with_derivative(p, t);
                assert!(((1.0 - t * t) * d).abs() < 1e-14, "p={p} i={i}");
                assert!((t + pts[p - i]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn lobatto_points_p5_match_closed_form() {
        // L_5' = (315t⁴ - 210t² + 15)/8, roots t² = (7 ± 2√7)/21.
        let pts = gauss_lobatto_points(5).unwrap();
        let s7 = 7f64.sqrt();
        let inner = ((7.0 - 2.0 * s7) / 21.0).sqrt();
        let outer = ((7.0 + 2.0 * s7) / 21.0).sqrt();
        let expected = [-1.0, -outer, -inner, inner, outer, 1.0];
        for (a, b) in pts.iter().zip(&expected) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn gauss_legendre_small_rules() {
        let r1 = gauss_legendre_rule(1).unwrap();
        assert_eq!(r1.nodes, vec![0.0]);
        assert_abs_diff_eq!(r1.weights[0], 2.0, epsilon = 1e-15);
        let r2 = gauss_legendre_rule(2).unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert_abs_diff_eq!(r2.nodes[0], -s, epsilon = 1e-15);
        assert_abs_diff_eq!(r2.nodes[1], s, epsilon = 1e-15);
        assert_abs_diff_eq!(r2.weights[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r2.weights[1], 1.0, epsilon = 1e-15);
        let r4 = gauss_legendre_rule(4).unwrap();
        assert_abs_diff_eq!(r4.integrate(-1.0, 1.0, |t| t.powi(7)), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            r4.integrate(-1.0, 1.0, |t| t.powi(6)),
            2.0 / 7.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn lobatto_weights() {
        let r1 = gauss_lobatto_rule(1).unwrap();
        assert_eq!(r1.weights, vec![1.0, 1.0]);
        let r3 = gauss_lobatto_rule(3).unwrap();
        for (a, b) in r3
            .weights
            .iter()
            .zip(&[1.0 / 6.0, 5.0 / 6.0, 5.0 / 6.0, 1.0 / 6.0])
        {
            assert_abs_diff_eq!(a, b, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(r3.integrate(-1.0, 1.0, |t| t.powi(5)), 0.0, epsilon = 1e-16);
    }

    #[test]
    fn rules_exact_on_monomials() {
        for n in 1..=20 {
            let rule = gauss_legendre_rule(n).unwrap();
            assert_abs_diff_eq!(rule.weights.iter().sum::<f64>(), 2.0, epsilon = 1e-13);
            assert!(rule.weights.iter().all(|&w| w > 0.0));
            for k in 0..=rule.exactness_degree {
                let q = rule.integrate(-1.0, 1.0, |t| t.powi(k as i32));
                assert_abs_diff_eq!(q, monomial_integral(k), epsilon = 1e-13);
            }
        }
        for p in 1..=MAX_LOBATTO_DEGREE {
            let rule = gauss_lobatto_rule(p).unwrap();
            assert_abs_diff_eq!(rule.weights.iter().sum::<f64>(), 2.0, epsilon = 1e-13);
            assert!(rule.weights.iter().all(|&w| w > 0.0));
            for k in 0..=rule.exactness_degree {
                let q = rule.integrate(-1.0, 1.0, |t| t.powi(k as i32));
                assert_abs_diff_eq!(q, monomial_integral(k), epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn rejects_bad_degrees() {
        assert!(gauss_lobatto_points(0).is_err());
        assert!(gauss_lobatto_points(MAX_LOBATTO_DEGREE + 1).is_err());
        assert!(gauss_legendre_rule(0).is_err());
    }

    #[test]
    fn lagrange_cardinality() {
        let basis = LagrangeBasis1D::gauss_lobatto(5).unwrap();
        for (m, &t) in basis.points().iter().enumerate() {
            let v = basis.values(t);
            for (k, vk) in v.iter().enumerate() {
                let expected = if k == m { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(*vk, expected, epsilon = 1e-14);
            }
        }
    }
}
