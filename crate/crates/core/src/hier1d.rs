//! Legendre hierarchical representation of 1D piecewise polynomials.
//!
//! For odd `p >= 3` every continuous piecewise `P_p` function `v` on a mesh
//! `0 = x_0 < ... < x_N = 1` with `v(0) = v(1) = 0` has the unique form
//!
//! ```text
//! v = Σ_{i=1}^{N-1} v_i φ_i + Σ_{k} Σ_{j=1}^{N} y^{2k}_j χ_{2k,j} + Σ_{k} Σ_{i=1}^{N} w^{2k+1}_i ψ_{2k+1,i}
//! ```
//!
//! with `k = 1..(p-1)/2`. `φ_i` are hats, `χ_{2k,j}` even bubbles on cell
//! `j = [x_{j-1}, x_j]` and `ψ_{2k+1,i}` odd bubbles on the cell pair around
//! `x_i`; `ψ_{2k+1,N}` keeps only its left half.
//!
//! Indices in this module follow that 1-based convention: node `i` is
//! `x_i`, cell `j` is `[x_{j-1}, x_j]`, i.e. mesh cell `j - 1`.
//!
//! Reference functions:
//! * `φ̂(t) = 1 - |t|` on `[-1, 1]`,
//! * `χ̂_{2k}(t) = (1 - L_{2k}(2t - 1)) / 2` on `[0, 1]`,
//! * `ψ̂_{2k+1}(t) = (L_1(2|t| - 1) - L_{2k+1}(2|t| - 1)) / 2` on `[-1, 1]`.
//!
//! On a cell with local coordinate `s ∈ [-1, 1]` the left half of
//! `ψ_{2k+1,i}` is `-g_k(s)` and the right half of `ψ_{2k+1,i-1}` is
//! `+g_k(s)`, where `g_k = (L_1 - L_{2k+1}) / 2` is odd. The odd moment
//! functional of cell `m` therefore returns `w_m - w_{m-1}`, and `w_i` is the
//! running sum of those moments.

use alloc::vec;
use alloc::vec::Vec;

use crate::banded::BandedMatrix;
use crate::math::{abs, powi, sqrt};
use crate::mesh::ShishkinMesh1D;
use crate::polyquad::{
    gauss_legendre_rule, legendre, LagrangeBasis1D, QuadRule, MAX_LOBATTO_DEGREE,
};
use crate::problem::LayerProblem1D;
use crate::space::{FeFunction1D, FeSpace1D};
use crate::{Error, Result};

/// `φ̂(t) = 1 - |t|`.
pub fn hat_ref(t: f64) -> f64 {
    1.0 - abs(t)
}

/// `χ̂_{2k}(t) = (1 - L_{2k}(2t - 1)) / 2`, `t ∈ [0, 1]`.
pub fn even_ref(k: usize, t: f64) -> f64 {
    0.5 * (1.0 - legendre(2 * k, 2.0 * t - 1.0))
}

/// `ψ̂_{2k+1}(t) = (L_1(2|t| - 1) - L_{2k+1}(2|t| - 1)) / 2`, `t ∈ [-1, 1]`.
pub fn odd_ref(k: usize, t: f64) -> f64 {
    let s = 2.0 * abs(t) - 1.0;
    0.5 * (s - legendre(2 * k + 1, s))
}

/// `g_k(s) = (L_1(s) - L_{2k+1}(s)) / 2`.
fn odd_local(k: usize, s: f64) -> f64 {
    0.5 * (s - legendre(2 * k + 1, s))
}

/// The hierarchical basis on a fixed mesh for odd `p >= 3`.
#[derive(Debug, Clone, PartialEq)]
pub struct HierBasis {
    mesh: ShishkinMesh1D,
    p: usize,
    rule: QuadRule,
}

impl HierBasis {
    pub fn new(mesh: ShishkinMesh1D, p: usize) -> Result<Self> {
        if p < 3 || p % 2 == 0 || p > MAX_LOBATTO_DEGREE {
            return Err(Error::UnsupportedDegree { degree: p });
        }
        let rule = gauss_legendre_rule(p + 2)?;
        Ok(Self { mesh, p, rule })
    }

    pub fn mesh(&self) -> &ShishkinMesh1D {
        &self.mesh
    }

    pub fn degree(&self) -> usize {
        self.p
    }

    pub fn n(&self) -> usize {
        self.mesh.n()
    }

    /// Number of even (and of odd) bubble orders, `(p - 1) / 2`.
    pub fn levels(&self) -> usize {
        (self.p - 1) / 2
    }

    /// `pN - 1`, the dimension of the discrete space with zero boundary values.
    pub fn dimension(&self) -> usize {
        self.p * self.n() - 1
    }

    /// `x_i`.
    pub fn node(&self, i: usize) -> f64 {
        self.mesh.points()[i]
    }

    /// `h_j = x_j - x_{j-1}`, `j = 1..N`.
    pub fn h(&self, j: usize) -> f64 {
        self.mesh.width(j - 1)
    }

    /// Gauss rule with `p + 2` points used for every basis integral.
    pub fn rule(&self) -> &QuadRule {
        &self.rule
    }

    /// `F_i^{-1}(x)`: maps `[x_{i-1}, x_{i+1}]` onto `[-1, 1]` with `x_i ↦ 0`.
    pub fn map_inverse(&self, i: usize, x: f64) -> f64 {
        let xi = self.node(i);
        if x <= xi {
            (x - xi) / self.h(i)
        } else {
            (x - xi) / self.h(i + 1)
        }
    }

    /// `φ_i(x)`, `i = 1..N-1`.
    pub fn hat(&self, i: usize, x: f64) -> f64 {
        let n = self.n();
        if i == 0 || i >= n || x < self.node(i - 1) || x > self.node(i + 1) {
            return 0.0;
        }
        hat_ref(self.map_inverse(i, x))
    }

    /// `χ_{2k,j}(x)`, `j = 1..N`.
    pub fn even(&self, k: usize, j: usize, x: f64) -> f64 {
        if j == 0 || j > self.n() || x < self.node(j - 1) || x > self.node(j) {
            return 0.0;
        }
        even_ref(k, (x - self.node(j - 1)) / self.h(j))
    }

    /// `ψ_{2k+1,i}(x)`, `i = 1..N`; `ψ_{2k+1,N}` is the left half only.
    pub fn odd(&self, k: usize, i: usize, x: f64) -> f64 {
        let n = self.n();
        if i == 0 || i > n || x < self.node(i - 1) {
            return 0.0;
        }
        if i == n {
            return odd_ref(k, (x - 1.0) / self.h(n));
        }
        if x > self.node(i + 1) {
            return 0.0;
        }
        odd_ref(k, self.map_inverse(i, x))
    }

    /// `∫_{cell j} L^j_{2k} χ_{2k,j} = -h_j / (2(4k + 1))`.
    pub fn even_denominator(&self, k: usize, j: usize) -> f64 {
        -self.h(j) / (2.0 * (4 * k + 1) as f64)
    }

    /// `∫_{cell i} L^i_{2k+1} ψ_{2k+1,i} = h_i / (2(4k + 3))`.
    pub fn odd_denominator(&self, k: usize, i: usize) -> f64 {
        self.h(i) / (2.0 * (4 * k + 3) as f64)
    }

    /// `∫_{cell j} f` with the basis rule.
    pub fn integrate_cell<F: FnMut(f64) -> f64>(&self, j: usize, f: F) -> f64 {
        self.rule.integrate(self.node(j - 1), self.node(j), f)
    }

    /// Evaluates the representation through the global basis functions.
    pub fn evaluate(&self, rep: &HierRepresentation, x: f64) -> f64 {
        let n = self.n();
        let mut sum = 0.0;
        for i in 1..n {
            sum += rep.v(i) * self.hat(i, x);
        }
        for k in 1..=self.levels() {
            for j in 1..=n {
                sum += rep.y(k, j) * self.even(k, j, x);
                sum += rep.w(k, j) * self.odd(k, j, x);
            }
        }
        sum
    }

    /// Value of the representation restricted to cell `j` at local `s ∈ [-1, 1]`.
    pub fn eval_in_cell(&self, rep: &HierRepresentation, j: usize, s: f64) -> f64 {
        let n = self.n();
        let left = if j > 1 { rep.v(j - 1) } else { 0.0 };
        let right = if j < n { rep.v(j) } else { 0.0 };
        let mut sum = 0.5 * (1.0 - s) * left + 0.5 * (1.0 + s) * right;
        for k in 1..=self.levels() {
            let w_prev = if j > 1 { rep.w(k, j - 1) } else { 0.0 };
            sum += rep.y(k, j) * 0.5 * (1.0 - legendre(2 * k, s));
            sum += (w_prev - rep.w(k, j)) * odd_local(k, s);
        }
        sum
    }

    fn check_space(&self, space: &FeSpace1D) -> Result<()> {
        if space.mesh() != &self.mesh || space.degree() != self.p {
            return Err(Error::SpaceMismatch);
        }
        Ok(())
    }
}

/// Coefficients of the hierarchical representation.
#[derive(Debug, Clone, PartialEq)]
pub struct HierRepresentation {
    /// `nodal[i - 1] = v_i`, `i = 1..N-1`.
    pub nodal: Vec<f64>,
    /// `even[k - 1][j - 1] = y^{2k}_j`, `j = 1..N`.
    pub even: Vec<Vec<f64>>,
    /// `odd[k - 1][i - 1] = w^{2k+1}_i`, `i = 1..N`.
    pub odd: Vec<Vec<f64>>,
}

impl HierRepresentation {
    pub fn zeros(n: usize, p: usize) -> Self {
        let levels = (p - 1) / 2;
        Self {
            nodal: vec![0.0; n - 1],
            even: vec![vec![0.0; n]; levels],
            odd: vec![vec![0.0; n]; levels],
        }
    }

    pub fn v(&self, i: usize) -> f64 {
        self.nodal[i - 1]
    }

    pub fn y(&self, k: usize, j: usize) -> f64 {
        self.even[k - 1][j - 1]
    }

    pub fn w(&self, k: usize, i: usize) -> f64 {
        self.odd[k - 1][i - 1]
    }

    /// Total number of coefficients.
    pub fn len(&self) -> usize {
        self.nodal.len()
            + self
                .even
                .iter()
                .chain(&self.odd)
                .map(Vec::len)
                .sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Flattens as `nodal, even levels, odd levels`.
    pub fn to_vec(&self) -> Vec<f64> {
        let mut out = self.nodal.clone();
        for level in self.even.iter().chain(&self.odd) {
            out.extend_from_slice(level);
        }
        out
    }

    /// Inverse of [`to_vec`](Self::to_vec).
    pub fn from_slice(n: usize, p: usize, data: &[f64]) -> Result<Self> {
        let mut rep = Self::zeros(n, p);
        if data.len() != rep.len() {
            return Err(Error::InvalidArgument(
                "coefficient count does not match N and p",
            ));
        }
        let (nodal, mut rest) = data.split_at(n - 1);
        rep.nodal.copy_from_slice(nodal);
        for level in rep.even.iter_mut().chain(rep.odd.iter_mut()) {
            let (head, tail) = rest.split_at(n);
            level.copy_from_slice(head);
            rest = tail;
        }
        Ok(rep)
    }

    /// Largest coefficient difference.
    pub fn max_diff(&self, other: &Self) -> f64 {
        self.to_vec()
            .iter()
            .zip(other.to_vec().iter())
            .fold(0.0f64, |m, (a, b)| m.max(abs(a - b)))
    }
}

/// Computes the representation from the degrees of freedom: point values,
/// even moment quotients and the running sum of odd moment quotients.
pub fn decompose(v: &FeFunction1D<'_>, basis: &HierBasis) -> Result<HierRepresentation> {
    let space = v.space();
    basis.check_space(space)?;
    let n = basis.n();
    let p = basis.p;
    let last = v.coeffs.len() - 1;
    let (left, right) = (v.coeffs[0], v.coeffs[last]);
    let scale = v.coeffs.iter().fold(1.0f64, |m, c| m.max(abs(*c)));
    if abs(left) > 1e-14 * scale || abs(right) > 1e-14 * scale {
        return Err(Error::NonzeroBoundary { left, right });
    }

    let mut rep = HierRepresentation::zeros(n, p);
    for i in 1..n {
        rep.nodal[i - 1] = v.coeffs[space.dof(i, 0)];
    }
    for k in 1..=basis.levels() {
        let mut running = 0.0;
        for j in 1..=n {
            let (a, h) = (basis.node(j - 1), basis.h(j));
            let local = |x: f64| 2.0 * (x - a) / h - 1.0;
            let even = basis.integrate_cell(j, |x| {
                let s = local(x);
                legendre(2 * k, s) * v.eval_in_cell(j - 1, s)
            });
            let odd = basis.integrate_cell(j, |x| {
                let s = local(x);
                legendre(2 * k + 1, s) * v.eval_in_cell(j - 1, s)
            });
            rep.even[k - 1][j - 1] = even / basis.even_denominator(k, j);
            running += odd / basis.odd_denominator(k, j);
            rep.odd[k - 1][j - 1] = running;
        }
    }
    Ok(rep)
}

/// Nodal coefficients of the represented function in `space`, which must be
/// the degree-`p` space on the basis mesh.
pub fn reconstruct<'s>(
    rep: &HierRepresentation,
    basis: &HierBasis,
    space: &'s FeSpace1D,
) -> Result<FeFunction1D<'s>> {
    basis.check_space(space)?;
    if rep.len() != basis.dimension() {
        return Err(Error::InvalidArgument(
            "representation size does not match the basis",
        ));
    }
    let mut coeffs = vec![0.0; space.n_dofs()];
    let points = space.basis().points();
    for j in 1..=basis.n() {
        for (a, &s) in points.iter().enumerate() {
            coeffs[space.dof(j - 1, a)] = basis.eval_in_cell(rep, j, s);
        }
    }
    Ok(FeFunction1D::new(space, coeffs))
}

/// The two scalar products that survive the parity argument for `p = 3`,
/// in closed form and by quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossProducts {
    /// `¼ Σ v_i (h_i y_i + h_{i+1} y_{i+1})`
    pub hat_even_closed: f64,
    /// `(Σ v_i φ_i, Σ y_j χ_{2,j})`
    pub hat_even_quadrature: f64,
    /// `v_{N-1} w_N h_N / 12`
    pub hat_last_odd_closed: f64,
    /// `(Σ v_i φ_i, w_N ψ_{3,N})`
    pub hat_last_odd_quadrature: f64,
}

pub fn cross_products(rep: &HierRepresentation, basis: &HierBasis) -> Result<CrossProducts> {
    if basis.p != 3 {
        return Err(Error::UnsupportedDegree { degree: basis.p });
    }
    let n = basis.n();
    let hat_even_closed = 0.25
        * (1..n)
            .map(|i| rep.v(i) * (basis.h(i) * rep.y(1, i) + basis.h(i + 1) * rep.y(1, i + 1)))
            .sum::<f64>();
    let hat_last_odd_closed = rep.v(n - 1) * rep.w(1, n) * basis.h(n) / 12.0;

    let hats = |x: f64| (1..n).map(|i| rep.v(i) * basis.hat(i, x)).sum::<f64>();
    let hat_even_quadrature = (1..=n)
        .map(|j| basis.integrate_cell(j, |x| hats(x) * rep.y(1, j) * basis.even(1, j, x)))
        .sum();
    let hat_last_odd_quadrature =
        basis.integrate_cell(n, |x| hats(x) * rep.w(1, n) * basis.odd(1, n, x));
    Ok(CrossProducts {
        hat_even_closed,
        hat_even_quadrature,
        hat_last_odd_closed,
        hat_last_odd_quadrature,
    })
}

/// `max |(χ_{2k,j}, ψ_{2m+1,i})|` over all levels and all pairs with
/// overlapping support.
pub fn max_parity_product(basis: &HierBasis) -> f64 {
    let n = basis.n();
    let mut worst = 0.0f64;
    for k in 1..=basis.levels() {
        for m in 1..=basis.levels() {
            for j in 1..=n {
                for i in [j - 1, j] {
                    if i == 0 {
                        continue;
                    }
                    let value =
                        basis.integrate_cell(j, |x| basis.even(k, j, x) * basis.odd(m, i, x));
                    worst = worst.max(abs(value));
                }
            }
        }
    }
    worst
}

/// The frozen-coefficient interpolation error model around node `x_i`:
/// on each adjacent cell `S^{(p+1)}(x_i) / (p+1)! · Π (x - t_a)` over the
/// Gauss-Lobatto nodes `t_a` of that cell. For `i = N` only the left cell exists.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaTilde {
    i: usize,
    coeff: f64,
    left: Vec<f64>,
    right: Option<Vec<f64>>,
}

/// Builds `η̃_i` for `i = 1..N` from `s_high = S^{(p+1)}(x_i)`.
pub fn build_eta_tilde(i: usize, s_high: f64, basis: &HierBasis) -> Result<EtaTilde> {
    let n = basis.n();
    if i == 0 || i > n {
        return Err(Error::InvalidArgument(
            "eta tilde node index must lie in 1..=N",
        ));
    }
    let gl = LagrangeBasis1D::gauss_lobatto(basis.p)?;
    let nodes = |j: usize| -> Vec<f64> {
        let (a, h) = (basis.node(j - 1), basis.h(j));
        gl.points()
            .iter()
            .map(|t| a + 0.5 * h * (t + 1.0))
            .collect()
    };
    let factorial = (1..=basis.p + 1).map(|k| k as f64).product::<f64>();
    Ok(EtaTilde {
        i,
        coeff: s_high / factorial,
        left: nodes(i),
        right: if i < n { Some(nodes(i + 1)) } else { None },
    })
}

fn node_product(nodes: &[f64], x: f64) -> f64 {
    nodes.iter().map(|t| x - t).product()
}

fn node_product_derivative(nodes: &[f64], x: f64) -> f64 {
    (0..nodes.len())
        .map(|skip| {
            nodes
                .iter()
                .enumerate()
                .filter(|(l, _)| *l != skip)
                .map(|(_, t)| x - t)
                .product::<f64>()
        })
        .sum()
}

impl EtaTilde {
    pub fn node_index(&self) -> usize {
        self.i
    }

    /// `S^{(p+1)}(x_i) / (p+1)!`
    pub fn coefficient(&self) -> f64 {
        self.coeff
    }

    pub fn support(&self) -> (f64, f64) {
        let hi = self
            .right
            .as_ref()
            .map_or(self.left[self.left.len() - 1], |r| r[r.len() - 1]);
        (self.left[0], hi)
    }

    fn branch(&self, x: f64) -> Option<&[f64]> {
        let (lo, hi) = self.support();
        let mid = self.left[self.left.len() - 1];
        if x < lo || x > hi {
            None
        } else if x <= mid {
            Some(&self.left)
        } else {
            self.right.as_deref()
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        self.branch(x)
            .map_or(0.0, |nodes| self.coeff * node_product(nodes, x))
    }

    pub fn derivative(&self, x: f64) -> f64 {
        self.branch(x)
            .map_or(0.0, |nodes| self.coeff * node_product_derivative(nodes, x))
    }

    /// Orthogonality integrals `∫ η̃_i' φ_i`, `max_k |∫ η̃_i' ψ_{2k+1,i}|` over
    /// the pair and `max_k |∫_{cell i} η̃_i' χ_{2k,i}|`.
    pub fn orthogonality(&self, basis: &HierBasis) -> EtaOrthogonality {
        let i = self.i;
        let cells: &[usize] = if i < basis.n() { &[i, i + 1] } else { &[i] };
        let pair = |f: &dyn Fn(f64) -> f64| -> f64 {
            cells
                .iter()
                .map(|&j| basis.integrate_cell(j, |x| self.derivative_in(j, x) * f(x)))
                .sum()
        };
        let hat = abs(pair(&|x| basis.hat(i, x)));
        let mut odd = 0.0f64;
        let mut even = 0.0f64;
        for k in 1..=basis.levels() {
            odd = odd.max(abs(pair(&|x| basis.odd(k, i, x))));
            even =
                even.max(abs(basis.integrate_cell(i, |x| {
                    self.derivative_in(i, x) * basis.even(k, i, x)
                })));
        }
        EtaOrthogonality { hat, odd, even }
    }

    /// Derivative of the branch on cell `j`, which must be `i` or `i + 1`.
    fn derivative_in(&self, j: usize, x: f64) -> f64 {
        let nodes = if j == self.i {
            &self.left
        } else {
            self.right.as_ref().expect("cell right of x_N")
        };
        self.coeff * node_product_derivative(nodes, x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaOrthogonality {
    pub hat: f64,
    pub odd: f64,
    pub even: f64,
}

impl EtaOrthogonality {
    pub fn max(&self) -> f64 {
        self.hat.max(self.odd).max(self.even)
    }
}

/// Convective term `∫ b (S - Ŝ)' v` for the 1D problem and its split into
/// the terms `I` (node `N/2`), `II + III` (frozen-coefficient remainders)
/// and `IV` (the last odd bubbles).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvectiveBound {
    pub n: usize,
    pub integral: f64,
    pub energy_norm: f64,
    /// `|integral| / (N^{-(p+1/4)} |v|_E)`
    pub ratio: f64,
    pub term_i: f64,
    pub term_ii_iii: f64,
    pub term_iv: f64,
    /// `integral - (I + II + III + IV)`: the `η̃` terms away from `N/2`,
    /// which vanish on uniform cell pairs.
    pub closure: f64,
}

/// Evaluates the convective bound ratio. `s(k, x)` returns `S^{(k)}(x)` for
/// `k <= p + 1`; `Ŝ` is the Gauss-Lobatto interpolant of `S`.
pub fn verify_convective_bound(
    s: &dyn Fn(usize, f64) -> f64,
    v: &FeFunction1D<'_>,
    basis: &HierBasis,
    prob: &LayerProblem1D,
) -> Result<ConvectiveBound> {
    let space = v.space();
    basis.check_space(space)?;
    let rep = decompose(v, basis)?;
    let n = basis.n();
    let p = basis.p;
    let b = prob.b;
    let fine = gauss_legendre_rule(2 * p + 4)?;
    let mut eta = CellInterpolationError::new(s, basis, space.basis());
    let mut eta_prime = |j: usize, x: f64| eta.derivative(j, x);
    let on_cell = |j: usize, f: &mut dyn FnMut(f64) -> f64| -> f64 {
        fine.integrate(basis.node(j - 1), basis.node(j), f)
    };

    let mut integral = 0.0;
    let mut energy_sq = 0.0;
    for j in 1..=n {
        let a = basis.node(j - 1);
        let h = basis.h(j);
        integral += on_cell(j, &mut |x| {
            b * eta_prime(j, x) * v.eval_in_cell(j - 1, 2.0 * (x - a) / h - 1.0)
        });
        energy_sq += on_cell(j, &mut |x| {
            let t = 2.0 * (x - a) / h - 1.0;
            let (val, der) = (v.eval_in_cell(j - 1, t), v.deriv_in_cell(j - 1, t));
            prob.eps * der * der + val * val
        });
    }
    let energy_norm = sqrt(energy_sq);

    let etas: Vec<EtaTilde> = (1..=n)
        .map(|i| build_eta_tilde(i, s(p + 1, basis.node(i)), basis))
        .collect::<Result<_>>()?;
    let pair_part = |i: usize, x: f64| -> f64 {
        rep.v(i) * basis.hat(i, x)
            + (1..=basis.levels())
                .map(|k| rep.w(k, i) * basis.odd(k, i, x))
                .sum::<f64>()
    };

    let half = n / 2;
    let mut term_i = 0.0;
    for j in [half, half + 1] {
        term_i += on_cell(j, &mut |x| {
            b * etas[half - 1].derivative_in(j, x) * pair_part(half, x)
        });
    }
    let mut term_ii_iii = 0.0;
    for i in 1..n {
        for j in [i, i + 1] {
            term_ii_iii += on_cell(j, &mut |x| {
                b * (eta_prime(j, x) - etas[i - 1].derivative_in(j, x)) * pair_part(i, x)
            });
        }
    }
    for j in 1..=n {
        term_ii_iii += on_cell(j, &mut |x| {
            let bubbles: f64 = (1..=basis.levels())
                .map(|k| rep.y(k, j) * basis.even(k, j, x))
                .sum();
            b * (eta_prime(j, x) - etas[j - 1].derivative_in(j, x)) * bubbles
        });
    }
    let term_iv = on_cell(n, &mut |x| {
        let tail: f64 = (1..=basis.levels())
            .map(|k| rep.w(k, n) * basis.odd(k, n, x))
            .sum();
        b * eta_prime(n, x) * tail
    });

    let scale = bound_scale(n, p);
    Ok(ConvectiveBound {
        n,
        integral,
        energy_norm,
        ratio: abs(integral) / (scale * energy_norm),
        term_i,
        term_ii_iii,
        term_iv,
        closure: integral - (term_i + term_ii_iii + term_iv),
    })
}

/// `(S - Ŝ)'` on cell `j` with `Ŝ` the cellwise Gauss-Lobatto interpolant.
struct CellInterpolationError<'a> {
    s: &'a dyn Fn(usize, f64) -> f64,
    basis: &'a HierBasis,
    gl: &'a LagrangeBasis1D,
    nodal: Vec<Vec<f64>>,
    ders: Vec<f64>,
}

impl<'a> CellInterpolationError<'a> {
    fn new(
        s: &'a dyn Fn(usize, f64) -> f64,
        basis: &'a HierBasis,
        gl: &'a LagrangeBasis1D,
    ) -> Self {
        let nodal = (1..=basis.n())
            .map(|j| {
                gl.points()
                    .iter()
                    .map(|t| s(0, basis.node(j - 1) + 0.5 * basis.h(j) * (t + 1.0)))
                    .collect()
            })
            .collect();
        Self {
            s,
            basis,
            gl,
            nodal,
            ders: vec![0.0; gl.len()],
        }
    }

    fn derivative(&mut self, j: usize, x: f64) -> f64 {
        let h = self.basis.h(j);
        let t = 2.0 * (x - self.basis.node(j - 1)) / h - 1.0;
        self.gl.derivatives_into(t, &mut self.ders);
        let interp: f64 = self.nodal[j - 1]
            .iter()
            .zip(&self.ders)
            .map(|(a, d)| a * d)
            .sum();
        (self.s)(1, x) - 2.0 / h * interp
    }
}

/// Scale `N^{-(p+1/4)}` of the convective bound.
fn bound_scale(n: usize, p: usize) -> f64 {
    powi(n as f64, -(p as i32)) / sqrt(sqrt(n as f64))
}

/// The largest ratio over all discrete `v`, attained by the energy-norm Riesz
/// representer of `v ↦ ∫ b (S - Ŝ)' v`.
#[derive(Debug, Clone, PartialEq)]
pub struct WorstCase {
    pub n: usize,
    pub ratio: f64,
    /// Nodal coefficients of the maximizing `v` in the Dirichlet space.
    pub maximizer: Vec<f64>,
}

pub fn worst_case_ratio(
    s: &dyn Fn(usize, f64) -> f64,
    basis: &HierBasis,
    prob: &LayerProblem1D,
) -> Result<WorstCase> {
    let n = basis.n();
    let p = basis.p;
    let gl = LagrangeBasis1D::gauss_lobatto(p)?;
    let fine = gauss_legendre_rule(2 * p + 4)?;
    let mut eta = CellInterpolationError::new(s, basis, &gl);
    let dofs = p * n + 1;
    let mut gram = BandedMatrix::zeros(dofs, p, p);
    let mut rhs = vec![0.0; dofs];
    let mut vals = vec![0.0; p + 1];
    let mut ders = vec![0.0; p + 1];
    for j in 1..=n {
        let (x0, h) = (basis.node(j - 1), basis.h(j));
        for (t, wq) in fine.nodes.iter().zip(&fine.weights) {
            let x = x0 + 0.5 * h * (t + 1.0);
            let w = 0.5 * h * wq;
            gl.values_into(*t, &mut vals);
            gl.derivatives_into(*t, &mut ders);
            let load = prob.b * eta.derivative(j, x);
            for a in 0..=p {
                let ga = (j - 1) * p + a;
                rhs[ga] += w * load * vals[a];
                for c in 0..=p {
                    let gc = (j - 1) * p + c;
                    let stiff = 4.0 / (h * h) * ders[a] * ders[c];
                    gram.add(ga, gc, w * (prob.eps * stiff + vals[a] * vals[c]));
                }
            }
        }
    }
    for g in [0, dofs - 1] {
        gram.eliminate(g);
        rhs[g] = 0.0;
    }
    let maximizer = gram.factorize()?.solve(&rhs);
    let dual_sq: f64 = rhs.iter().zip(&maximizer).map(|(a, b)| a * b).sum();
    Ok(WorstCase {
        n,
        ratio: sqrt(dual_sq) / bound_scale(n, p),
        maximizer,
    })
}
