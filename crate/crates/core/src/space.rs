//! Nodal `Q_p` finite element spaces on Shishkin meshes.
//!
//! Degrees of freedom sit at the Gauss-Lobatto points of each cell. Global
//! DOFs are numbered lexicographically with x running fastest: DOF `(gx, gy)`
//! has index `gy * (pN + 1) + gx`, and local DOF `(a, b)` of cell `(i, j)` is
//! global `(i p + a, j p + b)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::mesh::{ShishkinMesh1D, ShishkinMesh2D};
use crate::polyquad::LagrangeBasis1D;
use crate::problem::{Component, DecomposedSolution};
use crate::{Error, Result};

/// Boundary treatment of a space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// Homogeneous Dirichlet: boundary coefficients are held at zero.
    Dirichlet,
    /// No constraint; used for interpolating functions that do not vanish
    /// on the boundary.
    Free,
}

/// Something that can be evaluated with its gradient on the unit square.
pub trait Field2D {
    fn value(&self, x: f64, y: f64) -> f64;
    fn gradient(&self, x: f64, y: f64) -> [f64; 2];
}

/// Field given by a pair of closures.
pub struct FnField<F, G> {
    pub value: F,
    pub gradient: G,
}

impl<F, G> Field2D for FnField<F, G>
where
    F: Fn(f64, f64) -> f64,
    G: Fn(f64, f64) -> [f64; 2],
{
    fn value(&self, x: f64, y: f64) -> f64 {
        (self.value)(x, y)
    }

    fn gradient(&self, x: f64, y: f64) -> [f64; 2] {
        (self.gradient)(x, y)
    }
}

/// Zero field.
pub struct Zero;

impl Field2D for Zero {
    fn value(&self, _x: f64, _y: f64) -> f64 {
        0.0
    }

    fn gradient(&self, _x: f64, _y: f64) -> [f64; 2] {
        [0.0, 0.0]
    }
}

impl Field2D for DecomposedSolution {
    fn value(&self, x: f64, y: f64) -> f64 {
        DecomposedSolution::value(self, x, y)
    }

    fn gradient(&self, x: f64, y: f64) -> [f64; 2] {
        DecomposedSolution::gradient(self, x, y)
    }
}

impl Field2D for Component {
    fn value(&self, x: f64, y: f64) -> f64 {
        Component::value(self, x, y)
    }

    fn gradient(&self, x: f64, y: f64) -> [f64; 2] {
        Component::gradient(self, x, y)
    }
}

impl<T: Field2D + ?Sized> Field2D for &T {
    fn value(&self, x: f64, y: f64) -> f64 {
        (**self).value(x, y)
    }

    fn gradient(&self, x: f64, y: f64) -> [f64; 2] {
        (**self).gradient(x, y)
    }
}

/// `a - b` for two fields.
pub struct Difference<A, B>(pub A, pub B);

impl<A: Field2D, B: Field2D> Field2D for Difference<A, B> {
    fn value(&self, x: f64, y: f64) -> f64 {
        self.0.value(x, y) - self.1.value(x, y)
    }

    fn gradient(&self, x: f64, y: f64) -> [f64; 2] {
        let (a, b) = (self.0.gradient(x, y), self.1.gradient(x, y));
        [a[0] - b[0], a[1] - b[1]]
    }
}

/// Continuous piecewise `P_p` space on a 1D Shishkin mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct FeSpace1D {
    mesh: ShishkinMesh1D,
    p: usize,
    boundary: Boundary,
    basis: LagrangeBasis1D,
    coords: Vec<f64>,
}

impl FeSpace1D {
    pub fn new(mesh: ShishkinMesh1D, p: usize, boundary: Boundary) -> Result<Self> {
        let basis = LagrangeBasis1D::gauss_lobatto(p)?;
        let mut coords = vec![0.0; p * mesh.n() + 1];
        for i in 0..mesh.n() {
            let (a, b) = mesh.cell(i);
            for (k, &t) in basis.points().iter().enumerate() {
                coords[i * p + k] = a + 0.5 * (t + 1.0) * (b - a);
            }
        }
        // exact endpoints of every cell
        for (i, &x) in mesh.points().iter().enumerate() {
            coords[i * p] = x;
        }
        Ok(Self {
            mesh,
            p,
            boundary,
            basis,
            coords,
        })
    }

    pub fn mesh(&self) -> &ShishkinMesh1D {
        &self.mesh
    }

    pub fn degree(&self) -> usize {
        self.p
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn basis(&self) -> &LagrangeBasis1D {
        &self.basis
    }

    pub fn n_dofs(&self) -> usize {
        self.coords.len()
    }

    /// Coordinates of all DOFs, increasing.
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Global index of local DOF `a` in cell `i`.
    #[inline]
    pub fn dof(&self, cell: usize, a: usize) -> usize {
        cell * self.p + a
    }

    pub fn is_boundary(&self, g: usize) -> bool {
        g == 0 || g + 1 == self.coords.len()
    }

    /// Cell index and reference coordinate of `x`.
    pub fn reference(&self, x: f64) -> (usize, f64) {
        let i = self.mesh.locate(x);
        let (a, b) = self.mesh.cell(i);
        (i, 2.0 * (x - a) / (b - a) - 1.0)
    }

    pub fn nodal_project<F: Fn(f64) -> f64>(&self, g: F) -> FeFunction1D<'_> {
        let coeffs = self.coords.iter().map(|&x| g(x)).collect();
        FeFunction1D::new(self, coeffs)
    }
}

/// Coefficient vector over a [`FeSpace1D`].
#[derive(Debug, Clone, PartialEq)]
pub struct FeFunction1D<'s> {
    space: &'s FeSpace1D,
    pub coeffs: Vec<f64>,
}

impl<'s> FeFunction1D<'s> {
    /// Wraps a coefficient vector; boundary entries are zeroed in a
    /// Dirichlet space.
    pub fn new(space: &'s FeSpace1D, mut coeffs: Vec<f64>) -> Self {
        assert_eq!(coeffs.len(), space.n_dofs(), "coefficient vector length");
        if space.boundary == Boundary::Dirichlet {
            coeffs[0] = 0.0;
            let last = coeffs.len() - 1;
            coeffs[last] = 0.0;
        }
        Self { space, coeffs }
    }

    pub fn zero(space: &'s FeSpace1D) -> Self {
        Self::new(space, vec![0.0; space.n_dofs()])
    }

    pub fn space(&self) -> &'s FeSpace1D {
        self.space
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (i, t) = self.space.reference(x);
        let mut vals = [0.0; 16];
        let n = self.space.p + 1;
        self.space.basis.values_into(t, &mut vals[..n]);
        (0..n)
            .map(|a| self.coeffs[self.space.dof(i, a)] * vals[a])
            .sum()
    }

    pub fn eval_deriv(&self, x: f64) -> f64 {
        let (i, t) = self.space.reference(x);
        let mut ders = [0.0; 16];
        let n = self.space.p + 1;
        self.space.basis.derivatives_into(t, &mut ders[..n]);
        let scale = 2.0 / self.space.mesh.width(i);
        scale
            * (0..n)
                .map(|a| self.coeffs[self.space.dof(i, a)] * ders[a])
                .sum::<f64>()
    }

    /// Value inside cell `i` at reference coordinate `t`, ignoring `locate`.
    pub fn eval_in_cell(&self, i: usize, t: f64) -> f64 {
        let mut vals = [0.0; 16];
        let n = self.space.p + 1;
        self.space.basis.values_into(t, &mut vals[..n]);
        (0..n)
            .map(|a| self.coeffs[self.space.dof(i, a)] * vals[a])
            .sum()
    }

    pub fn deriv_in_cell(&self, i: usize, t: f64) -> f64 {
        let mut ders = [0.0; 16];
        let n = self.space.p + 1;
        self.space.basis.derivatives_into(t, &mut ders[..n]);
        let scale = 2.0 / self.space.mesh.width(i);
        scale
            * (0..n)
                .map(|a| self.coeffs[self.space.dof(i, a)] * ders[a])
                .sum::<f64>()
    }
}

/// Tensor-product `Q_p` space on a 2D Shishkin mesh, the discrete space
/// `V^N` when the boundary is [`Boundary::Dirichlet`].
#[derive(Debug, Clone, PartialEq)]
pub struct FeSpace {
    mesh: ShishkinMesh2D,
    x: FeSpace1D,
    y: FeSpace1D,
    boundary: Boundary,
}

impl FeSpace {
    pub fn new(mesh: ShishkinMesh2D, p: usize) -> Result<Self> {
        Self::with_boundary(mesh, p, Boundary::Dirichlet)
    }

    pub fn with_boundary(mesh: ShishkinMesh2D, p: usize, boundary: Boundary) -> Result<Self> {
        let x = FeSpace1D::new(mesh.mesh_x.clone(), p, Boundary::Free)?;
        let y = FeSpace1D::new(mesh.mesh_y.clone(), p, Boundary::Free)?;
        Ok(Self {
            mesh,
            x,
            y,
            boundary,
        })
    }

    pub fn mesh(&self) -> &ShishkinMesh2D {
        &self.mesh
    }

    pub fn degree(&self) -> usize {
        self.x.p
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn basis(&self) -> &LagrangeBasis1D {
        &self.x.basis
    }

    pub fn x_space(&self) -> &FeSpace1D {
        &self.x
    }

    pub fn y_space(&self) -> &FeSpace1D {
        &self.y
    }

    /// DOFs per direction, `pN + 1`.
    pub fn dofs_per_direction(&self) -> (usize, usize) {
        (self.x.n_dofs(), self.y.n_dofs())
    }

    /// Total DOF count `(pN + 1)²`, boundary included.
    pub fn n_dofs(&self) -> usize {
        self.x.n_dofs() * self.y.n_dofs()
    }

    /// DOFs not on the boundary, `(pN - 1)²`.
    pub fn n_interior_dofs(&self) -> usize {
        (self.x.n_dofs() - 2) * (self.y.n_dofs() - 2)
    }

    #[inline]
    pub fn global(&self, gx: usize, gy: usize) -> usize {
        gy * self.x.n_dofs() + gx
    }

    /// Splits a global index into `(gx, gy)`.
    #[inline]
    pub fn split(&self, g: usize) -> (usize, usize) {
        (g % self.x.n_dofs(), g / self.x.n_dofs())
    }

    pub fn is_boundary(&self, g: usize) -> bool {
        let (gx, gy) = self.split(g);
        self.x.is_boundary(gx) || self.y.is_boundary(gy)
    }

    pub fn dof_coords(&self, g: usize) -> (f64, f64) {
        let (gx, gy) = self.split(g);
        (self.x.coords[gx], self.y.coords[gy])
    }

    /// Number of local DOFs per cell, `(p + 1)²`.
    pub fn local_dofs(&self) -> usize {
        (self.x.p + 1) * (self.x.p + 1)
    }

    /// Global indices of cell `(i, j)` in local order (a fastest).
    pub fn cell_dofs(&self, i: usize, j: usize, out: &mut [usize]) {
        let n = self.x.p + 1;
        for b in 0..n {
            for a in 0..n {
                out[b * n + a] = self.global(self.x.dof(i, a), self.y.dof(j, b));
            }
        }
    }

    /// Largest `|g - h|` over DOF pairs sharing a cell.
    pub fn bandwidth(&self) -> usize {
        let p = self.x.p;
        p * self.x.n_dofs() + p
    }

    pub fn nodal_project<F: Fn(f64, f64) -> f64>(&self, g: F) -> FeFunction<'_> {
        let coeffs = (0..self.n_dofs())
            .map(|k| {
                let (x, y) = self.dof_coords(k);
                g(x, y)
            })
            .collect();
        FeFunction::new(self, coeffs)
    }

    pub fn same_as(&self, other: &FeSpace) -> bool {
        core::ptr::eq(self, other) || self == other
    }
}

/// Coefficient vector over a [`FeSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct FeFunction<'s> {
    space: &'s FeSpace,
    pub coeffs: Vec<f64>,
}

impl<'s> FeFunction<'s> {
    /// Wraps a coefficient vector; boundary entries are zeroed in a
    /// Dirichlet space.
    pub fn new(space: &'s FeSpace, mut coeffs: Vec<f64>) -> Self {
        assert_eq!(coeffs.len(), space.n_dofs(), "coefficient vector length");
        if space.boundary == Boundary::Dirichlet {
            for (g, c) in coeffs.iter_mut().enumerate() {
                if space.is_boundary(g) {
                    *c = 0.0;
                }
            }
        }
        Self { space, coeffs }
    }

    pub fn zero(space: &'s FeSpace) -> Self {
        Self::new(space, vec![0.0; space.n_dofs()])
    }

    pub fn space(&self) -> &'s FeSpace {
        self.space
    }

    /// `self - other` on the same space.
    pub fn sub(&self, other: &FeFunction<'_>) -> Result<FeFunction<'s>> {
        if !self.space.same_as(other.space) {
            return Err(Error::SpaceMismatch);
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(FeFunction::new(self.space, coeffs))
    }

    /// Value and gradient inside cell `(i, j)` at reference point `(s, t)`.
    pub fn eval_in_cell(&self, i: usize, j: usize, s: f64, t: f64) -> (f64, [f64; 2]) {
        let n = self.space.x.p + 1;
        let basis = &self.space.x.basis;
        let (mut vx, mut dx, mut vy, mut dy) = ([0.0; 16], [0.0; 16], [0.0; 16], [0.0; 16]);
        basis.values_into(s, &mut vx[..n]);
        basis.derivatives_into(s, &mut dx[..n]);
        basis.values_into(t, &mut vy[..n]);
        basis.derivatives_into(t, &mut dy[..n]);
        let hx = self.space.mesh.mesh_x.width(i);
        let hy = self.space.mesh.mesh_y.width(j);
        let (mut val, mut gx, mut gy) = (0.0, 0.0, 0.0);
        for b in 0..n {
            let row = self.space.y.dof(j, b) * self.space.x.n_dofs();
            for a in 0..n {
                let c = self.coeffs[row + self.space.x.dof(i, a)];
                val += c * vx[a] * vy[b];
                gx += c * dx[a] * vy[b];
                gy += c * vx[a] * dy[b];
            }
        }
        (val, [gx * 2.0 / hx, gy * 2.0 / hy])
    }

    fn locate(&self, x: f64, y: f64) -> (usize, usize, f64, f64) {
        let (i, s) = self.space.x.reference(x);
        let (j, t) = self.space.y.reference(y);
        (i, j, s, t)
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let (i, j, s, t) = self.locate(x, y);
        self.eval_in_cell(i, j, s, t).0
    }

    pub fn eval_grad(&self, x: f64, y: f64) -> [f64; 2] {
        let (i, j, s, t) = self.locate(x, y);
        self.eval_in_cell(i, j, s, t).1
    }
}

impl Field2D for FeFunction<'_> {
    fn value(&self, x: f64, y: f64) -> f64 {
        self.eval(x, y)
    }

    fn gradient(&self, x: f64, y: f64) -> [f64; 2] {
        self.eval_grad(x, y)
    }
}
