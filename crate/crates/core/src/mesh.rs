//! Piecewise-uniform Shishkin meshes.
//!
//! With transition point `λ = (σε/β) ln N` the 1D mesh has `N/2` fine cells
//! of width `2λ/N` on `[0, λ]` and `N/2` coarse cells of width `2(1-λ)/N` on
//! `[λ, 1]`. The 2D mesh is the tensor product of an x- and a y-mesh.
//!
//! Cells are indexed from zero: cell `i` is `[x_i, x_{i+1}]`, so the fine
//! cells are `i < N/2`.

use alloc::vec::Vec;

use crate::math::ln;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ShishkinMesh1D {
    n: usize,
    lambda: f64,
    points: Vec<f64>,
    sigma: f64,
    eps: f64,
    beta: f64,
}

/// Upper bound on ε for which `λ <= 1/2`.
pub fn admissible_eps(n: usize, sigma: f64, beta: f64) -> f64 {
    beta / (2.0 * sigma * ln(n as f64))
}

/// Builds the 1D Shishkin mesh. Fails when ε is too large for a
/// layer-adapted mesh to exist.
pub fn build_mesh_1d(n: usize, sigma: f64, eps: f64, beta: f64) -> Result<ShishkinMesh1D> {
    check_params(n, sigma, eps, beta)?;
    let lambda = sigma * eps / beta * ln(n as f64);
    let limit = admissible_eps(n, sigma, beta);
    if lambda > 0.5 || eps > limit {
        return Err(Error::InadmissibleEps { eps, limit, lambda });
    }
    Ok(ShishkinMesh1D::with_transition(n, lambda, sigma, eps, beta))
}

/// Like [`build_mesh_1d`], but clamps `λ` to 1/2 (a uniform mesh) instead of
/// failing for large ε.
pub fn build_mesh_1d_clamped(n: usize, sigma: f64, eps: f64, beta: f64) -> Result<ShishkinMesh1D> {
    check_params(n, sigma, eps, beta)?;
    let lambda = (sigma * eps / beta * ln(n as f64)).min(0.5);
    Ok(ShishkinMesh1D::with_transition(n, lambda, sigma, eps, beta))
}

fn check_params(n: usize, sigma: f64, eps: f64, beta: f64) -> Result<()> {
    if n < 4 || n % 2 != 0 {
        return Err(Error::InvalidCellCount { n });
    }
    if !(sigma > 0.0) || !(eps > 0.0) || !(beta > 0.0) {
        return Err(Error::InvalidArgument(
            "sigma, eps and beta must be positive",
        ));
    }
    Ok(())
}

impl ShishkinMesh1D {
    fn with_transition(n: usize, lambda: f64, sigma: f64, eps: f64, beta: f64) -> Self {
        let half = n / 2;
        let nf = n as f64;
        let points = (0..=n)
            .map(|i| {
                if i == n {
                    1.0
                } else if i <= half {
                    lambda * 2.0 * i as f64 / nf
                } else {
                    1.0 - 2.0 * (1.0 - lambda) * (1.0 - i as f64 / nf)
                }
            })
            .collect();
        Self {
            n,
            lambda,
            points,
            sigma,
            eps,
            beta,
        }
    }

    /// Number of cells `N`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Mesh nodes `x_0 = 0 < ... < x_N = 1`.
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Width of cell `i`.
    pub fn width(&self, i: usize) -> f64 {
        self.points[i + 1] - self.points[i]
    }

    pub fn cell(&self, i: usize) -> (f64, f64) {
        (self.points[i], self.points[i + 1])
    }

    pub fn is_fine(&self, i: usize) -> bool {
        i < self.n / 2
    }

    /// Index of the cell containing `x`. Points on an interior node belong
    /// to the cell on their left; values outside `[0, 1]` are clamped.
    pub fn locate(&self, x: f64) -> usize {
        // first i with x <= x_{i+1}
        let nodes = &self.points[1..];
        nodes.partition_point(|&xi| xi < x).min(self.n - 1)
    }
}

/// Subregions of the unit square separated by the transition lines
/// `x = λ_x` and `y = λ_y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    /// `[λ_x, 1] × [λ_y, 1]`: coarse in both directions.
    Omega11,
    /// `[0, λ_x] × [λ_y, 1]`: the layer along `x = 0`.
    Omega12,
    /// `[λ_x, 1] × [0, λ_y]`: the layer along `y = 0`.
    Omega21,
    /// `[0, λ_x] × [0, λ_y]`: the corner layer.
    Omega22,
}

impl Region {
    pub const ALL: [Region; 4] = [
        Region::Omega11,
        Region::Omega12,
        Region::Omega21,
        Region::Omega22,
    ];

    pub fn index(self) -> usize {
        match self {
            Region::Omega11 => 0,
            Region::Omega12 => 1,
            Region::Omega21 => 2,
            Region::Omega22 => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Region::Omega11 => "Omega11",
            Region::Omega12 => "Omega12",
            Region::Omega21 => "Omega21",
            Region::Omega22 => "Omega22",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShishkinMesh2D {
    pub mesh_x: ShishkinMesh1D,
    pub mesh_y: ShishkinMesh1D,
}

pub fn build_mesh_2d(
    n: usize,
    sigma: f64,
    eps: f64,
    beta1: f64,
    beta2: f64,
) -> Result<ShishkinMesh2D> {
    Ok(ShishkinMesh2D {
        mesh_x: build_mesh_1d(n, sigma, eps, beta1)?,
        mesh_y: build_mesh_1d(n, sigma, eps, beta2)?,
    })
}

pub fn build_mesh_2d_clamped(
    n: usize,
    sigma: f64,
    eps: f64,
    beta1: f64,
    beta2: f64,
) -> Result<ShishkinMesh2D> {
    Ok(ShishkinMesh2D {
        mesh_x: build_mesh_1d_clamped(n, sigma, eps, beta1)?,
        mesh_y: build_mesh_1d_clamped(n, sigma, eps, beta2)?,
    })
}

impl ShishkinMesh2D {
    pub fn n(&self) -> usize {
        self.mesh_x.n()
    }

    pub fn cell_count(&self) -> usize {
        self.mesh_x.n() * self.mesh_y.n()
    }

    pub fn node_count(&self) -> usize {
        (self.mesh_x.n() + 1) * (self.mesh_y.n() + 1)
    }

    /// Region of cell `(i, j)` (zero-based).
    pub fn region(&self, i: usize, j: usize) -> Region {
        match (self.mesh_x.is_fine(i), self.mesh_y.is_fine(j)) {
            (false, false) => Region::Omega11,
            (true, false) => Region::Omega12,
            (false, true) => Region::Omega21,
            (true, true) => Region::Omega22,
        }
    }

    /// Area of a region.
    pub fn measure(&self, region: Region) -> f64 {
        let lx = self.mesh_x.lambda();
        let ly = self.mesh_y.lambda();
        match region {
            Region::Omega11 => (1.0 - lx) * (1.0 - ly),
            Region::Omega12 => lx * (1.0 - ly),
            Region::Omega21 => (1.0 - lx) * ly,
            Region::Omega22 => lx * ly,
        }
    }

    pub fn locate(&self, x: f64, y: f64) -> (usize, usize) {
        (self.mesh_x.locate(x), self.mesh_y.locate(y))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn quarter_transition_mesh() {
        let n = 4;
        let (sigma, beta) = (4.5, 1.0);
        let eps = 0.25 * beta / (sigma * (n as f64).ln());
        let m = build_mesh_1d(n, sigma, eps, beta).unwrap();
        assert_relative_eq!(m.lambda(), 0.25, max_relative = 1e-15);
        for (a, b) in m.points().iter().zip(&[0.0, 0.125, 0.25, 0.625, 1.0]) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn transition_point_value() {
        let m = build_mesh_1d(16, 4.5, 1e-6, 2.0).unwrap();
        assert_relative_eq!(m.lambda(), 2.25e-6 * 16f64.ln(), max_relative = 1e-15);
        assert_relative_eq!(m.lambda(), 6.238324625e-6, max_relative = 1e-9);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            build_mesh_1d(5, 4.5, 1e-6, 1.0),
            Err(Error::InvalidCellCount { n: 5 })
        );
        assert_eq!(
            build_mesh_1d(2, 4.5, 1e-6, 1.0),
            Err(Error::InvalidCellCount { n: 2 })
        );
        assert!(matches!(
            build_mesh_1d(8, 4.5, 0.1, 1.0),
            Err(Error::InadmissibleEps { .. })
        ));
        let clamped = build_mesh_1d_clamped(8, 4.5, 0.1, 1.0).unwrap();
        assert_eq!(clamped.lambda(), 0.5);
        for i in 0..8 {
            assert_relative_eq!(clamped.width(i), 0.125, max_relative = 1e-14);
        }
    }

    #[test]
    fn regions_and_counts() {
        let m = build_mesh_2d(8, 4.5, 1e-4, 2.0, 3.0).unwrap();
        assert_eq!(m.cell_count(), 64);
        assert_eq!(m.node_count(), 81);
        // one-based indices i, j > N/2  <=>  zero-based i, j >= N/2
        assert_eq!(m.region(4, 4), Region::Omega11);
        assert_eq!(m.region(7, 7), Region::Omega11);
        assert_eq!(m.region(0, 0), Region::Omega22);
        assert_eq!(m.region(3, 3), Region::Omega22);
        assert_eq!(m.region(3, 4), Region::Omega12);
        assert_eq!(m.region(4, 3), Region::Omega21);
        let lx = m.mesh_x.lambda();
        let ly = m.mesh_y.lambda();
        assert_relative_eq!(m.measure(Region::Omega12), lx * (1.0 - ly));
        let total: f64 = Region::ALL.iter().map(|&r| m.measure(r)).sum();
        assert_relative_eq!(total, 1.0, max_relative = 1e-15);
    }

    #[test]
    fn locate_prefers_left_cell() {
        let m = build_mesh_1d(8, 4.5, 1e-3, 1.0).unwrap();
        assert_eq!(m.locate(0.0), 0);
        assert_eq!(m.locate(1.0), 7);
        assert_eq!(m.locate(m.points()[4]), 3);
        assert_eq!(m.locate(0.5 * (m.points()[5] + m.points()[6])), 5);
    }
}
