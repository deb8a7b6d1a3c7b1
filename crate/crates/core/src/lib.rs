//! Higher-order Galerkin finite elements for the singularly perturbed
//! convection-diffusion problem
//!
//! ```text
//!   -ε Δu - b·∇u + c u = f   in (0,1)²,    u = 0 on the boundary,
//! ```
//!
//! discretised with tensor-product `Q_p` elements on Shishkin meshes.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only numerics:
//!
//! * [`polyquad`]: Legendre polynomials, Gauss-Legendre / Gauss-Lobatto rules,
//!   Lagrange bases on Gauss-Lobatto points.
//! * [`mesh`]: 1D and tensor-product 2D Shishkin meshes.
//! * [`problem`]: the manufactured layer problem with its solution decomposition.
//! * [`space`]: nodal `Q_p` spaces and finite element functions.
//! * [`banded`], [`galerkin`]: banded LU and the Galerkin system.
//! * [`interp`]: Gauss-Lobatto and vertex-edge-cell interpolation.
//! * [`hier1d`]: the 1D Legendre hierarchical representation.
//! * [`norms`]: energy/L2 error measurement and observed orders.
//! * [`study`]: one (p, N, ε) case of a convergence study.
#![no_std]

extern crate alloc;

mod dense;
mod error;
mod math;

pub mod banded;
pub mod galerkin;
pub mod hier1d;
pub mod interp;
pub mod mesh;
pub mod norms;
pub mod polyquad;
pub mod problem;
pub mod space;
pub mod study;

pub use error::{Error, Result};
