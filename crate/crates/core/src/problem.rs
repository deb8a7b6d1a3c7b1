//! Manufactured layer problems with a closed-form solution decomposition.
//!
//! The 2D solution is `u(x, y) = ξ(x) η(y)` with
//!
//! ```text
//!   ξ(x) = cos(πx/2) - (e^{-β₁x/ε} - e^{-β₁/ε}) / (1 - e^{-β₁/ε})
//! ```
//!
//! and `η` the same profile with `β₂`. Splitting each factor into a smooth
//! part `s = cos(πx/2) + e^{-β/ε}/(1 - e^{-β/ε})` and a layer part
//! `e = -e^{-βx/ε}/(1 - e^{-β/ε})` gives the decomposition
//! `u = S + E12 + E21 + E22` with `S = s_x s_y`, `E12 = e_x s_y`,
//! `E21 = s_x e_y` and `E22 = e_x e_y`.
//!
//! `b = (β₁, β₂)` is constant, so each layer factor is annihilated by its
//! 1D operator `-ε d² - β d` and the forcing is evaluated without the
//! `O(1/ε)` cancellation a literal application of the operator would suffer.

use core::f64::consts::FRAC_PI_2;
use core::str::FromStr;

use crate::math::{cos, exp, powi};
use crate::{Error, Result};

/// Solution component of the decomposition `u = S + E12 + E21 + E22`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Part {
    /// Regular part.
    S,
    /// Boundary layer along `x = 0`.
    E12,
    /// Boundary layer along `y = 0`.
    E21,
    /// Corner layer at the origin.
    E22,
}

impl Part {
    pub const ALL: [Part; 4] = [Part::S, Part::E12, Part::E21, Part::E22];
}

/// Built-in problem identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemId {
    Layer2d,
    Layer1d,
}

impl ProblemId {
    pub fn as_str(self) -> &'static str {
        match self {
            ProblemId::Layer2d => "layer2d",
            ProblemId::Layer1d => "layer1d",
        }
    }
}

impl FromStr for ProblemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "layer2d" => Ok(ProblemId::Layer2d),
            "layer1d" => Ok(ProblemId::Layer1d),
            _ => Err(Error::InvalidArgument(
                "unknown problem id (expected layer2d or layer1d)",
            )),
        }
    }
}

/// One factor `ξ = s + e` of the product solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerProfile {
    eps: f64,
    beta: f64,
    /// `1 / (1 - e^{-β/ε})`
    scale: f64,
    /// `e^{-β/ε} / (1 - e^{-β/ε})`
    offset: f64,
}

impl LayerProfile {
    pub fn new(eps: f64, beta: f64) -> Self {
        let tail = exp(-beta / eps);
        let scale = 1.0 / (1.0 - tail);
        Self {
            eps,
            beta,
            scale,
            offset: tail * scale,
        }
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// k-th derivative of the smooth part `cos(πx/2) + offset`.
    pub fn smooth(&self, k: usize, x: f64) -> f64 {
        let d = powi(FRAC_PI_2, k as i32) * cos(FRAC_PI_2 * x + k as f64 * FRAC_PI_2);
        if k == 0 {
            d + self.offset
        } else {
            d
        }
    }

    /// k-th derivative of the layer part `-e^{-βx/ε} / (1 - e^{-β/ε})`.
    pub fn layer(&self, k: usize, x: f64) -> f64 {
        let rate = self.beta / self.eps;
        let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
        sign * powi(rate, k as i32) * exp(-rate * x) * self.scale
    }

    /// k-th derivative of the full profile.
    pub fn value(&self, k: usize, x: f64) -> f64 {
        self.smooth(k, x) + self.layer(k, x)
    }

    /// `-ε ξ'' - b ξ'` evaluated without cancellation.
    pub fn operator(&self, b: f64, x: f64) -> f64 {
        let smooth = -self.eps * self.smooth(2, x) - b * self.smooth(1, x);
        // -ε e'' - b e' = (β/ε)(b - β) e
        let layer = self.beta / self.eps * (b - self.beta) * self.layer(0, x);
        smooth + layer
    }
}

/// The four-part decomposition of the 2D solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecomposedSolution {
    pub x: LayerProfile,
    pub y: LayerProfile,
    max_order: usize,
}

impl DecomposedSolution {
    /// Largest total derivative order `dx + dy` served by [`Self::eval_part`].
    pub fn max_order(&self) -> usize {
        self.max_order
    }

    /// Mixed partial `∂^{dx+dy} / ∂x^dx ∂y^dy` of one component.
    pub fn eval_part(&self, part: Part, dx: usize, dy: usize, x: f64, y: f64) -> Result<f64> {
        if dx + dy > self.max_order {
            return Err(Error::DerivativeOrder {
                requested: dx + dy,
                max: self.max_order,
            });
        }
        Ok(self.part_unchecked(part, dx, dy, x, y))
    }

    fn part_unchecked(&self, part: Part, dx: usize, dy: usize, x: f64, y: f64) -> f64 {
        match part {
            Part::S => self.x.smooth(dx, x) * self.y.smooth(dy, y),
            Part::E12 => self.x.layer(dx, x) * self.y.smooth(dy, y),
            Part::E21 => self.x.smooth(dx, x) * self.y.layer(dy, y),
            Part::E22 => self.x.layer(dx, x) * self.y.layer(dy, y),
        }
    }

    pub fn value(&self, x: f64, y: f64) -> f64 {
        self.x.value(0, x) * self.y.value(0, y)
    }

    pub fn gradient(&self, x: f64, y: f64) -> [f64; 2] {
        let (xi, eta) = (self.x.value(0, x), self.y.value(0, y));
        [self.x.value(1, x) * eta, xi * self.y.value(1, y)]
    }

    /// Mixed partial of the full solution.
    pub fn derivative(&self, dx: usize, dy: usize, x: f64, y: f64) -> f64 {
        self.x.value(dx, x) * self.y.value(dy, y)
    }

    /// A single component viewed as a field.
    pub fn component(&self, part: Part) -> Component {
        Component { sol: *self, part }
    }
}

/// One component of a [`DecomposedSolution`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Component {
    sol: DecomposedSolution,
    part: Part,
}

impl Component {
    pub fn value(&self, x: f64, y: f64) -> f64 {
        self.sol.part_unchecked(self.part, 0, 0, x, y)
    }

    pub fn gradient(&self, x: f64, y: f64) -> [f64; 2] {
        [
            self.sol.part_unchecked(self.part, 1, 0, x, y),
            self.sol.part_unchecked(self.part, 0, 1, x, y),
        ]
    }
}

/// Coefficients of `-εΔu - b·∇u + c u = f`.
pub trait ConvectionDiffusion {
    fn eps(&self) -> f64;
    fn convection(&self, x: f64, y: f64) -> [f64; 2];
    fn reaction(&self, x: f64, y: f64) -> f64;
    fn forcing(&self, x: f64, y: f64) -> f64;
}

/// Constant `ε`, `b`, `c` with an arbitrary forcing closure.
#[derive(Debug, Clone, Copy)]
pub struct ConstantCoefficients<F> {
    pub eps: f64,
    pub b: [f64; 2],
    pub c: f64,
    pub f: F,
}

impl<F: Fn(f64, f64) -> f64> ConvectionDiffusion for ConstantCoefficients<F> {
    fn eps(&self) -> f64 {
        self.eps
    }

    fn convection(&self, _x: f64, _y: f64) -> [f64; 2] {
        self.b
    }

    fn reaction(&self, _x: f64, _y: f64) -> f64 {
        self.c
    }

    fn forcing(&self, x: f64, y: f64) -> f64 {
        (self.f)(x, y)
    }
}

/// `-εΔu - b·∇u + c u = f` on the unit square with `u = 0` on the boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerProblem {
    pub eps: f64,
    pub b: [f64; 2],
    pub c: f64,
    pub gamma: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub exact: DecomposedSolution,
}

/// The manufactured 2D problem: `b = (2, 3)`, `c = 1`, `γ = 1`.
/// Derivatives of the solution parts are served up to order `p + 2`.
pub fn make_manufactured_problem(eps: f64, p: usize) -> LayerProblem {
    let (beta1, beta2) = (2.0, 3.0);
    LayerProblem {
        eps,
        b: [beta1, beta2],
        c: 1.0,
        gamma: 1.0,
        beta1,
        beta2,
        exact: DecomposedSolution {
            x: LayerProfile::new(eps, beta1),
            y: LayerProfile::new(eps, beta2),
            max_order: p + 2,
        },
    }
}

impl LayerProblem {
    /// `c + div(b)/2`, bounded below by `γ` for a coercive problem.
    pub fn coercivity(&self, x: f64, y: f64) -> f64 {
        self.reaction(x, y)
    }
}

impl ConvectionDiffusion for LayerProblem {
    fn eps(&self) -> f64 {
        self.eps
    }

    fn convection(&self, _x: f64, _y: f64) -> [f64; 2] {
        self.b
    }

    fn reaction(&self, _x: f64, _y: f64) -> f64 {
        self.c
    }

    fn forcing(&self, x: f64, y: f64) -> f64 {
        let sx = &self.exact.x;
        let sy = &self.exact.y;
        let (xi, eta) = (sx.value(0, x), sy.value(0, y));
        eta * sx.operator(self.b[0], x) + xi * sy.operator(self.b[1], y) + self.c * xi * eta
    }
}

/// 1D analogue `-ε u'' - b u' + c u = f` on `(0, 1)` with `u = ξ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerProblem1D {
    pub eps: f64,
    pub b: f64,
    pub c: f64,
    pub beta: f64,
    pub exact: LayerProfile,
}

/// The 1D problem with `b = β = 2`, `c = 1`.
pub fn make_manufactured_problem_1d(eps: f64) -> LayerProblem1D {
    let beta = 2.0;
    LayerProblem1D {
        eps,
        b: beta,
        c: 1.0,
        beta,
        exact: LayerProfile::new(eps, beta),
    }
}

impl LayerProblem1D {
    pub fn forcing(&self, x: f64) -> f64 {
        self.exact.operator(self.b, x) + self.c * self.exact.value(0, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn solution_vanishes_on_boundary() {
        for &eps in &[1.0, 1e-2, 1e-6, 1e-10] {
            let prob = make_manufactured_problem(eps, 3);
            for k in 0..=200 {
                let t = k as f64 / 200.0;
                for (x, y) in [(0.0, t), (1.0, t), (t, 0.0), (t, 1.0)] {
                    assert!(prob.exact.value(x, y).abs() < 1e-12, "eps={eps} ({x},{y})");
                }
            }
        }
    }

    #[test]
    fn corner_layer_at_origin() {
        let eps = 1e-3;
        let prob = make_manufactured_problem(eps, 3);
        let sx = 1.0 / (1.0 - (-2.0f64 / eps).exp());
        let sy = 1.0 / (1.0 - (-3.0f64 / eps).exp());
        let v = prob.exact.eval_part(Part::E22, 0, 0, 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(v, sx * sy, epsilon = 1e-15);
    }

    #[test]
    fn derivative_order_is_capped() {
        let prob = make_manufactured_problem(1e-4, 3);
        assert!(prob.exact.eval_part(Part::S, 3, 2, 0.5, 0.5).is_ok());
        assert_eq!(
            prob.exact.eval_part(Part::S, 3, 3, 0.5, 0.5),
            Err(Error::DerivativeOrder {
                requested: 6,
                max: 5
            })
        );
    }

    #[test]
    fn parts_sum_to_solution() {
        let prob = make_manufactured_problem(1e-2, 3);
        for &(x, y) in &[(0.01, 0.02), (0.3, 0.7), (0.9, 0.005)] {
            let sum: f64 = Part::ALL
                .iter()
                .map(|&part| prob.exact.eval_part(part, 0, 0, x, y).unwrap())
                .sum();
            assert_abs_diff_eq!(sum, prob.exact.value(x, y), epsilon = 1e-15);
        }
    }

    #[test]
    fn problem_ids_parse() {
        assert_eq!("layer2d".parse::<ProblemId>().unwrap(), ProblemId::Layer2d);
        assert_eq!("layer1d".parse::<ProblemId>().unwrap(), ProblemId::Layer1d);
        assert!("bogus".parse::<ProblemId>().is_err());
    }
}
