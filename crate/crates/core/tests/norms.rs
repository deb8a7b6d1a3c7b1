use approx::assert_relative_eq;
use shishkin_core::mesh::build_mesh_2d;
use shishkin_core::norms::{error_between, error_vs_exact, fitted_order, observed_order};
use shishkin_core::space::{FeFunction, FeSpace, FnField, Zero};

#[test]
fn polynomial_bubble_norms() {
    // u = x(1-x)y(1-y): |u|_0² = 1/900, |∇u|_0² = 1/45.
    let space = FeSpace::new(build_mesh_2d(8, 4.5, 1e-4, 2.0, 3.0).unwrap(), 2).unwrap();
    let u = space.nodal_project(|x, y| x * (1.0 - x) * y * (1.0 - y));
    let r = error_vs_exact(&u, &Zero, 1.0, 5).unwrap();
    assert_relative_eq!(r.l2 * r.l2, 1.0 / 900.0, max_relative = 1e-12);
    assert_relative_eq!(r.h1_semi * r.h1_semi, 1.0 / 45.0, max_relative = 1e-12);
    assert_relative_eq!(
        r.energy * r.energy,
        1.0 / 900.0 + 1.0 / 45.0,
        max_relative = 1e-12
    );
    let parts: f64 = r.regions.iter().map(|g| g.l2_sq).sum();
    assert_relative_eq!(parts, 1.0 / 900.0, max_relative = 1e-12);
}

#[test]
fn discrete_difference_matches_exact_field() {
    let space = FeSpace::new(build_mesh_2d(8, 4.5, 1e-4, 2.0, 3.0).unwrap(), 3).unwrap();
    let u = space.nodal_project(|x, y| x * y * (1.0 - x) * (1.0 - y) * (1.0 + x));
    let zero = FeFunction::zero(&space);
    let field = FnField {
        value: |x: f64, y: f64| u.eval(x, y),
        gradient: |x: f64, y: f64| u.eval_grad(x, y),
    };
    let a = error_between(&u, &zero, 1e-3).unwrap();
    let b = error_vs_exact(&zero, &field, 1e-3, 6).unwrap();
    assert_relative_eq!(a.energy, b.energy, max_relative = 1e-12);
}

#[test]
fn adjusted_rates_of_model_error() {
    let ns = [8usize, 16, 32];
    let errors: Vec<f64> = ns
        .iter()
        .map(|&n| ((n as f64).ln() / n as f64).powi(4))
        .collect();
    for r in observed_order(&errors, &ns, true).unwrap() {
        assert_relative_eq!(r, 4.0, max_relative = 1e-12);
    }
    assert_relative_eq!(
        fitted_order(&errors, &ns, true).unwrap(),
        4.0,
        max_relative = 1e-12
    );
}
