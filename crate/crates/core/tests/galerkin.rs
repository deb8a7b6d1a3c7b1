use rand::{Rng, SeedableRng};
use shishkin_core::galerkin::{assemble, bilinear_form, default_quad_order, load_functional};
use shishkin_core::mesh::build_mesh_2d;
use shishkin_core::norms::error_between;
use shishkin_core::problem::{make_manufactured_problem, ConstantCoefficients};
use shishkin_core::space::{FeFunction, FeSpace};

fn random_function<'s>(space: &'s FeSpace, rng: &mut impl Rng) -> FeFunction<'s> {
    FeFunction::new(
        space,
        (0..space.n_dofs())
            .map(|_| rng.gen_range(-1.0..1.0))
            .collect(),
    )
}

#[test]
fn galerkin_orthogonality() {
    let eps = 1e-6;
    let prob = make_manufactured_problem(eps, 3);
    let space = FeSpace::new(build_mesh_2d(8, 4.5, eps, 2.0, 3.0).unwrap(), 3).unwrap();
    let q = default_quad_order(3);
    let uh = assemble(&space, &prob, q).unwrap().solve().unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let v = random_function(&space, &mut rng);
        let lhs = bilinear_form(&prob, &uh, &v, q).unwrap();
        let rhs = load_functional(&prob, &v, q).unwrap();
        assert!(
            (lhs - rhs).abs() <= 1e-7 * rhs.abs().max(1.0),
            "{lhs} vs {rhs}"
        );
    }
}

#[test]
fn assembled_matrix_matches_bilinear_form() {
    let eps = 1e-4;
    let prob = make_manufactured_problem(eps, 3);
    let space = FeSpace::new(build_mesh_2d(8, 4.5, eps, 2.0, 3.0).unwrap(), 3).unwrap();
    let q = default_quad_order(3);
    let system = assemble(&space, &prob, q).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        let v = random_function(&space, &mut rng);
        let w = random_function(&space, &mut rng);
        let from_matrix = system.matrix.bilinear(&w.coeffs, &v.coeffs);
        let direct = bilinear_form(&prob, &v, &w, q).unwrap();
        assert!(
            (from_matrix - direct).abs() <= 1e-12 * direct.abs().max(1.0),
            "{from_matrix} vs {direct}"
        );
    }
}

#[test]
fn coercive_in_energy_norm() {
    let eps = 1e-6;
    let prob = make_manufactured_problem(eps, 3);
    let space = FeSpace::new(build_mesh_2d(8, 4.5, eps, 2.0, 3.0).unwrap(), 3).unwrap();
    let zero = FeFunction::zero(&space);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    for _ in 0..5 {
        let v = random_function(&space, &mut rng);
        let a = bilinear_form(&prob, &v, &v, 4).unwrap();
        let e = error_between(&v, &zero, eps).unwrap().energy;
        assert!(
            a >= prob.gamma.min(1.0) * e * e * (1.0 - 1e-10),
            "{a} < {}",
            e * e
        );
    }
}

#[test]
fn quadrature_order_stability_on_smooth_data() {
    let eps = 1e-2;
    let prob = ConstantCoefficients {
        eps,
        b: [2.0, 3.0],
        c: 1.0,
        f: |x: f64, y: f64| (x + 2.0 * y).sin() + x * y.exp(),
    };
    let space = FeSpace::new(build_mesh_2d(8, 4.5, eps, 2.0, 3.0).unwrap(), 3).unwrap();
    let lo = assemble(&space, &prob, 5).unwrap().solve().unwrap();
    let hi = assemble(&space, &prob, 7).unwrap().solve().unwrap();
    let zero = FeFunction::zero(&space);
    let e_lo = error_between(&lo, &zero, eps).unwrap().energy;
    let e_hi = error_between(&hi, &zero, eps).unwrap().energy;
    assert!((e_lo - e_hi).abs() < 1e-8 * e_hi, "{e_lo} vs {e_hi}");
}

#[test]
fn solution_is_deterministic() {
    let eps = 1e-6;
    let prob = make_manufactured_problem(eps, 3);
    let space = FeSpace::new(build_mesh_2d(8, 4.5, eps, 2.0, 3.0).unwrap(), 3).unwrap();
    let a = assemble(&space, &prob, 6).unwrap().solve().unwrap();
    let b = assemble(&space, &prob, 6).unwrap().solve().unwrap();
    assert_eq!(a.coeffs, b.coeffs);
}
