use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use shishkin_core::banded::BandedMatrix;
use shishkin_core::hier1d::{decompose, reconstruct, HierBasis, HierRepresentation};
use shishkin_core::mesh::build_mesh_1d;
use shishkin_core::norms::observed_order;
use shishkin_core::polyquad::LagrangeBasis1D;
use shishkin_core::space::{Boundary, FeSpace1D};

proptest! {
    #[test]
    fn lagrange_partition_of_unity(p in 1usize..=8, t in -1.0f64..1.0) {
        let basis = LagrangeBasis1D::gauss_lobatto(p).unwrap();
        let sum: f64 = basis.values(t).iter().sum();
        let dsum: f64 = basis.derivatives(t).iter().sum();
        prop_assert!((sum - 1.0).abs() < 1e-12);
        prop_assert!(dsum.abs() < 1e-10);
    }

    #[test]
    fn lagrange_derivative_matches_difference_quotient(p in 1usize..=8, t in -0.99f64..0.99, k in 0usize..9) {
        let basis = LagrangeBasis1D::gauss_lobatto(p).unwrap();
        let k = k % (p + 1);
        let h = 1e-6;
        let fd = (basis.values(t + h)[k] - basis.values(t - h)[k]) / (2.0 * h);
        prop_assert!((fd - basis.derivatives(t)[k]).abs() < 1e-5 * (1.0 + fd.abs()));
    }

    #[test]
    fn mesh_is_monotone_and_fine_cells_are_small(n in (2usize..=32).prop_map(|k| 2 * k), log_eps in -10.0f64..-2.0) {
        let eps = 10f64.powf(log_eps);
        let sigma = 4.5;
        if let Ok(mesh) = build_mesh_1d(n, sigma, eps, 2.0) {
            let pts = mesh.points();
            prop_assert_eq!(pts.len(), n + 1);
            prop_assert!(pts.windows(2).all(|w| w[0] < w[1]));
            prop_assert!((pts[n / 2] - mesh.lambda()).abs() < 1e-15);
            prop_assert!(mesh.lambda() <= 0.5);
            prop_assert!(mesh.width(0) <= mesh.width(n - 1) + 1e-15);
        } else {
            prop_assert!(sigma * eps / 2.0 * (n as f64).ln() > 0.5);
        }
    }

    #[test]
    fn banded_solve_matches_dense(n in 3usize..30, kl in 0usize..4, ku in 0usize..4, seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut band = BandedMatrix::zeros(n, kl, ku);
        let mut dense = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if band.in_band(i, j) {
                    let v = rng.gen_range(-1.0..1.0) + if i == j { 4.0 } else { 0.0 };
                    band.set(i, j, v);
                    dense[(i, j)] = v;
                }
            }
        }
        let rhs: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let x = band.factorize().unwrap().solve(&rhs);
        let reference = dense.lu().solve(&DVector::from_vec(rhs)).unwrap();
        for i in 0..n {
            prop_assert!((x[i] - reference[i]).abs() < 1e-10);
        }
    }

    #[test]
    fn hier_round_trip(coeffs in proptest::collection::vec(-1.0f64..1.0, 47)) {
        // p = 3, N = 16: 3 * 16 - 1 = 47 coefficients.
        let basis = HierBasis::new(build_mesh_1d(16, 4.5, 1e-4, 2.0).unwrap(), 3).unwrap();
        let space = FeSpace1D::new(basis.mesh().clone(), 3, Boundary::Dirichlet).unwrap();
        let rep = HierRepresentation::from_slice(16, 3, &coeffs).unwrap();
        let v = reconstruct(&rep, &basis, &space).unwrap();
        let back = decompose(&v, &basis).unwrap();
        prop_assert!(back.max_diff(&rep) < 1e-11);
    }

    #[test]
    fn observed_order_of_power_law(order in 0.5f64..6.0, c in 0.1f64..10.0) {
        let ns = [8usize, 16, 32, 64];
        let errors: Vec<f64> = ns.iter().map(|&n| c * (n as f64).powf(-order)).collect();
        for r in observed_order(&errors, &ns, false).unwrap() {
            prop_assert!((r - order).abs() < 1e-10);
        }
    }
}
