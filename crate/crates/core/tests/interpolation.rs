use shishkin_core::interp::{
    gl_interpolate, identity_discrepancy, remainder_r, vec_interpolate, VecInterpolator,
};
use shishkin_core::mesh::build_mesh_2d;
use shishkin_core::polyquad::{gauss_legendre_rule, legendre};
use shishkin_core::space::{Boundary, FeSpace};

fn space(p: usize, n: usize) -> FeSpace {
    FeSpace::with_boundary(
        build_mesh_2d(n, 4.5, 1e-3, 2.0, 3.0).unwrap(),
        p,
        Boundary::Free,
    )
    .unwrap()
}

fn g(x: f64, y: f64) -> f64 {
    (x + 2.0 * y).sin() * x.exp() + (-5.0 * x).exp() * y
}

#[test]
fn edge_and_cell_moments_are_preserved() {
    let p = 3;
    let sp = space(p, 8);
    let pi = vec_interpolate(g, &sp).unwrap();
    let rule = gauss_legendre_rule(20).unwrap();
    let mx = &sp.mesh().mesh_x;
    let my = &sp.mesh().mesh_y;
    for j in 0..8 {
        let (ya, yb) = my.cell(j);
        for i in 0..8 {
            let (xa, xb) = mx.cell(i);
            let map = |s: f64, t: f64| {
                (
                    xa + 0.5 * (s + 1.0) * (xb - xa),
                    ya + 0.5 * (t + 1.0) * (yb - ya),
                )
            };
            let diff = |s: f64, t: f64| {
                let (x, y) = map(s, t);
                pi.eval_in_cell(i, j, s, t).0 - g(x, y)
            };
            for (s, t) in [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)] {
                assert!(diff(s, t).abs() < 1e-12);
            }
            for k in 0..p - 1 {
                let edges = [
                    rule.integrate(-1.0, 1.0, |r| diff(r, -1.0) * legendre(k, r)),
                    rule.integrate(-1.0, 1.0, |r| diff(1.0, r) * legendre(k, r)),
                    rule.integrate(-1.0, 1.0, |r| diff(r, 1.0) * legendre(k, r)),
                    rule.integrate(-1.0, 1.0, |r| diff(-1.0, r) * legendre(k, r)),
                ];
                for e in edges {
                    assert!(e.abs() < 1e-10, "cell ({i},{j}) k={k}: {e:e}");
                }
                for l in 0..p - 1 {
                    let cell = rule.integrate(-1.0, 1.0, |t| {
                        rule.integrate(-1.0, 1.0, |s| diff(s, t) * legendre(k, s)) * legendre(l, t)
                    });
                    assert!(cell.abs() < 1e-10, "cell ({i},{j}) ({k},{l}): {cell:e}");
                }
            }
        }
    }
}

#[test]
fn interpolants_are_projections() {
    for p in [2, 3, 5] {
        let sp = space(p, 4);
        let pi = vec_interpolate(g, &sp).unwrap();
        let again = vec_interpolate(|x, y| pi.eval(x, y), &sp).unwrap();
        let gl = gl_interpolate(g, &sp);
        let gl_again = gl_interpolate(|x, y| gl.eval(x, y), &sp);
        for k in 0..sp.n_dofs() {
            assert!((pi.coeffs[k] - again.coeffs[k]).abs() < 1e-12, "p={p}");
            assert!((gl.coeffs[k] - gl_again.coeffs[k]).abs() < 1e-12, "p={p}");
        }
    }
}

#[test]
fn shared_edges_agree_between_neighbours() {
    let p = 4;
    let sp = space(p, 4);
    let interp = VecInterpolator::new(p).unwrap();
    let mx = &sp.mesh().mesh_x;
    let my = &sp.mesh().mesh_y;
    let local = |i: usize, j: usize| {
        let (xa, xb) = mx.cell(i);
        let (ya, yb) = my.cell(j);
        interp.apply_reference(|s, t| {
            g(
                xa + 0.5 * (s + 1.0) * (xb - xa),
                ya + 0.5 * (t + 1.0) * (yb - ya),
            )
        })
    };
    let n = p + 1;
    for j in 0..4 {
        for i in 0..3 {
            let (left, right) = (local(i, j), local(i + 1, j));
            for b in 0..n {
                assert!((left[b * n + p] - right[b * n]).abs() < 1e-12);
            }
        }
    }
    for j in 0..3 {
        for i in 0..4 {
            let (low, high) = (local(i, j), local(i, j + 1));
            for a in 0..n {
                assert!((low[p * n + a] - high[a]).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn sup_norm_stability() {
    let sp = space(3, 8);
    let pi = vec_interpolate(g, &sp).unwrap();
    let gmax = (0..=100)
        .flat_map(|a| (0..=100).map(move |b| g(a as f64 / 100.0, b as f64 / 100.0).abs()))
        .fold(0.0f64, f64::max);
    let pimax = pi.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    assert!(pimax <= 3.0 * gmax, "{pimax} vs {gmax}");
}

#[test]
fn projection_identity_on_smooth_functions() {
    let funcs: [fn(f64, f64) -> f64; 3] = [
        |x, y| (x * y).exp(),
        |x, y| (3.0 * x).cos() * (1.0 + y * y),
        |x, y| 1.0 / (1.0 + x + y),
    ];
    for n in [4, 8] {
        let (sp, sp1) = (space(3, n), space(4, n));
        for f in funcs {
            let d = identity_discrepancy(f, &sp, &sp1).unwrap();
            assert!(d.projection <= 1e-11 && d.splitting <= 1e-11, "{d:?}");
        }
    }
}

#[test]
fn remainder_vanishes_for_q_p_data() {
    let (sp, sp1) = (space(3, 4), space(4, 4));
    let r = remainder_r(|x, y| x.powi(3) * y.powi(2) - x * y, &sp, &sp1).unwrap();
    assert!(r.coeffs.iter().all(|c| c.abs() < 1e-12));
}
