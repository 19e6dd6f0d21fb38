mod common;

use robin_eigen::oracles;

#[test]
fn interval_anchor() {
    let l = common::interval_eigenvalue(1.0, 1.0);
    assert!((l - 0.740174).abs() < 5e-7, "{l}");
}

#[test]
fn disk_anchor() {
    let l = common::disk_eigenvalue(1.0, 1.0);
    assert!((l.sqrt() - 1.2558).abs() < 5e-5, "{}", l.sqrt());
}

#[test]
fn pi_p_quadrature_matches_closed_form() {
    for p in [1.5, 2.0, 3.0, 4.5] {
        let closed = 2.0 * std::f64::consts::PI / (p * (std::f64::consts::PI / p).sin());
        assert!(common::rel(common::pi_p(p), closed) < 1e-9, "p={p}");
    }
    assert!((common::dirichlet_neumann(1.0, 2.0) - 2.467401).abs() < 5e-7);
}

#[test]
fn library_oracles_agree_with_independent_ones() {
    for r in [0.5, 1.0, 2.0] {
        for alpha in [0.5, 1.0, 5.0, -0.5, -1.0] {
            let a = oracles::interval_robin(r, alpha);
            let b = common::interval_eigenvalue(r, alpha);
            assert!(common::rel(a, b) < 1e-12, "R={r} alpha={alpha}: {a} vs {b}");
        }
    }
    for p in [1.5, 2.0, 3.0] {
        assert!(common::rel(oracles::pi_p(p), common::pi_p(p)) < 1e-9);
    }
    assert!(common::rel(oracles::disk_robin(1.0, 1.0), common::disk_eigenvalue(1.0, 1.0)) < 1e-10);
    for x in [0.3, 1.2558, 2.0] {
        assert!((oracles::bessel_j(0, x) - common::bessel_j(0, x)).abs() < 1e-13);
        assert!((oracles::bessel_j(1, x) - common::bessel_j(1, x)).abs() < 1e-13);
    }
}
