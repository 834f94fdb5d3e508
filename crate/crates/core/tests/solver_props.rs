use proptest::prelude::*;

use stefan_core::model::{BoundaryCondition, LatentHeatLaw, MaterialParams, RawSpec};
use stefan_core::solver::{self, f_dirichlet, f_general, f_general_prime, FrontEquation, RootMethod};
use stefan_core::tables;
use stefan_core::verify::{bisection_root, bisection_xi, front_constant, ShapeKind};
use stefan_core::{Error, ProblemSpec};

fn spec(material: MaterialParams, beta: f64, delta: f64, bc: BoundaryCondition) -> ProblemSpec {
    RawSpec::new(material, LatentHeatLaw::new(beta, delta), bc).validate().unwrap()
}

const UNIT: MaterialParams = MaterialParams {
    a: 1.0,
    k: 1.0,
    gamma: 1.0,
};

/// (β, δ) pairs satisfying β ≥ δ and β + δ + 1 > 0.
fn law() -> impl Strategy<Value = (f64, f64)> {
    (-0.9..3.0f64, 0.0..3.0f64)
        .prop_map(|(delta, gap)| (delta + gap, delta))
        .prop_filter("positive exponent sum", |(b, d)| b + d + 1.0 > 0.05)
}

fn material() -> impl Strategy<Value = MaterialParams> {
    (0.2..5.0f64, 0.2..5.0f64, 0.2..5.0f64).prop_map(|(a, k, gamma)| MaterialParams { a, k, gamma })
}

fn boundary() -> impl Strategy<Value = BoundaryCondition> {
    prop_oneof![
        (0.05..2.0f64).prop_map(|u0| BoundaryCondition::Dirichlet { u0 }),
        (0.05..2.0f64).prop_map(|q0| BoundaryCondition::Neumann { q0 }),
        (0.1..100.0f64, 0.05..2.0f64).prop_map(|(h0, u_inf)| BoundaryCondition::Robin { h0, u_inf }),
        (0.0..3.0f64, 0.1..100.0f64, 0.05..2.0f64)
            .prop_map(|(lambda, h0, u_inf)| BoundaryCondition::General { lambda, h0, u_inf }),
    ]
}

#[test]
fn newton_matches_bisection_on_reference_grids() {
    for s in tables::all_configurations().unwrap() {
        let root = solver::solve(&s).unwrap();
        let oracle = bisection_xi(&s, 1e-14).unwrap();
        assert!((root.xi - oracle).abs() <= 1e-9, "{s:?}: {} vs {oracle}", root.xi);
        assert!(root.iterations <= 30, "{s:?}: {} iterations", root.iterations);
        assert!(root.residual <= solver::RESIDUAL_LIMIT);
        assert!(root.bracket.0 < root.xi && root.xi < root.bracket.1);
    }
}

#[test]
fn reference_examples() {
    let n = |q| solver::solve(&tables::neumann_spec(0.0, 0.0, q).unwrap()).unwrap().xi;
    assert!((n(0.1) - 0.0990).abs() < 5e-5);
    // root of z = 0.5 e^{−z²}
    let xi = n(0.5);
    assert!((xi - 0.5 * (-xi * xi).exp()).abs() < 1e-14);
    assert!((xi - 0.4194).abs() < 5e-5);
    let r = solver::solve(&tables::robin_spec(0.0, 0.0, 0.5, 1.0).unwrap()).unwrap();
    assert!((r.xi - 0.2926).abs() < 5e-5);
    assert_eq!(r.method.name(), "newton");
    assert_eq!(RootMethod::BisectionFallback.name(), "bisection-fallback");
}

#[test]
fn bisection_oracle_examples() {
    let s = tables::neumann_spec(0.0, 0.0, 0.2).unwrap();
    let xi = bisection_root(front_constant(&s), ShapeKind::Neumann, &s, 1e-12, 1.0, 1e-13).unwrap();
    assert!((xi - 0.1927).abs() < 5e-5);
    let d = tables::dirichlet_limit_spec(0.0, 0.0, 0.5).unwrap();
    let xi = bisection_root(front_constant(&d), ShapeKind::Dirichlet, &d, 1e-12, 1.0, 1e-13).unwrap();
    assert!((xi - 0.4648).abs() < 5e-5);
}

#[test]
fn classical_flux_shape() {
    // λ = 0, α = 0, 2ah0/k = 1: f = e^{−z²}
    let s = spec(UNIT, 0.0, 0.0, BoundaryCondition::General { lambda: 0.0, h0: 0.5, u_inf: 1.0 });
    assert!((f_general(1.0, &s).unwrap() - (-1f64).exp()).abs() < 1e-15);
    assert!((f_general(1.0, &s).unwrap() - 0.367_879).abs() < 1e-6);
    assert!((f_general_prime(1.0, &s).unwrap() + 2.0 * (-1f64).exp()).abs() < 1e-15);
    assert!((f_general_prime(1.0, &s).unwrap() + 0.735_759).abs() < 1e-6);
}

#[test]
fn dirichlet_shape_domain() {
    let law = LatentHeatLaw::new(0.0, 0.0);
    assert!(matches!(f_dirichlet(0.0, &law), Err(Error::Domain(_))));
    assert!(matches!(f_dirichlet(-1.0, &law), Err(Error::Domain(_))));
}

#[test]
fn iteration_cap_is_reported() {
    let s = tables::robin_spec(1.0, 3.0, 0.5, 1.0).unwrap();
    assert!(matches!(
        solver::solve_xi(&s, 1e-10, 1),
        Err(Error::NonConvergence { .. })
    ));
}

proptest! {
    #[test]
    fn root_satisfies_equation(m in material(), (beta, delta) in law(), bc in boundary()) {
        let s = spec(m, beta, delta, bc);
        let root = solver::solve(&s).unwrap();
        prop_assert!(root.xi > 0.0);
        let eq = FrontEquation::for_spec(&s);
        prop_assert!(eq.scaled_residual(root.xi).unwrap() <= solver::RESIDUAL_LIMIT);
        // single sign change
        prop_assert!(eq.value(root.xi * 0.9).unwrap() > 0.0);
        prop_assert!(eq.value(root.xi * 1.1).unwrap() < 0.0);
    }

    #[test]
    fn general_shape_derivative(m in material(), (beta, delta) in law(),
                                lambda in 0.0..3.0f64, h0 in 0.1..50.0f64, z in 0.05..2.5f64) {
        let s = spec(m, beta, delta, BoundaryCondition::General { lambda, h0, u_inf: 1.0 });
        let h = 1e-6;
        let fd = (f_general(z + h, &s).unwrap() - f_general(z - h, &s).unwrap()) / (2.0 * h);
        let d = f_general_prime(z, &s).unwrap();
        prop_assert!(d < 0.0);
        prop_assert!(((fd - d) / d).abs() <= 1e-7, "{} vs {}", fd, d);
        prop_assert!(f_general(z, &s).unwrap() > 0.0);
    }

    #[test]
    fn dirichlet_shape_decreases(alpha in 0.0..4.0f64, z in 0.05..3.0f64) {
        let law = LatentHeatLaw::new(alpha, 0.0);
        prop_assert!(f_dirichlet(1.0, &law).unwrap() > f_dirichlet(2.0, &law).unwrap());
        prop_assert!(f_dirichlet(z, &law).unwrap() > f_dirichlet(z * 1.01, &law).unwrap());
    }

    #[test]
    fn increasing_in_flux(m in material(), (beta, delta) in law(), q in 0.05..2.0f64, f in 1.01..3.0f64) {
        let lo = solver::solve(&spec(m, beta, delta, BoundaryCondition::Neumann { q0: q })).unwrap().xi;
        let hi = solver::solve(&spec(m, beta, delta, BoundaryCondition::Neumann { q0: q * f })).unwrap().xi;
        prop_assert!(hi > lo);
    }

    #[test]
    fn increasing_in_temperature_and_biot(m in material(), (beta, delta) in law(),
                                          h0 in 0.1..50.0f64, u in 0.05..2.0f64, f in 1.01..3.0f64) {
        let xi = |h0: f64, u_inf: f64| solver::solve(&spec(m, beta, delta, BoundaryCondition::Robin { h0, u_inf })).unwrap().xi;
        let base = xi(h0, u);
        prop_assert!(xi(h0, u * f) > base);
        prop_assert!(xi(h0 * f, u) > base);
    }
}
