use proptest::prelude::*;

use squeezetrap::dynamics::HamiltonianParams;
use squeezetrap::equilibria::{
    classify, combined_system, pseudopotential_system, solve_linear, solve_multistart, Classification,
    MultistartOptions, QuadraticSystem, StationaryPoint,
};
use squeezetrap::trap::{DriveParams, ModeFrequencies, Particle, TrapGeometry, TrapKind};

fn paul(c4: f64, c6: f64, u0: f64, m: (u32, u32)) -> HamiltonianParams {
    let particle = Particle::new(1.0, 1.0).unwrap();
    let mut g = TrapGeometry::quadrupole(-1.0, 0.0, TrapKind::IdealPaul);
    g.c4 = c4;
    g.c6 = c6;
    let drive = DriveParams::new(u0, 0.2, 1.0).unwrap();
    let f = ModeFrequencies::new(&particle, &g, 0.4, 0.3, 1.0).unwrap();
    HamiltonianParams::new(0.75, m.0, 1, m.1, f, particle, g, drive)
        .unwrap()
        .with_physical_scales(false)
}

fn wide() -> MultistartOptions {
    MultistartOptions {
        lo: -20.0,
        hi: 20.0,
        per_axis: 6,
        ..Default::default()
    }
}

#[test]
fn pseudopotential_roots_are_stationary() {
    let p = paul(-0.01, 1e-4, -0.05, (1, 2));
    let sys = pseudopotential_system(&p);
    let found = solve_multistart(&sys, &wide());
    assert!(!found.points.is_empty());
    assert!(found.converged <= found.starts);
    for pt in &found.points {
        assert!(pt.residual < 1e-10);
    }
}

#[test]
fn combined_hessian_is_state_independent() {
    let particle = Particle::new(1.0, 1.0).unwrap();
    let mut g = TrapGeometry::quadrupole(-1.0, 0.5, TrapKind::Combined);
    g.d = 0.02;
    let drive = DriveParams::new(-0.03, 0.0, 1.0).unwrap();
    let f = ModeFrequencies::derive(&particle, &g, &drive, 1.0).unwrap();
    let p = HamiltonianParams::new(0.25, 2, 0, 1, f, particle, g, drive).unwrap();
    let sys = combined_system(0.0, &p);
    assert!(sys.is_linear());
    let j0 = sys.jacobian(0.0, 0.0);
    let labels: Vec<Classification> = [(0.3, 5.0), (2.0, 0.1), (7.0, 7.0)]
        .iter()
        .map(|&(x, y)| {
            assert_eq!(sys.jacobian(x, y), j0);
            classify(&sys, &StationaryPoint { xi_a: x, xi_r: y, residual: 0.0, admissible: true })
        })
        .collect();
    assert!(labels.windows(2).all(|w| w[0] == w[1]));
    assert_eq!(solve_linear(&sys).len(), 1);
}

#[test]
fn planted_saddle() {
    // gradient of x^2 - y^2 - 2x + 4y, stationary at (1, 2)
    let sys = QuadraticSystem::new([[-2.0, 2.0, 0.0, 0.0, 0.0, 0.0], [4.0, 0.0, -2.0, 0.0, 0.0, 0.0]]);
    let root = solve_multistart(&sys, &MultistartOptions::default());
    assert_eq!(root.points.len(), 1);
    let pt = root.points[0];
    assert!((pt.xi_a - 1.0).abs() < 1e-14 && (pt.xi_r - 2.0).abs() < 1e-14);
    assert_eq!(classify(&sys, &pt), Classification::Saddle);
    let neg = sys.scaled(-1.0);
    assert_eq!(classify(&neg, &pt), Classification::Saddle);
    let bowl = QuadraticSystem::new([[-2.0, 2.0, 0.0, 0.0, 0.0, 0.0], [-4.0, 0.0, 2.0, 0.0, 0.0, 0.0]]);
    let pt = solve_linear(&bowl)[0];
    assert_eq!(classify(&bowl, &pt), Classification::Minimum);
    assert_eq!(classify(&bowl.scaled(-1.0), &pt), Classification::Maximum);
}

#[test]
fn no_convergent_start_gives_empty_result() {
    // x^2 + y^2 + 1 = 0 has no real root
    let sys = QuadraticSystem::new([[1.0, 0.0, 0.0, 1.0, 0.0, 1.0], [0.0, 1.0, -1.0, 0.0, 0.0, 0.0]]);
    let found = solve_multistart(&sys, &MultistartOptions::default());
    assert!(found.points.is_empty());
    assert_eq!((found.starts, found.converged), (16, 0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn roots_are_scale_covariant(
        c4 in -0.05f64..0.05,
        c6 in -1e-3f64..1e-3,
        u0 in -0.08f64..-0.01,
        factor in 0.01f64..100.0,
        m_a in 0u32..3,
        m_r in 0u32..3,
    ) {
        let sys = pseudopotential_system(&paul(c4, c6, u0, (m_a, m_r)));
        let base = solve_multistart(&sys, &wide());
        let scaled = solve_multistart(&sys.scaled(factor), &wide());
        prop_assert_eq!(base.points.len(), scaled.points.len());
        for (a, b) in base.points.iter().zip(&scaled.points) {
            let tol = 1e-9 * (1.0 + a.xi_a.abs().max(a.xi_r.abs()));
            prop_assert!((a.xi_a - b.xi_a).abs() < tol && (a.xi_r - b.xi_r).abs() < tol);
        }
    }

    #[test]
    fn linear_solution_has_tiny_residual(
        e in prop::array::uniform6(-10.0f64..10.0),
    ) {
        let sys = QuadraticSystem::new([[e[0], e[1], e[2], 0.0, 0.0, 0.0], [e[3], e[4], e[5], 0.0, 0.0, 0.0]]);
        let det = e[1] * e[5] - e[2] * e[4];
        prop_assume!(det.abs() > 1e-3);
        let roots = solve_linear(&sys);
        prop_assert_eq!(roots.len(), 1);
        let scale = 1.0 + roots[0].xi_a.abs().max(roots[0].xi_r.abs());
        prop_assert!(roots[0].residual < 1e-12 * 10.0 * scale);
    }
}
