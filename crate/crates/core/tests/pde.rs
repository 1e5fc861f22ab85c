//! Finite-difference solver against closed forms and the kernel.

use prbm_core::kernel::special::norm_cdf;
use prbm_core::kernel::{crossing_probability, HalfLineGrid};
use prbm_core::pde::{
    discrete_mass, semigroup_solution, solve_transmission_heat, InitialProfile, PdeGrid, Scheme,
};
use prbm_core::{Permeability, PrbmParams, Side, SidedReal};
use proptest::prelude::*;

fn step_solution(g: f64, dx: f64, dt: f64) -> (PdeGrid, HalfLineGrid) {
    let grid = PdeGrid::standard(dx, dt, Permeability::new(g).unwrap(), 1.0, 1.0).unwrap();
    let p0 = InitialProfile::Step.on_grid(&grid).unwrap();
    let sol = solve_transmission_heat(&grid, &p0, 1.0).unwrap();
    (grid, sol.values)
}

#[test]
fn free_interface_is_the_heat_equation() {
    let (grid, v) = step_solution(f64::INFINITY, 1e-2, 1e-3);
    let mut gap: f64 = 0.0;
    for j in 0..v.plus.len() {
        let x = j as f64 * grid.dx;
        gap = gap.max((v.plus[j] - norm_cdf(x)).abs()).max((v.minus[j] - norm_cdf(-x)).abs());
    }
    assert!(gap < 1e-3, "{gap}");
}

#[test]
fn reflecting_interface_holds_the_step() {
    let (_, v) = step_solution(0.0, 1e-2, 1e-3);
    assert!(v.plus.iter().all(|&p| (p - 1.0).abs() < 1e-12));
    assert!(v.minus.iter().all(|&p| p.abs() < 1e-12));
}

#[test]
fn matches_semigroup_at_unit_permeability() {
    let (grid, v) = step_solution(1.0, 1e-2, 1e-3);
    let prm = PrbmParams::standard(1.0).unwrap();
    let mut gap: f64 = 0.0;
    for j in (0..v.plus.len()).step_by(7) {
        for (side, p) in [(Side::Plus, v.plus[j]), (Side::Minus, v.minus[j])] {
            let x = SidedReal::new(j as f64 * grid.dx, side).unwrap();
            let exact = semigroup_solution(&prm, |y| InitialProfile::Step.value(y), 1.0, x).unwrap();
            gap = gap.max((p - exact).abs());
        }
    }
    assert!(gap < 1e-3, "{gap}");
}

/// `P_t 1{plus}(0+) = 1 - P_{0+}(X_t on the minus side)`.
#[test]
fn semigroup_of_step_at_origin() {
    let prm = PrbmParams::standard(1.0).unwrap();
    let u = semigroup_solution(&prm, |y| InitialProfile::Step.value(y), 1.0, SidedReal::ZERO_PLUS).unwrap();
    let cross = crossing_probability(&prm, 1.0, SidedReal::ZERO_PLUS).unwrap();
    assert!((u - (1.0 - cross)).abs() < 1e-9, "{u} vs {}", 1.0 - cross);
    let zero = PrbmParams::standard(0.0).unwrap();
    let r = semigroup_solution(&zero, |y| InitialProfile::Step.value(y), 1.0, SidedReal::new(0.3, Side::Plus).unwrap());
    assert!((r.unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn leakage_grows_with_permeability() {
    let mut prev = -1.0;
    for g in [0.0, 0.25, 1.0, 4.0, f64::INFINITY] {
        let (_, v) = step_solution(g, 2e-2, 2e-3);
        let leaked = discrete_mass(&HalfLineGrid::new(v.dx, vec![0.0; v.plus.len()], v.minus.clone()).unwrap());
        assert!(leaked > prev, "gamma={g}: {leaked} <= {prev}");
        prev = leaked;
    }
}

#[test]
fn explicit_and_implicit_agree() {
    let g = Permeability::new(1.0).unwrap();
    let dx = 5e-2;
    let explicit = PdeGrid::new(dx, 6.0, 0.4 * dx * dx, g, 1.0, Scheme::Explicit).unwrap();
    let implicit = PdeGrid::new(dx, 6.0, 1e-3, g, 1.0, Scheme::Implicit).unwrap();
    let a = solve_transmission_heat(&explicit, &InitialProfile::Gaussian.on_grid(&explicit).unwrap(), 1.0).unwrap();
    let b = solve_transmission_heat(&implicit, &InitialProfile::Gaussian.on_grid(&implicit).unwrap(), 1.0).unwrap();
    let gap = a
        .values
        .plus
        .iter()
        .zip(&b.values.plus)
        .chain(a.values.minus.iter().zip(&b.values.minus))
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    assert!(gap < 1e-3, "{gap}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Mass is conserved and the solution stays between the extremes of the data.
    #[test]
    fn conservation_and_maximum_principle(
        g in prop_oneof![Just(f64::INFINITY), 0.0..10.0f64],
        c in -2.0..2.0f64,
        w in 0.2..1.5f64,
        lift in 0.0..1.0f64,
    ) {
        let gamma = Permeability::new(g).unwrap();
        let grid = PdeGrid::new(5e-2, 8.0, 5e-3, gamma, 1.0, Scheme::Implicit).unwrap();
        let mut p0 = grid.sample(|x, _| lift + (-(x - c) * (x - c) / w).exp()).unwrap();
        if g.is_infinite() {
            let mid = 0.5 * (p0.plus[0] + p0.minus[0]);
            p0.plus[0] = mid;
            p0.minus[0] = mid;
        }
        let (lo, hi) = p0.plus.iter().chain(&p0.minus).fold((f64::MAX, f64::MIN), |(a, b), &v| (a.min(v), b.max(v)));
        let sol = solve_transmission_heat(&grid, &p0, 0.5).unwrap();
        let m0 = sol.mass[0].1;
        for &(_, m) in &sol.mass {
            prop_assert!((m - m0).abs() < 1e-9 * m0.abs().max(1.0));
        }
        for &v in sol.values.plus.iter().chain(&sol.values.minus) {
            prop_assert!(v >= lo - 1e-6 && v <= hi + 1e-6, "{} outside [{}, {}]", v, lo, hi);
        }
    }
}
