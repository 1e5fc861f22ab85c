//! Kernel checks against independent quadrature oracles.

use prbm_core::kernel::{
    barrier_integral, crossing_probability, hitting_prob, transition_cdf, transition_density,
};
use prbm_core::{Permeability, PrbmParams, Side, SidedReal};
use proptest::prelude::*;

fn heat(t: f64, x: f64) -> f64 {
    (-x * x / (2.0 * t)).exp() / (2.0 * std::f64::consts::PI * t).sqrt()
}

/// Recursive adaptive Simpson with Richardson correction.
fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let d = left + right - whole;
        if depth == 0 || d.abs() <= 15.0 * tol {
            return left + right + d / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    rec(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 50)
}

/// `2 gamma ∫ exp(-2 gamma l) G_t(a + l) dl`, split into pieces narrower than either decay scale.
fn barrier_oracle(a: f64, gamma: f64, t: f64) -> f64 {
    let f = |l: f64| 2.0 * gamma * (-2.0 * gamma * l).exp() * heat(t, a + l);
    let reach = 60.0 * (0.5 / gamma).min(t.sqrt());
    let pieces = 600;
    let h = reach / pieces as f64;
    // the integrand peaks at l = 0
    let tol = 1e-14 * f(0.0) * h;
    (0..pieces).map(|k| simpson(&f, k as f64 * h, (k + 1) as f64 * h, tol)).sum()
}

fn p(x: f64, side: Side) -> SidedReal {
    SidedReal::new(x, side).unwrap()
}

#[test]
fn barrier_matches_simpson_oracle() {
    for &a in &[0.0, 1e-3, 0.1, 1.0, 3.0] {
        for &g in &[0.05, 1.0, 20.0] {
            for &t in &[0.05, 1.0, 5.0] {
                let want = barrier_oracle(a, g, t);
                let got = barrier_integral(a, g, t).unwrap();
                assert!((got - want).abs() <= 1e-9 * want.abs() + 1e-300, "a={a} g={g} t={t}: {got} vs {want}");
            }
        }
    }
}

#[test]
fn barrier_reference_values() {
    // e^2 erfc(sqrt 2), to 30 digits
    let b = barrier_integral(0.0, 1.0, 1.0).unwrap();
    assert!((b - 0.336_204_002_446_341_2).abs() < 1e-15, "{b}");
    let big = barrier_integral(0.0, 1e6, 1.0).unwrap();
    assert!((big - heat(1.0, 0.0)).abs() < 1e-5);
    // exp(-1250) underflows, so at a = 5 only the bound survives in f64
    let tail = barrier_integral(5.0, 1.0, 0.01).unwrap();
    assert!((0.0..=heat(0.01, 5.0)).contains(&tail));
    let near = barrier_integral(1.0, 1.0, 0.01).unwrap();
    assert!(near > 0.0 && near <= heat(0.01, 1.0));
}

#[test]
fn density_examples() {
    let one = PrbmParams::standard(1.0).unwrap();
    let zero = PrbmParams::standard(0.0).unwrap();
    let b = barrier_oracle(0.0, 1.0, 1.0);
    let same = transition_density(&one, 1.0, SidedReal::ZERO_PLUS, SidedReal::ZERO_PLUS).unwrap();
    let opp = transition_density(&one, 1.0, SidedReal::ZERO_PLUS, SidedReal::ZERO_MINUS).unwrap();
    assert!((same - (2.0 * heat(1.0, 0.0) - b)).abs() < 1e-10);
    assert!((same - 0.462).abs() < 1e-3);
    assert!((opp - 0.336).abs() < 1e-3);
    let r = transition_density(&zero, 1.0, p(1.0, Side::Plus), p(2.0, Side::Plus)).unwrap();
    assert!((r - heat(1.0, 1.0) - heat(1.0, 3.0)).abs() < 1e-15);
    assert_eq!(transition_density(&zero, 1.0, p(1.0, Side::Plus), p(2.0, Side::Minus)).unwrap(), 0.0);
}

#[test]
fn cdf_at_origin_is_opposite_mass() {
    let one = PrbmParams::standard(1.0).unwrap();
    let mass = simpson(
        &|y| transition_density(&one, 1.0, SidedReal::ZERO_PLUS, p(y, Side::Minus)).unwrap(),
        0.0,
        15.0,
        1e-14,
    );
    let cdf = transition_cdf(&one, 1.0, SidedReal::ZERO_PLUS, 0.0).unwrap();
    let cross = crossing_probability(&one, 1.0, SidedReal::ZERO_PLUS).unwrap();
    assert!((cdf - mass).abs() < 1e-10, "{cdf} vs {mass}");
    assert!((cross - mass).abs() < 1e-10);
    let all = transition_cdf(&one, 1.0, SidedReal::ZERO_PLUS, 40.0).unwrap();
    assert!((all - 1.0).abs() < 1e-12);
    let zero = PrbmParams::standard(0.0).unwrap();
    assert_eq!(transition_cdf(&zero, 1.0, p(1.0, Side::Plus), 0.0).unwrap(), 0.0);
}

/// `x + sign/(2 gamma)` is harmonic, so `E_{0+}[X_t] = P_{0+}(X_t on the minus side) / gamma`.
#[test]
fn first_moment_identity() {
    for &g in &[0.3, 1.0, 4.0] {
        let prm = PrbmParams::standard(g).unwrap();
        for &t in &[0.2, 1.0, 3.0] {
            let dens = |y: f64, s: Side| transition_density(&prm, t, SidedReal::ZERO_PLUS, p(y, s)).unwrap();
            let reach = 14.0 * t.sqrt();
            let mean = simpson(&|y| y * dens(y, Side::Plus), 0.0, reach, 1e-14)
                - simpson(&|y| y * dens(y, Side::Minus), 0.0, reach, 1e-14);
            let minus = crossing_probability(&prm, t, SidedReal::ZERO_PLUS).unwrap();
            assert!((mean - minus / g).abs() < 1e-9, "g={g} t={t}: {mean} vs {}", minus / g);
        }
    }
}

#[test]
fn hitting_examples() {
    assert!((hitting_prob(1.0, 2.0, 1.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    assert!(hitting_prob(2.0 - 1e-12, 2.0, 1.0).unwrap() < 1e-11);
    assert!((hitting_prob(1.0, 2.0, 1e12).unwrap() - 0.5).abs() < 1e-9);
}

fn sided() -> impl Strategy<Value = SidedReal> {
    (0.0..4.0f64, any::<bool>()).prop_map(|(m, s)| p(m, if s { Side::Plus } else { Side::Minus }))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn density_is_symmetric_and_nonnegative(g in 0.0..20.0f64, t in 0.01..5.0f64, x in sided(), y in sided()) {
        let prm = PrbmParams::standard(g).unwrap();
        let a = transition_density(&prm, t, x, y).unwrap();
        let b = transition_density(&prm, t, y, x).unwrap();
        prop_assert!(a >= -1e-15);
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300));
    }

    #[test]
    fn density_integrates_to_one(g in 0.01..20.0f64, t in 0.05..5.0f64, x in sided()) {
        let prm = PrbmParams::standard(g).unwrap();
        let reach = x.magnitude() + 14.0 * t.sqrt();
        let part = |s: Side| {
            let f = |y: f64| transition_density(&prm, t, x, p(y, s)).unwrap();
            if x.side() == s && x.magnitude() > 0.0 {
                simpson(&f, 0.0, x.magnitude(), 1e-13) + simpson(&f, x.magnitude(), reach, 1e-13)
            } else {
                simpson(&f, 0.0, reach, 1e-13)
            }
        };
        let total = part(Side::Plus) + part(Side::Minus);
        prop_assert!((total - 1.0).abs() < 1e-8, "total {}", total);
    }

    #[test]
    fn crossing_grows_with_permeability(g in 0.01..10.0f64, t in 0.05..5.0f64, x in 0.0..3.0f64) {
        let lo = crossing_probability(&PrbmParams::standard(g).unwrap(), t, p(x, Side::Plus)).unwrap();
        let hi = crossing_probability(&PrbmParams::standard(2.0 * g).unwrap(), t, p(x, Side::Plus)).unwrap();
        let free = crossing_probability(&PrbmParams::new(Permeability::Infinite, 1.0).unwrap(), t, p(x, Side::Plus)).unwrap();
        prop_assert!(0.0 <= lo && lo <= hi + 1e-15 && hi <= free + 1e-12 && free <= 0.5 + 1e-15);
    }

    #[test]
    fn cdf_is_monotone(g in 0.0..10.0f64, t in 0.05..5.0f64, x in sided(), a in -5.0..5.0f64, d in 0.0..2.0f64) {
        let prm = PrbmParams::standard(g).unwrap();
        let lo = transition_cdf(&prm, t, x, a).unwrap();
        let hi = transition_cdf(&prm, t, x, a + d).unwrap();
        prop_assert!(lo <= hi + 1e-13 && (0.0..=1.0 + 1e-13).contains(&lo));
    }
}
