//! Lattice walk: rates, exact exit quantities and path decomposition.

use prbm_core::ensemble;
use prbm_core::lattice::{
    crossing_geometric_param, decompose, exit_below_probability, expected_exit_time, jump_rates, occupation_until,
    simulate_exit, simulate_walk, LatticeConfig,
};
use prbm_core::paths::RngStream;
use prbm_core::verify::MeanSe;
use proptest::prelude::*;

#[test]
fn rate_examples() {
    let even = LatticeConfig::new(2, 0.4, 0.1, 100, 5).unwrap();
    assert!((jump_rates(&even, 0, 1).unwrap() - 0.1 * 0.4 / 2.0).abs() < 1e-15);
    assert_eq!(jump_rates(&even, 5, 7).unwrap(), 0.0);
    let odd = LatticeConfig::new(1, 0.4, 0.1, 100, 5).unwrap();
    assert!((jump_rates(&odd, 1, -1).unwrap() - 0.1 * 0.4 / 2.0).abs() < 1e-15);
}

#[test]
fn exit_examples() {
    let cfg = LatticeConfig::new(2, 0.4, 0.1, 100, 5).unwrap();
    for i in [-1, 1] {
        assert!((expected_exit_time(&cfg, i).unwrap() - 0.075).abs() < 1e-12);
    }
    assert!((expected_exit_time(&cfg, 0).unwrap() - 0.325).abs() < 1e-12);
    let p = crossing_geometric_param(&cfg);
    assert!(p.exact && (p.p - 1.0 / 22.0).abs() < 1e-15);
    let small = LatticeConfig::new(2, 0.4, 1e-6, 100, 5).unwrap();
    assert!((crossing_geometric_param(&small).p / 5e-7 - 1.0).abs() < 1e-5);
}

/// A visit enters at the barrier edge, so `p_n` is the far-side exit probability from there.
#[test]
fn geometric_param_matches_linear_solve() {
    for k in [2u32] {
        for c in [0.01, 0.1, 0.5, 1.0] {
            let cfg = LatticeConfig::new(k, 1.0, c, 400, 10).unwrap();
            let h = cfg.half_width();
            let solved = exit_below_probability(&cfg, h).unwrap();
            assert!((solved - crossing_geometric_param(&cfg).p).abs() < 1e-14, "c={c}");
        }
    }
}

#[test]
fn simulated_exits_match_exact() {
    let cfg = LatticeConfig::new(3, 0.7, 0.3, 50, 9).unwrap();
    let h = cfg.half_width();
    let runs = ensemble::run(31, 100_000, |_, rng| simulate_exit(&cfg, h, rng).unwrap());
    let below: Vec<f64> = runs.iter().map(|r| if r.0 < 0 { 1.0 } else { 0.0 }).collect();
    let time: Vec<f64> = runs.iter().map(|r| r.1).collect();
    assert!(MeanSe::of(&below).unwrap().covers(exit_below_probability(&cfg, h).unwrap(), 3.0));
    assert!(MeanSe::of(&time).unwrap().covers(expected_exit_time(&cfg, h).unwrap(), 3.0));
}

#[test]
fn occupation_shrinks_with_n() {
    let mean = |n: u64| {
        let c = LatticeConfig::auto_attenuation(2, 1.0, n).unwrap();
        let cfg = LatticeConfig::new(2, 1.0, c, n, 2).unwrap();
        let occ = ensemble::run(32, 2_000, |_, rng| occupation_until(&simulate_walk(&cfg, 1.0, rng).unwrap(), 1.0));
        MeanSe::of(&occ).unwrap().mean
    };
    let (a, b) = (mean(100), mean(2_500));
    assert!(b < 0.5 * a, "{a} -> {b}");
}

fn config() -> impl Strategy<Value = LatticeConfig> {
    (1u32..5, 0.2..2.0f64, 0.05..1.0f64, 4u64..400).prop_map(|(k, m, c, n)| {
        let h = (k as i64 + 1) / 2;
        LatticeConfig::new(k, m, c, n, h + 2).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rates_are_symmetric(cfg in config(), i in -8i64..8) {
        prop_assume!(cfg.contains(i));
        for j in [cfg.left(i), cfg.right(i)] {
            prop_assert_eq!(jump_rates(&cfg, i, j).unwrap(), jump_rates(&cfg, j, i).unwrap());
            prop_assert!(jump_rates(&cfg, i, j).unwrap() > 0.0);
        }
    }

    #[test]
    fn decomposition_invariants(cfg in config(), seed in any::<u64>()) {
        let p = simulate_walk(&cfg, 1.0, &mut RngStream::new(seed, 0)).unwrap();
        for w in p.sites.windows(2) {
            prop_assert!(w[1] == cfg.left(w[0]) || w[1] == cfg.right(w[0]));
        }
        let d = decompose(&p, &cfg).unwrap();
        let s = cfg.scale();
        for k in 0..p.times.len() {
            if k > 0 {
                let dl = d.l.values[k] - d.l.values[k - 1];
                prop_assert!(dl == 0.0 || (dl - s).abs() < 1e-12);
                prop_assert!(d.nu.values[k] >= d.nu.values[k - 1]);
                prop_assert!(d.v.values[k] >= d.v.values[k - 1]);
            }
            prop_assert!(d.nu.values[k] <= p.times[k] + 1e-12);
            // the split of |X| into martingale part and regulator holds between visits
            if !d.in_visit[k] {
                prop_assert!((d.x_tilde.values[k] - d.m.values[k] - d.l.values[k]).abs() < 1e-9);
            }
        }
        let total = occupation_until(&p, 1.0);
        prop_assert!((0.0..=1.0).contains(&total));
    }
}
