mod common;

use groupvalue_core::axioms::{GroupValueFunctional, ShapleyGroupValue, ShiftFunctional};
use groupvalue_core::game::generate::{
    random_dividend_game, random_monotone_game, random_nonnegative_dividend_game,
};
use groupvalue_core::search::{rank_groups, SearchConfig};
use groupvalue_core::shapley::{
    marginal_group_contribution, shapley_group_value, shapley_value, third_difference,
};
use groupvalue_core::{Coalition, Game, TableGame, UnanimityCombination};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn game(n: usize, seed: u64) -> TableGame {
    random_dividend_game(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn phi_g(g: &dyn Game, c: Coalition) -> f64 {
    shapley_group_value(g, c).unwrap().value
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn efficiency(n in 1usize..=12, seed in any::<u64>()) {
        let g = game(n, seed);
        let phi = shapley_value(&g).unwrap();
        prop_assert!((phi.total() - g.worth(Coalition::full(n))).abs() <= 1e-9);
    }

    #[test]
    fn coherence_endpoints(n in 1usize..=8, seed in any::<u64>()) {
        let g = game(n, seed);
        let phi = shapley_value(&g).unwrap();
        for i in 0..n {
            prop_assert_eq!(phi_g(&g, Coalition::singleton(i)), phi[i]);
        }
        prop_assert!((phi_g(&g, Coalition::full(n)) - g.worth(Coalition::full(n))).abs() <= 1e-12);
    }

    #[test]
    fn matches_permutation_average(n in 1usize..=7, seed in any::<u64>()) {
        let g = game(n, seed);
        let phi = shapley_value(&g).unwrap();
        let oracle = common::permutation_shapley(&g);
        for i in 0..n {
            prop_assert!((phi[i] - oracle[i]).abs() <= 1e-9);
        }
    }

    #[test]
    fn group_rationality_on_superadditive_games(n in 2usize..=8, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_nonnegative_dividend_game(n, 0.6, &mut rng);
        for c in Coalition::full(n).subsets().skip(1) {
            prop_assert!(phi_g(&g, c) >= g.worth(c) - 1e-9);
        }
    }

    #[test]
    fn monotone_along_inclusion(n in 2usize..=8, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_monotone_game(n, &mut rng);
        let full = Coalition::full(n);
        let table: Vec<f64> = full.subsets().map(|c| phi_g(&g, c)).collect();
        for c in full.subsets() {
            for i in (full - c).players() {
                prop_assert!(table[c.bits() as usize] <= table[c.with(i).bits() as usize] + 1e-9);
            }
        }
    }

    #[test]
    fn linearity(n in 1usize..=7, s1 in any::<u64>(), s2 in any::<u64>(), a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let v = game(n, s1);
        let w = game(n, s2);
        let mix = TableGame::from_fn(n, |s| a * v.worth(s) + b * w.worth(s)).unwrap();
        for c in Coalition::full(n).subsets() {
            let lhs = phi_g(&mix, c);
            let rhs = a * phi_g(&v, c) + b * phi_g(&w, c);
            prop_assert!((lhs - rhs).abs() <= 1e-9);
        }
    }

    #[test]
    fn anonymity(n in 1usize..=7, seed in any::<u64>()) {
        let v = game(n, seed);
        let mut pi: Vec<usize> = (0..n).collect();
        pi.shuffle(&mut ChaCha8Rng::seed_from_u64(seed ^ 1));
        let map = |s: Coalition| s.players().map(|i| pi[i]).collect::<Coalition>();
        let mut worths = vec![0.0; 1 << n];
        for s in Coalition::full(n).subsets() {
            worths[map(s).bits() as usize] = v.worth(s);
        }
        let w = TableGame::new(n, worths).unwrap();
        for c in Coalition::full(n).subsets() {
            prop_assert!((phi_g(&v, c) - phi_g(&w, map(c))).abs() <= 1e-12);
        }
    }

    #[test]
    fn marginal_contribution_decomposes(n in 2usize..=8, seed in any::<u64>()) {
        let g = game(n, seed);
        let full = Coalition::full(n);
        for c in full.subsets().skip(1) {
            for i in (full - c).players() {
                let mc = marginal_group_contribution(&g, c, i).unwrap();
                prop_assert!(mc.residual().abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn third_difference_ignores_order(n in 3usize..=7, seed in any::<u64>()) {
        let g = game(n, seed);
        let full = Coalition::full(n);
        let (i, j, k) = (0, 1, 2);
        let rest = full.without(i).without(j).without(k);
        for s in rest.subsets() {
            let base = third_difference(&g, i, j, k, s).unwrap();
            for (a, b, c) in [(i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)] {
                prop_assert!((third_difference(&g, a, b, c, s).unwrap() - base).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn ranking_order_survives_a_constant_shift(n in 3usize..=7, seed in any::<u64>(), k in 1usize..=3) {
        let g = game(n, seed);
        let k = k.min(n);
        let exact = rank_groups(&g, &SearchConfig::exact(k, usize::MAX)).unwrap();
        let shifted = ShiftFunctional::new(5.0).unwrap().value_table(&g).unwrap();
        let plain = ShapleyGroupValue.value_table(&g).unwrap();
        for w in exact.windows(2) {
            let (a, b) = (w[0].group.bits() as usize, w[1].group.bits() as usize);
            prop_assert!(shifted[a] - shifted[b] >= -1e-9);
            prop_assert!(((shifted[a] - shifted[b]) - (plain[a] - plain[b])).abs() <= 1e-9);
        }
    }
}

#[test]
fn unanimity_closed_form_by_brute_force() {
    for n in 1..=10 {
        let full = Coalition::full(n);
        let carriers: Vec<Coalition> = if n <= 6 {
            full.subsets().skip(1).collect()
        } else {
            vec![Coalition::from_players(0..n / 2), full, Coalition::singleton(n - 1)]
        };
        for s in carriers {
            let u = UnanimityCombination::unanimity(n, s).unwrap();
            for c in [Coalition::singleton(0), Coalition::from_players(0..n.div_ceil(2)), full] {
                let expected = if c.is_disjoint(s) {
                    0.0
                } else {
                    1.0 / ((s - c).len() + 1) as f64
                };
                assert!((phi_g(&u, c) - expected).abs() < 1e-12, "n={n} S={s} C={c}");
                assert!((common::block_group_value(&u, c) - expected).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn monotone_games_rank_supersets_higher() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let g = random_monotone_game(7, &mut rng);
    let pairs = rank_groups(&g, &SearchConfig::exact(2, 21)).unwrap();
    let triples = rank_groups(&g, &SearchConfig::exact(3, 35)).unwrap();
    for d in &triples {
        for c in pairs.iter().filter(|c| c.group.is_subset_of(d.group)) {
            assert!(c.value <= d.value + 1e-9);
        }
    }
}
