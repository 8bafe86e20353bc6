mod common;

use common::{block_group_value, labels, permutation_shapley, star};
use groupvalue_core::estimation::{mc_group_value, SamplerConfig};
use groupvalue_core::game::restrict;
use groupvalue_core::search::{
    best_singleton_comparison, explain_group, greedy_group, rank_groups, SearchConfig,
};
use groupvalue_core::shapley::{
    additive_group_value, average_complementarity, marginal_group_contribution,
    shapley_group_value, shapley_value, shapley_value_of,
};

const TOL: f64 = 1e-12;

#[test]
fn individual_values() {
    let g = star();
    let phi = shapley_value(&g).unwrap();
    let oracle = permutation_shapley(&g);
    let expected = [-8.0, -8.0, -8.0, 139.0, 130.0, 139.0, -8.0, -8.0, -8.0].map(|x| x / 360.0);
    for i in 0..9 {
        assert!((phi[i] - expected[i]).abs() < TOL, "player {}", i + 1);
        assert!((oracle[i] - expected[i]).abs() < 1e-9);
    }
}

#[test]
fn group_values() {
    let g = star();
    for (group, expected) in [(&[4, 6][..], 0.5), (&[4, 5][..], 0.5 + 47.0 / 280.0)] {
        let c = labels(group);
        let v = shapley_group_value(&g, c).unwrap().value;
        assert!((v - expected).abs() < TOL, "{c}");
        assert!((block_group_value(&g, c) - expected).abs() < TOL);
    }
    let a = additive_group_value(&g, labels(&[4, 6])).unwrap().value;
    assert!((a - 278.0 / 360.0).abs() < TOL);
}

#[test]
fn complementarity_and_decomposition() {
    let g = star();
    assert!((average_complementarity(&g, 3, 5).unwrap() + 1.0 / 90.0).abs() < TOL);
    assert!((average_complementarity(&g, 3, 4).unwrap() - 19.0 / 72.0).abs() < TOL);

    let without4 = restrict(&g, labels(&[4])).unwrap();
    let idx = |l: usize| without4.restricted_index(l - 1).unwrap();
    assert!((shapley_value_of(&without4, idx(6)).unwrap() - 1.0 / 8.0).abs() < TOL);
    assert!((shapley_value_of(&without4, idx(5)).unwrap() - 1.0 / 56.0).abs() < TOL);

    let mc5 = marginal_group_contribution(&g, labels(&[4]), 4).unwrap();
    assert!((mc5.total - 71.0 / 252.0).abs() < TOL);
    let mc6 = marginal_group_contribution(&g, labels(&[4]), 5).unwrap();
    assert!((mc6.total - (1.0 / 8.0 - 1.0 / 90.0)).abs() < TOL);
    assert!(mc5.residual().abs() < TOL && mc6.residual().abs() < TOL);
}

#[test]
fn ranking_and_greedy() {
    let g = star();
    let top = rank_groups(&g, &SearchConfig::exact(2, 3)).unwrap();
    assert_eq!(top[0].group, labels(&[4, 5]));
    assert!((top[0].value - (0.5 + 47.0 / 280.0)).abs() < TOL);
    // {5,6} mirrors {4,5} and follows it by mask.
    assert_eq!(top[1].group, labels(&[5, 6]));
    let pos46 = rank_groups(&g, &SearchConfig::exact(2, 36))
        .unwrap()
        .iter()
        .position(|e| e.group == labels(&[4, 6]))
        .unwrap();
    assert!(pos46 > 1);

    let greedy = greedy_group(&g, 2, None).unwrap();
    assert_eq!(greedy.steps[0].added, 3);
    assert_eq!(greedy.steps[1].added, 4);
    assert_eq!(greedy.group, labels(&[4, 5]));

    let cmp = best_singleton_comparison(&g, 2).unwrap();
    assert_eq!(cmp.individual_best, labels(&[4, 6]));
    assert_eq!(cmp.top_group, labels(&[4, 5]));
    assert!(cmp.diverges);

    let trace = explain_group(&g, labels(&[4, 5]), None).unwrap();
    assert_eq!(trace.steps.iter().map(|s| s.added).collect::<Vec<_>>(), vec![3, 4]);
    let last = &trace.steps[1];
    assert!((last.independent.unwrap() - 1.0 / 56.0).abs() < TOL);
    assert!((last.complementarity.unwrap() - 19.0 / 72.0).abs() < TOL);
}

#[test]
fn sampled_group_value_covers_exact() {
    let g = star();
    let e = mc_group_value(&g, labels(&[4, 5]), &SamplerConfig::new(40_000, 3)).unwrap();
    assert!(e.covers(0.5 + 47.0 / 280.0, 4.0), "{e:?}");
}
