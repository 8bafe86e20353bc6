#![allow(dead_code)]

use groupvalue_core::applied::{connectivity_game, Network, NetworkGame};
use groupvalue_core::{Coalition, Game};

/// Star of stars with 1-based labels: leaves 1,2,3 on centre 4, centre 6
/// with leaves 7,8,9, and hub 5 joining the two centres.
pub fn star() -> NetworkGame {
    let edges = [(1, 4), (2, 4), (3, 4), (4, 5), (5, 6), (6, 7), (6, 8), (6, 9)];
    let net = Network::from_edges(9, edges.iter().map(|&(a, b)| (a - 1, b - 1, 1.0))).unwrap();
    connectivity_game(&net)
}

pub fn labels(l: &[usize]) -> Coalition {
    l.iter().map(|&x| x - 1).collect()
}

/// Shapley values as averages over all `n!` arrival orders (Heap's
/// algorithm), independent of the subset-weight formula.
pub fn permutation_shapley(game: &dyn Game) -> Vec<f64> {
    let n = game.players();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut acc = vec![0.0; n];
    let mut count = 0u64;
    let mut visit = |p: &[usize]| {
        let mut s = Coalition::EMPTY;
        let mut prev = 0.0;
        for &i in p {
            s = s.with(i);
            let w = game.worth(s);
            acc[i] += w - prev;
            prev = w;
        }
        count += 1;
    };
    let mut c = vec![0usize; n];
    visit(&perm);
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            visit(&perm);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    acc.iter().map(|a| a / count as f64).collect()
}

/// Group value by brute force: the group's members arrive together, so
/// average the group's joint marginal contribution over orders of the
/// outsiders with the group inserted at every position.
pub fn block_group_value(game: &dyn Game, group: Coalition) -> f64 {
    let n = game.players();
    let outside: Vec<usize> = (Coalition::full(n) - group).players().collect();
    let m = outside.len();
    // Position of the block is uniform on 0..=m and independent of the
    // outsiders' order, so only the set of predecessors matters.
    let mut total = 0.0;
    let mut weight_sum = 0.0;
    for mask in 0..1u64 << m {
        let pred: Coalition = (0..m).filter(|b| mask >> b & 1 == 1).map(|b| outside[b]).collect();
        let s = pred.len();
        // P(predecessors = pred) = s!(m−s)!/(m+1)!
        let w = fact(s) * fact(m - s) / fact(m + 1);
        total += w * (game.worth(pred | group) - game.worth(pred));
        weight_sum += w;
    }
    assert!((weight_sum - 1.0).abs() < 1e-9);
    total
}

fn fact(k: usize) -> f64 {
    (1..=k).map(|x| x as f64).product()
}
