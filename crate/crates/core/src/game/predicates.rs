//! Exhaustive structural predicates.

use crate::coalition::Coalition;
use crate::error::Result;

use super::{check_player, ensure_exact, Game};

/// Tolerance for equality of worths in structural checks.
pub const STRUCT_EPS: f64 = 1e-12;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= STRUCT_EPS * 1f64.max(a.abs()).max(b.abs())
}

fn at_least(a: f64, b: f64) -> bool {
    a >= b || close(a, b)
}

/// Every marginal contribution of `player` equals `v({player})`.
pub fn is_dummy_player<G: Game + ?Sized>(game: &G, player: usize) -> Result<bool> {
    let n = game.players();
    ensure_exact(n)?;
    check_player(player, n)?;
    let own = game.worth(Coalition::singleton(player));
    let rest = Coalition::full(n).without(player);
    Ok(rest
        .subsets()
        .all(|s| close(game.worth(s.with(player)) - game.worth(s), own)))
}

/// A dummy player whose own worth is zero.
pub fn is_null_player<G: Game + ?Sized>(game: &G, player: usize) -> Result<bool> {
    let n = game.players();
    ensure_exact(n)?;
    check_player(player, n)?;
    let rest = Coalition::full(n).without(player);
    Ok(rest
        .subsets()
        .all(|s| close(game.worth(s.with(player)), game.worth(s))))
}

/// `v(S) ≤ v(T)` whenever `S ⊆ T`; checked on single-player steps.
pub fn is_monotonic<G: Game + ?Sized>(game: &G) -> Result<bool> {
    let n = game.players();
    ensure_exact(n)?;
    let full = Coalition::full(n);
    Ok(full.subsets().all(|s| {
        let ws = game.worth(s);
        (full - s).players().all(|i| at_least(game.worth(s.with(i)), ws))
    }))
}

/// `v(S ∪ T) ≥ v(S) + v(T)` for all disjoint `S`, `T`.
pub fn is_superadditive<G: Game + ?Sized>(game: &G) -> Result<bool> {
    let n = game.players();
    ensure_exact(n)?;
    let full = Coalition::full(n);
    Ok(full.subsets().skip(1).all(|s| {
        let ws = game.worth(s);
        // T ranges over nonempty subsets of the complement with T > S to
        // visit each unordered pair once.
        (full - s)
            .subsets()
            .filter(|t| *t > s)
            .all(|t| at_least(game.worth(s | t), ws + game.worth(t)))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{FnGame, TableGame, UnanimityCombination};

    #[test]
    fn outsiders_of_unanimity_are_null() {
        let s = Coalition::from_players([1, 2]);
        let u = UnanimityCombination::unanimity(5, s).unwrap();
        for i in 0..5 {
            assert_eq!(is_null_player(&u, i).unwrap(), !s.contains(i));
            assert_eq!(is_dummy_player(&u, i).unwrap(), !s.contains(i));
        }
        assert!(is_monotonic(&u).unwrap());
        assert!(is_superadditive(&u).unwrap());
    }

    #[test]
    fn additive_game_all_dummies() {
        let b = [2.0, -1.0, 0.5, 3.0];
        let g = FnGame::new(4, move |s: Coalition| s.players().map(|i| b[i]).sum()).unwrap();
        for i in 0..4 {
            assert!(is_dummy_player(&g, i).unwrap());
            assert!(!is_null_player(&g, i).unwrap());
        }
        assert!(!is_monotonic(&g).unwrap());
        assert!(is_superadditive(&g).unwrap());
    }

    #[test]
    fn path_connectivity_superadditivity() {
        // Connectivity game on a path: v = 1 on contiguous runs of length > 1.
        fn path_game(n: usize) -> TableGame {
            TableGame::from_fn(n, |s: Coalition| {
                let b = s.bits();
                let contiguous = b != 0 && (b >> b.trailing_zeros()).count_ones()
                    == 64 - (b >> b.trailing_zeros()).leading_zeros();
                if s.len() > 1 && contiguous { 1.0 } else { 0.0 }
            })
            .unwrap()
        }
        for n in 3..=6 {
            let g = path_game(n);
            // Brute force over ordered disjoint pairs.
            let mut violated = false;
            for a in 1u64..1 << n {
                for b in 1u64..1 << n {
                    let (sa, sb) = (Coalition::from_bits(a), Coalition::from_bits(b));
                    if a & b == 0 && g.worth(sa | sb) < g.worth(sa) + g.worth(sb) {
                        violated = true;
                    }
                }
            }
            // Two disjoint edges need at least four nodes.
            assert_eq!(violated, n >= 4);
            assert_eq!(is_superadditive(&g).unwrap(), !violated);
            // {0,1} -> {0,1,3} disconnects once there is a fourth node.
            assert_eq!(is_monotonic(&g).unwrap(), n == 3);
        }
    }

    #[test]
    fn predicates_respect_cap() {
        let g = FnGame::new(30, |_| 1.0).unwrap();
        assert!(is_monotonic(&g).is_err());
        assert!(is_null_player(&g, 0).is_err());
    }
}
