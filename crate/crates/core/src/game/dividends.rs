//! Harsanyi dividends (Möbius inversion over the subset lattice).

use crate::coalition::Coalition;
use crate::error::Result;

use super::{Game, TableGame, UnanimityCombination};

/// Sparse dividend map, nonzero entries only, in increasing mask order.
pub type Dividends = Vec<(Coalition, f64)>;

/// In-place subset-sum transform: `xs[S] ← Σ_{T⊆S} xs[T]`.
pub fn zeta_in_place(xs: &mut [f64]) {
    assert!(xs.len().is_power_of_two());
    let mut bit = 1;
    while bit < xs.len() {
        for block in xs.chunks_exact_mut(bit * 2) {
            let (lo, hi) = block.split_at_mut(bit);
            for (l, h) in lo.iter().zip(hi) {
                *h += *l;
            }
        }
        bit <<= 1;
    }
}

/// Inverse of [`zeta_in_place`]: `xs[S] ← Σ_{T⊆S} (−1)^{|S∖T|} xs[T]`.
pub fn mobius_in_place(xs: &mut [f64]) {
    assert!(xs.len().is_power_of_two());
    let mut bit = 1;
    while bit < xs.len() {
        for block in xs.chunks_exact_mut(bit * 2) {
            let (lo, hi) = block.split_at_mut(bit);
            for (l, h) in lo.iter().zip(hi) {
                *h -= *l;
            }
        }
        bit <<= 1;
    }
}

/// Coordinates of `game` in the unanimity basis.
pub fn harsanyi_dividends<G: Game + ?Sized>(game: &G) -> Result<Dividends> {
    let mut xs = TableGame::tabulate(game)?.into_worths();
    mobius_in_place(&mut xs);
    Ok(xs
        .into_iter()
        .enumerate()
        .filter(|&(m, d)| m != 0 && d != 0.0)
        .map(|(m, d)| (Coalition::from_bits(m as u64), d))
        .collect())
}

impl TableGame {
    /// Dense table from dividends by the subset-sum transform.
    pub fn from_dividends(n: usize, dividends: &[(Coalition, f64)]) -> Result<TableGame> {
        super::check_players(n)?;
        super::ensure_exact(n)?;
        let mut xs = vec![0.0; 1usize << n];
        for &(t, d) in dividends {
            super::check_coalition(t, n)?;
            if !t.is_empty() {
                xs[t.bits() as usize] += d;
            }
        }
        zeta_in_place(&mut xs);
        TableGame::new(n, xs)
    }
}

impl UnanimityCombination {
    pub fn from_game<G: Game + ?Sized>(game: &G) -> Result<UnanimityCombination> {
        UnanimityCombination::new(game.players(), harsanyi_dividends(game)?)
    }
}
