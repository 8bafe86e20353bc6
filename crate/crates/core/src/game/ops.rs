//! Game algebra: merging, restriction, linear combination, affine maps.

use crate::coalition::Coalition;
use crate::error::{Error, Result};

use super::{check_coalition, check_players, Game};

/// The merging game `(N_C, v_C)`: the members of `C` are replaced by a single
/// proxy player.
///
/// Index map: players of `N \ C` keep their relative order and the proxy sits
/// at `min(C)`. Players below `min(C)` therefore keep their index; players
/// above it shift down by the number of merged members below them.
#[derive(Clone, Debug)]
pub struct MergedGame<G> {
    base: G,
    merged: Coalition,
    proxy: usize,
    // merged index -> base index (the proxy maps to min(C))
    members: Vec<usize>,
}

/// Merges the coalition `merged` of `game` into one proxy player.
pub fn merge<G: Game>(game: G, merged: Coalition) -> Result<MergedGame<G>> {
    let n = game.players();
    if merged.is_empty() {
        return Err(Error::EmptyCoalition);
    }
    check_coalition(merged, n)?;
    let lowest = merged.first().expect("nonempty");
    let members: Vec<usize> = (0..n)
        .filter(|&p| !merged.contains(p) || p == lowest)
        .collect();
    Ok(MergedGame {
        base: game,
        merged,
        proxy: lowest,
        members,
    })
}

impl<G> MergedGame<G> {
    pub fn base(&self) -> &G {
        &self.base
    }

    pub fn merged(&self) -> Coalition {
        self.merged
    }

    /// Index of the proxy player in the merged game.
    pub fn proxy(&self) -> usize {
        self.proxy
    }

    /// Base index represented by merged player `k` (the proxy maps to `min(C)`).
    pub fn base_index(&self, k: usize) -> usize {
        self.members[k]
    }

    /// Merged index of base player `i`; members of `C` map to the proxy.
    pub fn merged_index(&self, i: usize) -> Option<usize> {
        if self.merged.contains(i) {
            Some(self.proxy)
        } else {
            self.members.binary_search(&i).ok()
        }
    }

    /// Base coalition represented by merged coalition `s`.
    pub fn expand(&self, s: Coalition) -> Coalition {
        let mut out = Coalition::EMPTY;
        for k in s.players() {
            if k == self.proxy {
                out = out | self.merged;
            } else {
                out = out.with(self.members[k]);
            }
        }
        out
    }
}

impl<G: Game> Game for MergedGame<G> {
    fn players(&self) -> usize {
        self.members.len()
    }

    fn worth(&self, coalition: Coalition) -> f64 {
        self.base.worth(self.expand(coalition))
    }
}

/// The restriction of a game to `N \ removed`, re-indexed densely in
/// increasing original order.
#[derive(Clone, Debug)]
pub struct RestrictedGame<G> {
    base: G,
    removed: Coalition,
    kept: Vec<usize>,
}

pub fn restrict<G: Game>(game: G, removed: Coalition) -> Result<RestrictedGame<G>> {
    let n = game.players();
    check_coalition(removed, n)?;
    if removed.len() == n {
        return Err(Error::InvalidParameter(
            "restriction would remove every player".into(),
        ));
    }
    let kept = (0..n).filter(|&p| !removed.contains(p)).collect();
    Ok(RestrictedGame {
        base: game,
        removed,
        kept,
    })
}

impl<G> RestrictedGame<G> {
    pub fn base(&self) -> &G {
        &self.base
    }

    pub fn removed(&self) -> Coalition {
        self.removed
    }

    /// Base index of restricted player `k`.
    pub fn base_index(&self, k: usize) -> usize {
        self.kept[k]
    }

    /// Restricted index of base player `i`, if it was kept.
    pub fn restricted_index(&self, i: usize) -> Option<usize> {
        self.kept.binary_search(&i).ok()
    }

    /// Maps a base coalition disjoint from the removed set into restricted
    /// indices.
    pub fn from_base(&self, s: Coalition) -> Coalition {
        debug_assert!(s.is_disjoint(self.removed));
        s.squeeze(self.removed)
    }

    pub fn to_base(&self, s: Coalition) -> Coalition {
        s.players().map(|k| self.kept[k]).collect()
    }
}

impl<G: Game> Game for RestrictedGame<G> {
    fn players(&self) -> usize {
        self.kept.len()
    }

    fn worth(&self, coalition: Coalition) -> f64 {
        self.base.worth(self.to_base(coalition))
    }
}

/// `Σ_k coeff_k · v_k`.
#[derive(Clone, Debug)]
pub struct LinearCombination<G> {
    n: usize,
    terms: Vec<(f64, G)>,
}

pub fn linear_combination<G: Game>(terms: Vec<(f64, G)>) -> Result<LinearCombination<G>> {
    let n = match terms.first() {
        Some((_, g)) => g.players(),
        None => {
            return Err(Error::InvalidParameter(
                "linear combination needs at least one term".into(),
            ))
        }
    };
    for (coeff, g) in &terms {
        if g.players() != n {
            return Err(Error::PlayerCountMismatch(n, g.players()));
        }
        if !coeff.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "non-finite coefficient {coeff}"
            )));
        }
    }
    Ok(LinearCombination { n, terms })
}

impl<G> LinearCombination<G> {
    pub fn terms(&self) -> &[(f64, G)] {
        &self.terms
    }
}

impl<G: Game> Game for LinearCombination<G> {
    fn players(&self) -> usize {
        self.n
    }

    fn worth(&self, coalition: Coalition) -> f64 {
        if coalition.is_empty() {
            return 0.0;
        }
        self.terms
            .iter()
            .map(|(coeff, g)| coeff * g.worth(coalition))
            .sum()
    }
}

/// `w(S) = a·v(S) + Σ_{i∈S} b_i`, a strategically equivalent game.
#[derive(Clone, Debug)]
pub struct AffineGame<G> {
    base: G,
    scale: f64,
    shift: Vec<f64>,
}

pub fn affine_transform<G: Game>(game: G, scale: f64, shift: Vec<f64>) -> Result<AffineGame<G>> {
    check_players(game.players())?;
    if scale.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) || !scale.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "affine scale must be positive and finite, got {scale}"
        )));
    }
    if shift.len() != game.players() {
        return Err(Error::InvalidParameter(format!(
            "shift vector has {} entries for {} players",
            shift.len(),
            game.players()
        )));
    }
    Ok(AffineGame {
        base: game,
        scale,
        shift,
    })
}

impl<G> AffineGame<G> {
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn shift(&self) -> &[f64] {
        &self.shift
    }
}

impl<G: Game> Game for AffineGame<G> {
    fn players(&self) -> usize {
        self.shift.len()
    }

    fn worth(&self, coalition: Coalition) -> f64 {
        if coalition.is_empty() {
            return 0.0;
        }
        self.scale * self.base.worth(coalition)
            + coalition.players().map(|i| self.shift[i]).sum::<f64>()
    }
}
