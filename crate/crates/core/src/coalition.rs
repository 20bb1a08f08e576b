//! Coalitions as bitmasks and permutation set chains.
//!
//! Player `i` (0-based) is bit `i` of the mask. Text formats (labels, CLI
//! flags, documents) number players from 1.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest supported player count. Game vectors have `2^n` entries.
pub const MAX_PLAYERS: usize = 16;

pub(crate) fn check_player_count(n: usize) -> Result<()> {
    if n == 0 || n > MAX_PLAYERS {
        return Err(Error::PlayerCount { n, max: MAX_PLAYERS });
    }
    Ok(())
}

/// Number of coalitions over `n` players.
#[inline]
pub fn coalition_count(n: usize) -> usize {
    1usize << n
}

/// A subset of players, stored as a bitmask.
///
/// The mask alone does not know the player count; operations that take an
/// `n` validate `mask < 2^n`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coalition(u32);

impl Coalition {
    pub const EMPTY: Coalition = Coalition(0);

    #[inline]
    pub const fn from_mask(mask: u32) -> Self {
        Coalition(mask)
    }

    /// The grand coalition `N` for `n` players.
    #[inline]
    pub fn full(n: usize) -> Self {
        Coalition(((1u64 << n) - 1) as u32)
    }

    #[inline]
    pub fn singleton(player: usize) -> Self {
        Coalition(1 << player)
    }

    /// Builds a coalition from 0-based player indices, checking them against `n`.
    pub fn from_players(n: usize, players: &[usize]) -> Result<Self> {
        check_player_count(n)?;
        let mut mask = 0u32;
        for &p in players {
            if p >= n {
                return Err(Error::PlayerOutOfRange { player: p, n });
            }
            mask |= 1 << p;
        }
        Ok(Coalition(mask))
    }

    #[inline]
    pub const fn mask(self) -> u32 {
        self.0
    }

    #[inline]
    pub const fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_valid_for(self, n: usize) -> bool {
        (self.0 as u64) < (1u64 << n)
    }

    pub(crate) fn check(self, n: usize) -> Result<()> {
        if self.is_valid_for(n) {
            Ok(())
        } else {
            Err(Error::CoalitionOutOfRange { mask: self.0, n })
        }
    }

    #[inline]
    pub fn contains(self, player: usize) -> bool {
        player < 32 && self.0 & (1 << player) != 0
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn with(self, player: usize) -> Self {
        Coalition(self.0 | (1 << player))
    }

    #[inline]
    pub fn without(self, player: usize) -> Self {
        Coalition(self.0 & !(1 << player))
    }

    #[inline]
    pub fn union(self, other: Self) -> Self {
        Coalition(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: Self) -> Self {
        Coalition(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: Self) -> Self {
        Coalition(self.0 & !other.0)
    }

    #[inline]
    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_proper_subset_of(self, other: Self) -> bool {
        self.is_subset_of(other) && self != other
    }

    #[inline]
    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    /// Members in increasing order, 0-based.
    pub fn players(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let p = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(p)
            }
        })
    }

    /// All coalitions over `n` players in bitmask order.
    pub fn all(n: usize) -> impl Iterator<Item = Coalition> {
        (0..coalition_count(n) as u32).map(Coalition)
    }

    /// Proper subsets of `self`, excluding `self` itself, in decreasing mask order.
    pub fn proper_subsets(self) -> impl Iterator<Item = Coalition> {
        let full = self.0;
        let mut next = (full != 0).then(|| (full - 1) & full);
        std::iter::from_fn(move || {
            let cur = next?;
            next = (cur != 0).then(|| (cur - 1) & full);
            Some(Coalition(cur))
        })
    }

    /// Human label with 1-based players, e.g. `{1,3}`; the empty set is `{}`.
    pub fn label(self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, p) in self.players().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", p + 1)?;
        }
        f.write_str("}")
    }
}

impl FromStr for Coalition {
    type Err = Error;

    /// Parses `{1,3}`, `{}` or `∅`. Players are 1-based.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid coalition label {s:?}"));
        let t = s.trim();
        if t == "∅" {
            return Ok(Coalition::EMPTY);
        }
        let inner = t.strip_prefix('{').and_then(|r| r.strip_suffix('}')).ok_or_else(bad)?.trim();
        let mut mask = 0u32;
        if inner.is_empty() {
            return Ok(Coalition::EMPTY);
        }
        for part in inner.split(',') {
            let p: usize = part.trim().parse().map_err(|_| bad())?;
            if p == 0 || p > MAX_PLAYERS {
                return Err(bad());
            }
            if mask & (1 << (p - 1)) != 0 {
                return Err(bad());
            }
            mask |= 1 << (p - 1);
        }
        Ok(Coalition(mask))
    }
}

/// A permutation of the players together with its chain
/// `∅ = M_0 ⊂ M_1 ⊂ … ⊂ M_n = N`, where `M_k` adds `order[k-1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetChain {
    order: Vec<usize>,
}

impl SetChain {
    /// `order` lists 0-based players; it must be a permutation of `0..n`.
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        check_player_count(n)?;
        let mut seen = 0u32;
        for &p in &order {
            if p >= n || seen & (1 << p) != 0 {
                return Err(Error::InvalidPermutation(
                    order.iter().map(|p| (p + 1).to_string()).collect::<Vec<_>>().join(","),
                ));
            }
            seen |= 1 << p;
        }
        Ok(SetChain { order })
    }

    /// Parses a 1-based, comma separated permutation such as `"2,1,3"`.
    pub fn parse_one_based(s: &str) -> Result<Self> {
        let order = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .ok()
                    .filter(|&p| p >= 1)
                    .map(|p| p - 1)
                    .ok_or_else(|| Error::InvalidPermutation(s.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        SetChain::new(order)
    }

    pub fn identity(n: usize) -> Result<Self> {
        SetChain::new((0..n).collect())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.order.len()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.order.iter().map(|p| p + 1).collect()
    }

    /// `M_0, …, M_n`.
    pub fn sets(&self) -> Vec<Coalition> {
        let mut sets = Vec::with_capacity(self.n() + 1);
        let mut cur = Coalition::EMPTY;
        sets.push(cur);
        for &p in &self.order {
            cur = cur.with(p);
            sets.push(cur);
        }
        sets
    }

    /// Players preceding `player` in the ordering.
    pub fn predecessors(&self, player: usize) -> Coalition {
        let mut set = Coalition::EMPTY;
        for &p in &self.order {
            if p == player {
                break;
            }
            set = set.with(p);
        }
        set
    }

    /// Nonzero entries of the associated special allocation as
    /// `(player, column, ±1)`; exactly `2n` of them.
    pub fn nonzeros(&self) -> Vec<(usize, Coalition, f64)> {
        let mut out = Vec::with_capacity(2 * self.n());
        let mut cur = Coalition::EMPTY;
        for &p in &self.order {
            out.push((p, cur, -1.0));
            cur = cur.with(p);
            out.push((p, cur, 1.0));
        }
        out
    }

    /// All `n!` chains in lexicographic order of the permutation.
    pub fn all(n: usize) -> Result<Vec<SetChain>> {
        check_player_count(n)?;
        let total: usize = (1..=n).product();
        Ok((0..total).map(|r| SetChain::unrank(n, r)).collect())
    }

    /// The `rank`-th permutation of `0..n` in lexicographic order (Lehmer code).
    pub(crate) fn unrank(n: usize, mut rank: usize) -> SetChain {
        let mut pool: Vec<usize> = (0..n).collect();
        let mut fact: usize = (1..n).product();
        let mut order = Vec::with_capacity(n);
        for k in (0..n).rev() {
            let idx = rank / fact.max(1);
            rank %= fact.max(1);
            order.push(pool.remove(idx));
            fact = fact.checked_div(k).unwrap_or(1);
        }
        SetChain { order }
    }
}

impl fmt::Display for SetChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.one_based().iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}
