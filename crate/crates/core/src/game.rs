//! Characteristic functions stored as vectors over all coalitions, together
//! with the predicates and transforms used to probe allocation operators.

use std::ops::Index;

use crate::coalition::{check_player_count, coalition_count, Coalition};
use crate::error::{Error, Result};

/// A transferable-utility game: one real value per coalition, indexed by mask.
#[derive(Clone, Debug, PartialEq)]
pub struct Game {
    n: usize,
    values: Vec<f64>,
}

impl Game {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        check_player_count(n)?;
        let expected = coalition_count(n);
        if values.len() != expected {
            return Err(Error::Length { n, expected, got: values.len() });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Game { n, values })
    }

    pub fn from_fn(n: usize, f: impl Fn(Coalition) -> f64) -> Result<Self> {
        check_player_count(n)?;
        Game::new(n, Coalition::all(n).map(f).collect())
    }

    pub fn zero(n: usize) -> Result<Self> {
        Game::from_fn(n, |_| 0.0)
    }

    /// `v(S) = Σ_{i∈S} weights[i]`.
    pub fn additive(weights: &[f64]) -> Result<Self> {
        Game::from_fn(weights.len(), |s| s.players().map(|p| weights[p]).sum())
    }

    /// `v(S) = 1` iff `|S| >= quota`.
    pub fn majority(n: usize, quota: usize) -> Result<Self> {
        Game::from_fn(n, |s| if s.len() >= quota { 1.0 } else { 0.0 })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn value(&self, s: Coalition) -> f64 {
        self.values[s.index()]
    }

    pub fn grand(&self) -> Coalition {
        Coalition::full(self.n)
    }

    fn check_player(&self, player: usize) -> Result<()> {
        if player >= self.n {
            return Err(Error::PlayerOutOfRange { player, n: self.n });
        }
        Ok(())
    }

    /// `v(S ∪ {i}) − v(S)` for `i ∉ S`.
    pub fn marginal_contribution(&self, player: usize, s: Coalition) -> Result<f64> {
        self.check_player(player)?;
        s.check(self.n)?;
        if s.contains(player) {
            return Err(Error::PlayerInCoalition { player, coalition: s.label() });
        }
        Ok(self.value(s.with(player)) - self.value(s))
    }

    /// Smallest and largest marginal contribution of `player` over all
    /// coalitions not containing it.
    pub fn marginal_range(&self, player: usize) -> Result<(f64, f64)> {
        self.check_player(player)?;
        let bit = 1u32 << player;
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for mask in 0..coalition_count(self.n) as u32 {
            if mask & bit != 0 {
                continue;
            }
            let d = self.values[(mask | bit) as usize] - self.values[mask as usize];
            lo = lo.min(d);
            hi = hi.max(d);
        }
        Ok((lo, hi))
    }

    /// `v(S) <= v(T)` whenever `S ⊆ T`, checked on the covers `S ⊂ S ∪ {i}`.
    pub fn is_monotone(&self) -> bool {
        Coalition::all(self.n)
            .all(|s| (0..self.n).filter(|&p| !s.contains(p)).all(|p| self.value(s) <= self.value(s.with(p))))
    }

    /// `v(S ∪ T) >= v(S) + v(T)` for every disjoint pair, exhaustively.
    pub fn is_superadditive(&self) -> bool {
        let full = self.grand().mask();
        for s in 0..=full {
            let rest = full & !s;
            // every subset t of the complement, including the empty set
            let mut t = rest;
            loop {
                let lhs = self.values[(s | t) as usize];
                if lhs < self.values[s as usize] + self.values[t as usize] {
                    return false;
                }
                if t == 0 {
                    break;
                }
                t = (t - 1) & rest;
            }
        }
        true
    }

    pub fn is_binary(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0 || v == 1.0)
    }

    fn first_non_binary(&self) -> Option<(Coalition, f64)> {
        self.values
            .iter()
            .position(|&v| v != 0.0 && v != 1.0)
            .map(|i| (Coalition::from_mask(i as u32), self.values[i]))
    }

    /// Coalitions with positive value none of whose proper subsets has
    /// positive value, in bitmask order.
    pub fn minimal_sets(&self) -> Vec<Coalition> {
        // below[S]: some proper subset of S has positive value
        let count = coalition_count(self.n);
        let mut below = vec![false; count];
        let mut out = Vec::new();
        for mask in 0..count {
            let s = Coalition::from_mask(mask as u32);
            below[mask] = s.players().map(|p| s.without(p).index()).any(|t| below[t] || self.values[t] > 0.0);
            if self.values[mask] > 0.0 && !below[mask] {
                out.push(s);
            }
        }
        out
    }

    /// Zeroes the value at the minimal set `s`.
    pub fn truncate(&self, s: Coalition) -> Result<Game> {
        s.check(self.n)?;
        let minimal = self.minimal_sets();
        if minimal.is_empty() {
            return Err(Error::NoMinimalSet);
        }
        if !minimal.contains(&s) {
            return Err(Error::NotMinimal { coalition: s.label() });
        }
        let mut values = self.values.clone();
        values[s.index()] = 0.0;
        Ok(Game { n: self.n, values })
    }

    /// Two successive truncations, at `s` and then at `s ∪ {player}`.
    pub fn pair_truncate(&self, s: Coalition, player: usize) -> Result<Game> {
        self.check_player(player)?;
        s.check(self.n)?;
        if s.contains(player) {
            return Err(Error::PlayerInCoalition { player, coalition: s.label() });
        }
        self.truncate(s)?.truncate(s.with(player))
    }

    /// Lifts this game, played by `self.n()` players, to `n_total` players.
    /// Local player `k` becomes global player `embedding[k]`; all other
    /// players are null: `v_N(S) = v_M(S ∩ M)`.
    pub fn extend(&self, n_total: usize, embedding: &[usize]) -> Result<Game> {
        check_player_count(n_total)?;
        if embedding.len() != self.n {
            return Err(Error::InvalidEmbedding(format!(
                "embedding has {} entries for a {}-player game",
                embedding.len(),
                self.n
            )));
        }
        if self.n >= n_total {
            return Err(Error::InvalidEmbedding(format!("cannot extend {} players to {n_total}", self.n)));
        }
        let mut image = 0u32;
        for &g in embedding {
            if g >= n_total || image & (1 << g) != 0 {
                return Err(Error::InvalidEmbedding(format!("{embedding:?}")));
            }
            image |= 1 << g;
        }
        Game::from_fn(n_total, |s| {
            let local = embedding
                .iter()
                .enumerate()
                .filter(|&(_, &g)| s.contains(g))
                .fold(0u32, |m, (k, _)| m | (1 << k));
            self.values[local as usize]
        })
    }
}

impl Index<Coalition> for Game {
    type Output = f64;

    fn index(&self, s: Coalition) -> &f64 {
        &self.values[s.index()]
    }
}

/// The binary probe games used to pin down the structure of reasonable
/// allocations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProbeKind {
    /// `v(T) = 1` iff `m ∈ T`.
    Carrier,
    /// `v(T) = 1` iff `S ⊆ T` (unanimity game of `S`).
    Unanimity,
    /// `v(T) = 1` iff `S ⊊ T ∖ {i}`.
    PairTruncated,
    /// `v(T) = 1` iff `S ⊊ T`.
    Truncated,
}

impl ProbeKind {
    pub fn name(self) -> &'static str {
        match self {
            ProbeKind::Carrier => "carrier",
            ProbeKind::Unanimity => "vSa",
            ProbeKind::PairTruncated => "vSb",
            ProbeKind::Truncated => "vSc",
        }
    }
}

/// Builds a probe game. `player` is the carrier `m` for [`ProbeKind::Carrier`]
/// and the designated `i ∉ S` otherwise (required for `PairTruncated`).
pub fn build_probe_game(kind: ProbeKind, n: usize, s: Coalition, player: Option<usize>) -> Result<Game> {
    check_player_count(n)?;
    if let Some(p) = player {
        if p >= n {
            return Err(Error::PlayerOutOfRange { player: p, n });
        }
    }
    let indicator = |pred: bool| if pred { 1.0 } else { 0.0 };
    if kind == ProbeKind::Carrier {
        let m = player.ok_or_else(|| Error::InvalidProbe("carrier game needs a player".into()))?;
        return Game::from_fn(n, |t| indicator(t.contains(m)));
    }
    s.check(n)?;
    if s.is_empty() {
        return Err(Error::InvalidProbe(format!("{} needs a nonempty coalition", kind.name())));
    }
    if let Some(p) = player {
        if s.contains(p) {
            return Err(Error::PlayerInCoalition { player: p, coalition: s.label() });
        }
    }
    match kind {
        ProbeKind::Unanimity => Game::from_fn(n, |t| indicator(s.is_subset_of(t))),
        ProbeKind::Truncated => Game::from_fn(n, |t| indicator(s.is_proper_subset_of(t))),
        ProbeKind::PairTruncated => {
            let i = player.ok_or_else(|| Error::InvalidProbe("vSb needs a designated player".into()))?;
            Game::from_fn(n, |t| indicator(s.is_proper_subset_of(t.without(i))))
        }
        ProbeKind::Carrier => unreachable!(),
    }
}

/// Largest player count accepted by [`enumerate_monotone_binary_games`].
pub const MAX_ENUMERATION_PLAYERS: usize = 4;

/// Every monotone 0/1 game with `v(∅) = 0`, ordered by the integer whose
/// bit `S` is `v(S)`.
pub fn enumerate_monotone_binary_games(n: usize) -> Result<Vec<Game>> {
    check_player_count(n)?;
    if n > MAX_ENUMERATION_PLAYERS {
        return Err(Error::SizeLimit {
            what: "player count for enumeration",
            value: n,
            limit: MAX_ENUMERATION_PLAYERS,
        });
    }
    // Truth tables of monotone functions on k variables. A function on k+1
    // variables splits into (f0, f1) on the halves without/with the top
    // player; it is monotone iff both halves are and f0 <= f1 pointwise.
    let mut tables: Vec<u64> = vec![0b0, 0b1];
    for k in 0..n {
        let half = 1u32 << k;
        let mut next = Vec::new();
        for &f0 in &tables {
            for &f1 in &tables {
                if f0 & !f1 == 0 {
                    next.push(f0 | (f1 << half));
                }
            }
        }
        tables = next;
    }
    tables.retain(|t| t & 1 == 0);
    tables.sort_unstable();
    tables.into_iter().map(|t| Game::from_fn(n, |s| ((t >> s.mask()) & 1) as f64)).collect()
}

/// One term of a spanning decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct SpanTerm {
    pub coefficient: i64,
    /// Coalition generating the term; the term game is its unanimity game,
    /// or the input itself when the input is already superadditive.
    pub generator: Option<Coalition>,
    pub game: Game,
}

/// Writes a monotone 0/1 game with `v(∅) = 0` as an integer combination of
/// superadditive 0/1 games.
///
/// Already-superadditive input is returned as the single term `(+1, v)`.
/// Otherwise the residual is scanned by increasing cardinality (ties by
/// lowest mask); wherever the running sum disagrees with `v` at `T`, the
/// difference times the unanimity game of `T` is added. Unanimity games are
/// the upward closures of set chains started at `T`, and each is superadditive.
pub fn span_decompose_monotone_binary(v: &Game) -> Result<Vec<SpanTerm>> {
    if let Some((s, value)) = v.first_non_binary() {
        return Err(Error::NotBinary { coalition: s.label(), value });
    }
    if !v.is_monotone() {
        return Err(Error::NotMonotone);
    }
    if v.value(Coalition::EMPTY) != 0.0 {
        return Err(Error::NonzeroEmptyValue(v.value(Coalition::EMPTY)));
    }
    if v.values().iter().all(|&x| x == 0.0) {
        return Ok(Vec::new());
    }
    if v.is_superadditive() {
        return Ok(vec![SpanTerm { coefficient: 1, generator: None, game: v.clone() }]);
    }

    let n = v.n();
    let target: Vec<i64> = v.values().iter().map(|&x| x as i64).collect();
    let mut sum = vec![0i64; coalition_count(n)];
    let mut order: Vec<Coalition> = Coalition::all(n).skip(1).collect();
    order.sort_by_key(|s| (s.len(), s.mask()));

    let mut terms = Vec::new();
    for t in order {
        let diff = target[t.index()] - sum[t.index()];
        if diff == 0 {
            continue;
        }
        for u in Coalition::all(n).filter(|u| t.is_subset_of(*u)) {
            sum[u.index()] += diff;
        }
        terms.push(SpanTerm {
            coefficient: diff,
            generator: Some(t),
            game: build_probe_game(ProbeKind::Unanimity, n, t, None)?,
        });
    }
    debug_assert_eq!(sum, target);
    Ok(terms)
}
