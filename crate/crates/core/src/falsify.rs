//! Searching for games on which an allocation pays some player outside the
//! range of its own marginal contributions.

use std::fmt;
use std::str::FromStr;

use crate::allocation::{apply_allocation, AllocationMatrix};
use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::game::{build_probe_game, enumerate_monotone_binary_games, Game, ProbeKind};
use crate::sample::{random_monotone_game, rng_from_seed};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sampler {
    /// Seeded random monotone games.
    MonotoneRandom,
    /// Carrier games plus `vSa`, `vSb`, `vSc` for every nonempty `S` and `i ∉ S`.
    SuperadditiveProbes,
    /// Every monotone 0/1 game with `v(∅) = 0` (at most 4 players).
    BinaryExhaustive,
}

impl Sampler {
    pub const ALL: [Sampler; 3] =
        [Sampler::MonotoneRandom, Sampler::SuperadditiveProbes, Sampler::BinaryExhaustive];

    pub fn name(self) -> &'static str {
        match self {
            Sampler::MonotoneRandom => "monotone_random",
            Sampler::SuperadditiveProbes => "superadditive_probes",
            Sampler::BinaryExhaustive => "binary_exhaustive",
        }
    }
}

impl fmt::Display for Sampler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Sampler {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "monotone_random" => Ok(Sampler::MonotoneRandom),
            "superadditive_probes" => Ok(Sampler::SuperadditiveProbes),
            "binary_exhaustive" => Ok(Sampler::BinaryExhaustive),
            _ => Err(Error::Parse(format!("unknown sampler {s:?}"))),
        }
    }
}

/// A game on which `player`'s payoff leaves `[lower, upper]`, the range of
/// its marginal contributions.
#[derive(Clone, Debug, PartialEq)]
pub struct ReasonablenessViolation {
    pub sampler: Sampler,
    /// Position of the game in the sampler's sequence.
    pub game_index: usize,
    pub game_label: String,
    pub game: Game,
    pub player: usize,
    pub observed: f64,
    pub lower: f64,
    pub upper: f64,
}

impl fmt::Display for ReasonablenessViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} game #{} ({}): player {} receives {} outside [{}, {}]",
            self.sampler,
            self.game_index,
            self.game_label,
            self.player + 1,
            self.observed,
            self.lower,
            self.upper
        )
    }
}

/// First player whose payoff under `a` violates its marginal-contribution bounds on `v`.
pub fn bound_violation(a: &AllocationMatrix, v: &Game, tol: f64) -> Result<Option<(usize, f64, f64, f64)>> {
    let payoffs = apply_allocation(a, v)?;
    for i in 0..v.n() {
        let (lo, hi) = v.marginal_range(i)?;
        let x = payoffs[i];
        if x < lo - tol || x > hi + tol {
            return Ok(Some((i, x, lo, hi)));
        }
    }
    Ok(None)
}

/// The probe sequence used by [`Sampler::SuperadditiveProbes`]: coalitions
/// from largest to smallest (ties by mask), and for each `S` the games
/// `vSa`, then `vSb` for every `i ∉ S`, then `vSc`. For singletons `vSa` is
/// the carrier game of that player.
pub fn superadditive_probe_family(n: usize) -> Result<Vec<(String, Game)>> {
    let mut sets: Vec<Coalition> = Coalition::all(n).skip(1).collect();
    sets.sort_by_key(|s| (std::cmp::Reverse(s.len()), s.mask()));
    let mut out = Vec::new();
    for s in sets {
        if s.len() == 1 {
            let m = s.players().next().expect("singleton");
            out.push((
                format!("carrier m={}", m + 1),
                build_probe_game(ProbeKind::Carrier, n, Coalition::EMPTY, Some(m))?,
            ));
        } else {
            out.push((format!("vSa S={s}"), build_probe_game(ProbeKind::Unanimity, n, s, None)?));
        }
        for i in (0..n).filter(|&i| !s.contains(i)) {
            out.push((
                format!("vSb S={s} i={}", i + 1),
                build_probe_game(ProbeKind::PairTruncated, n, s, Some(i))?,
            ));
        }
        out.push((format!("vSc S={s}"), build_probe_game(ProbeKind::Truncated, n, s, None)?));
    }
    Ok(out)
}

/// Returns the first game of the chosen family on which `a` is not
/// reasonable, or `None`. `trials` is the number of random games for
/// [`Sampler::MonotoneRandom`]; the other families are scanned in full.
pub fn sample_reasonableness_violation(
    a: &AllocationMatrix,
    sampler: Sampler,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<Option<ReasonablenessViolation>> {
    if trials == 0 {
        return Err(Error::Parse("trials must be at least 1".into()));
    }
    let n = a.n();
    let found = |index: usize, label: String, game: &Game| -> Result<Option<ReasonablenessViolation>> {
        Ok(bound_violation(a, game, tol)?.map(|(player, observed, lower, upper)| ReasonablenessViolation {
            sampler,
            game_index: index,
            game_label: label,
            game: game.clone(),
            player,
            observed,
            lower,
            upper,
        }))
    };
    match sampler {
        Sampler::MonotoneRandom => {
            let mut rng = rng_from_seed(seed);
            for t in 0..trials {
                let v = random_monotone_game(n, &mut rng)?;
                if let Some(hit) = found(t, format!("random monotone #{t}"), &v)? {
                    return Ok(Some(hit));
                }
            }
        }
        Sampler::SuperadditiveProbes => {
            for (k, (label, v)) in superadditive_probe_family(n)?.into_iter().enumerate() {
                if let Some(hit) = found(k, label, &v)? {
                    return Ok(Some(hit));
                }
            }
        }
        Sampler::BinaryExhaustive => {
            for (k, v) in enumerate_monotone_binary_games(n)?.iter().enumerate() {
                if let Some(hit) = found(k, format!("monotone binary #{k}"), v)? {
                    return Ok(Some(hit));
                }
            }
        }
    }
    Ok(None)
}
