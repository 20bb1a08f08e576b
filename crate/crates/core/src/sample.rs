//! Seeded random games.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::coalition::{check_player_count, coalition_count, Coalition};
use crate::error::Result;
use crate::game::Game;

/// The generator behind every seeded routine in the crate.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform `[0, 1)` draws, `v(∅) = 0`, then `v(S) ← max_{T ⊆ S} v(T)`.
pub fn random_monotone_game<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Game> {
    check_player_count(n)?;
    let count = coalition_count(n);
    let mut values: Vec<f64> = (0..count).map(|_| rng.gen::<f64>()).collect();
    values[0] = 0.0;
    // subsets of S have smaller masks, so one pass over the covers suffices
    for mask in 1..count {
        let s = Coalition::from_mask(mask as u32);
        let below = s.players().map(|p| values[s.without(p).index()]).fold(0.0, f64::max);
        values[mask] = values[mask].max(below);
    }
    Game::new(n, values)
}

/// Superadditive cover of random nonnegative weights: `v(S)` is the best
/// total weight over partitions of `S`. About a third of the base weights
/// are zero so that minimal coalitions vary in size.
pub fn random_superadditive_game<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Game> {
    check_player_count(n)?;
    let count = coalition_count(n);
    let mut values: Vec<f64> =
        (0..count).map(|_| if rng.gen_bool(1.0 / 3.0) { 0.0 } else { rng.gen::<f64>() }).collect();
    values[0] = 0.0;
    for mask in 1..count as u32 {
        let low = mask & mask.wrapping_neg();
        let rest = mask & !low;
        // blocks containing the lowest member of S, excluding S itself
        let mut sub = rest;
        loop {
            let block = low | sub;
            if block != mask {
                let split = values[block as usize] + values[(mask & !block) as usize];
                if split > values[mask as usize] {
                    values[mask as usize] = split;
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    Game::new(n, values)
}
