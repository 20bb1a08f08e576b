//! Writing a reasonable, efficient allocation as a convex combination of
//! special allocations, and checking such certificates.
//!
//! The residual `R = A − Σ ε_k S^{π_k}` is a flow on the subset lattice:
//! entry `R[j, M]` for `j ∉ M` is flow leaving `M` towards `M ∪ {j}`, and its
//! pair `R[j, M ∪ {j}]` is the same flow arriving. Interior column sums of
//! zero are conservation. Peeling follows the heaviest outgoing edge from
//! `∅` to `N` and removes the bottleneck amount, which zeroes at least one
//! edge per step.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use rand::seq::index;
use rand_distr::{Distribution, Exp1};
use thiserror::Error;

use crate::allocation::{special_allocation, AllocationMatrix};
use crate::check::{check_efficiency, check_reasonable_structural, Bound, CheckReport, Violation};
use crate::coalition::{check_player_count, coalition_count, Coalition, SetChain};
use crate::error::Error;
use crate::sample::rng_from_seed;

/// Largest player count for [`random_allocation`].
pub const MAX_RANDOM_PLAYERS: usize = 8;
/// Largest player count for [`exhaustive_decompose`].
pub const MAX_EXHAUSTIVE_PLAYERS: usize = 3;

#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionTerm {
    pub chain: SetChain,
    pub weight: f64,
}

/// Weights on permutations; a certificate that `Σ w_k S^{π_k}` equals some matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub n: usize,
    pub terms: Vec<DecompositionTerm>,
}

impl Decomposition {
    pub fn total_weight(&self) -> f64 {
        self.terms.iter().map(|t| t.weight).sum()
    }

    pub fn reconstruct(&self) -> Result<AllocationMatrix, Error> {
        let mut a = AllocationMatrix::zeros(self.n)?;
        for t in &self.terms {
            a.add_special(&t.chain, t.weight)?;
        }
        Ok(a)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PeelStep {
    pub chain: SetChain,
    pub epsilon: f64,
    /// Largest absolute residual entry after this step.
    pub residual_max_abs: f64,
    /// Sum of absolute residual entries after this step.
    pub residual_l1: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct PeelTrace {
    pub steps: Vec<PeelStep>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecomposeError {
    #[error("matrix is not a reasonable, efficient allocation: failed {}", failed_names(.failed))]
    Precondition { failed: Vec<CheckReport> },
    #[error("no outgoing edge below -tol from column {column} at step {step}")]
    ChainBroken { step: usize, column: String },
    #[error("paired entries disagree at step {step}: +{positive} vs -{negative}")]
    PairingDrift { step: usize, positive: f64, negative: f64 },
    #[error("exceeded {limit} peeling steps")]
    StepLimit { limit: usize },
    #[error(transparent)]
    Input(#[from] Error),
}

fn failed_names(reports: &[CheckReport]) -> String {
    reports.iter().map(|r| r.name.as_str()).collect::<Vec<_>>().join(", ")
}

/// Upper bound on peeling steps for `n` players.
pub fn step_limit(n: usize) -> usize {
    n * coalition_count(n)
}

/// Chain peeling. Requires `a` to pass [`check_efficiency`] and
/// [`check_reasonable_structural`] at `tol`; the result reconstructs `a`
/// to within `10·tol`.
pub fn peel_decompose(a: &AllocationMatrix, tol: f64) -> Result<(Decomposition, PeelTrace), DecomposeError> {
    let failed: Vec<CheckReport> = [check_efficiency(a, tol), check_reasonable_structural(a, tol)]
        .into_iter()
        .filter(|r| !r.pass)
        .collect();
    if !failed.is_empty() {
        return Err(DecomposeError::Precondition { failed });
    }

    let n = a.n();
    let limit = step_limit(n);
    let mut residual = a.clone();
    let mut weights: BTreeMap<SetChain, f64> = BTreeMap::new();
    let mut first_seen: Vec<SetChain> = Vec::new();
    let mut trace = PeelTrace::default();

    'peel: while residual.max_abs() > tol {
        let step = trace.steps.len();
        if step >= limit {
            return Err(DecomposeError::StepLimit { limit });
        }

        let mut order = Vec::with_capacity(n);
        let mut current = Coalition::EMPTY;
        for _ in 0..n {
            let (j, value) = (0..n)
                .filter(|&j| !current.contains(j))
                .map(|j| (j, residual.get(j, current)))
                .fold((usize::MAX, f64::INFINITY), |best, cand| if cand.1 < best.1 { cand } else { best });
            if value >= -tol {
                // leftovers of accumulated rounding, not a flow
                if residual.max_abs() <= 10.0 * tol {
                    break 'peel;
                }
                return Err(DecomposeError::ChainBroken { step, column: current.label() });
            }
            order.push(j);
            current = current.with(j);
        }
        let chain = SetChain::new(order)?;

        let (mut positive, mut negative) = (f64::INFINITY, f64::INFINITY);
        for (j, pair) in chain.nonzeros().chunks(2).map(|c| (c[0].0, [c[0].1, c[1].1])) {
            negative = negative.min(-residual.get(j, pair[0]));
            positive = positive.min(residual.get(j, pair[1]));
        }
        if positive <= 0.0 || (positive - negative).abs() > 10.0 * tol {
            return Err(DecomposeError::PairingDrift { step, positive, negative });
        }
        let epsilon = positive;
        residual.add_special(&chain, -epsilon)?;

        if !weights.contains_key(&chain) {
            first_seen.push(chain.clone());
        }
        *weights.entry(chain.clone()).or_insert(0.0) += epsilon;
        trace.steps.push(PeelStep {
            chain,
            epsilon,
            residual_max_abs: residual.max_abs(),
            residual_l1: residual.l1_norm(),
        });
    }

    let terms = first_seen
        .into_iter()
        .map(|chain| {
            let weight = weights[&chain];
            DecompositionTerm { chain, weight }
        })
        .collect();
    Ok((Decomposition { n, terms }, trace))
}

/// Checks that the weights are nonnegative, sum to one, and reconstruct `a`
/// entrywise, all within `tol`.
pub fn verify_decomposition(a: &AllocationMatrix, d: &Decomposition, tol: f64) -> CheckReport {
    let mut violations = Vec::new();
    let mut push = |rule, player, coalition, observed, required| {
        violations.push(Violation { rule, player, coalition, observed, required, tolerance: tol })
    };
    let bad_chain = d.terms.iter().find(|t| t.chain.n() != d.n);
    if d.n != a.n() || bad_chain.is_some() {
        let observed = bad_chain.map_or(d.n, |t| t.chain.n());
        push("dimension", None, None, observed as f64, Bound::Equal(a.n() as f64));
        return CheckReport::new("decomposition", violations);
    }

    for t in &d.terms {
        if !Bound::AtLeast(0.0).holds(t.weight, tol) {
            push("weight_nonnegative", None, None, t.weight, Bound::AtLeast(0.0));
        }
    }
    let mut chains: Vec<&SetChain> = d.terms.iter().map(|t| &t.chain).collect();
    chains.sort();
    let before = chains.len();
    chains.dedup();
    if chains.len() != before {
        push("distinct_permutations", None, None, chains.len() as f64, Bound::Equal(before as f64));
    }
    let total = d.total_weight();
    if !Bound::Equal(1.0).holds(total, tol) {
        push("weight_sum", None, None, total, Bound::Equal(1.0));
    }
    let rebuilt = d.reconstruct().expect("dimensions checked above");
    for i in 0..a.n() {
        for s in Coalition::all(a.n()) {
            let (got, want) = (rebuilt.get(i, s), a.get(i, s));
            if (got - want).abs() > tol {
                push("reconstruction", Some(i), Some(s), got, Bound::Equal(want));
            }
        }
    }
    CheckReport::new("decomposition", violations)
}

/// A random point of the polytope together with the certificate that generated it:
/// `support_size` distinct permutations, weights from normalized exponential draws.
pub fn random_allocation(
    n: usize,
    support_size: usize,
    seed: u64,
) -> Result<(AllocationMatrix, Decomposition), Error> {
    check_player_count(n)?;
    if n > MAX_RANDOM_PLAYERS {
        return Err(Error::SizeLimit {
            what: "player count for random allocations",
            value: n,
            limit: MAX_RANDOM_PLAYERS,
        });
    }
    let perms: usize = (1..=n).product();
    if support_size == 0 || support_size > perms {
        return Err(Error::SizeLimit { what: "support size", value: support_size, limit: perms });
    }
    let mut rng = rng_from_seed(seed);
    let ranks = index::sample(&mut rng, perms, support_size);
    let draws: Vec<f64> = (0..support_size).map(|_| Exp1.sample(&mut rng)).collect();
    let total: f64 = draws.iter().sum();
    let terms: Vec<DecompositionTerm> = ranks
        .iter()
        .zip(draws)
        .map(|(r, w)| DecompositionTerm { chain: SetChain::unrank(n, r), weight: w / total })
        .collect();
    let d = Decomposition { n, terms };
    Ok((d.reconstruct()?, d))
}

/// Least-squares fit over every support of special allocations, keeping
/// only nonnegative solutions; returns the best certificate and its max-abs
/// residual. Weights are not forced to sum to one; for efficient input the
/// column `∅` forces it. Exponential in `n!`, so limited to three players.
pub fn exhaustive_decompose(a: &AllocationMatrix) -> Result<(Decomposition, f64), Error> {
    let n = a.n();
    if n > MAX_EXHAUSTIVE_PLAYERS {
        return Err(Error::SizeLimit {
            what: "player count for exhaustive decomposition",
            value: n,
            limit: MAX_EXHAUSTIVE_PLAYERS,
        });
    }
    let chains = SetChain::all(n)?;
    let columns: Vec<Vec<f64>> = chains.iter().map(|c| special_allocation(c).entries().to_vec()).collect();
    let rows = a.entries().len();
    let target = DVector::from_column_slice(a.entries());

    let mut best: Option<(Decomposition, f64)> = None;
    for subset in 1u32..(1 << chains.len()) {
        let support: Vec<usize> = (0..chains.len()).filter(|k| subset & (1 << k) != 0).collect();
        let m = DMatrix::from_fn(rows, support.len(), |r, c| columns[support[c]][r]);
        let Ok(w) = m.clone().svd(true, true).solve(&target, 1e-12) else {
            continue;
        };
        if w.iter().any(|&x| x < -1e-12) {
            continue;
        }
        let residual = (&m * &w - &target).amax();
        let better = match &best {
            None => true,
            Some((d, r)) => residual < r - 1e-12 || (residual <= r + 1e-12 && support.len() < d.terms.len()),
        };
        if better {
            let terms = support
                .iter()
                .zip(w.iter())
                .map(|(&k, &weight)| DecompositionTerm { chain: chains[k].clone(), weight: weight.max(0.0) })
                .collect();
            best = Some((Decomposition { n, terms }, residual));
        }
    }
    Ok(best.expect("singleton supports always yield a nonnegative fit or are skipped"))
}
