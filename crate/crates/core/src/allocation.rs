//! Linear allocation operators as dense `n × 2^n` matrices.

use std::ops::{Add, Index, Mul};

use crate::coalition::{check_player_count, coalition_count, Coalition, SetChain};
use crate::error::{Error, Result};
use crate::game::Game;

/// Largest player count for the Shapley constructors.
pub const MAX_SHAPLEY_PLAYERS: usize = 12;

/// Per-player payoffs `φ_i(N; v)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PayoffVector(pub Vec<f64>);

impl PayoffVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }
}

impl Index<usize> for PayoffVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Matrix of an allocation: `payoff_i = Σ_S A[i, S] · v(S)`. Row-major,
/// columns in bitmask order.
#[derive(Clone, Debug, PartialEq)]
pub struct AllocationMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl AllocationMatrix {
    pub fn zeros(n: usize) -> Result<Self> {
        check_player_count(n)?;
        Ok(AllocationMatrix { n, entries: vec![0.0; n * coalition_count(n)] })
    }

    pub fn from_rows(n: usize, rows: Vec<Vec<f64>>) -> Result<Self> {
        check_player_count(n)?;
        if rows.len() != n {
            return Err(Error::DimensionMismatch(format!("expected {n} rows, got {}", rows.len())));
        }
        let width = coalition_count(n);
        let mut entries = Vec::with_capacity(n * width);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != width {
                return Err(Error::DimensionMismatch(format!(
                    "row {} has {} entries, expected {width}",
                    i + 1,
                    row.len()
                )));
            }
            entries.extend(row);
        }
        if let Some(index) = entries.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(AllocationMatrix { n, entries })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn width(&self) -> usize {
        coalition_count(self.n)
    }

    #[inline]
    pub fn get(&self, player: usize, s: Coalition) -> f64 {
        self.entries[player * self.width() + s.index()]
    }

    #[inline]
    pub fn set(&mut self, player: usize, s: Coalition, value: f64) {
        let w = self.width();
        self.entries[player * w + s.index()] = value;
    }

    #[inline]
    pub fn add_to(&mut self, player: usize, s: Coalition, delta: f64) {
        let w = self.width();
        self.entries[player * w + s.index()] += delta;
    }

    pub fn row(&self, player: usize) -> &[f64] {
        let w = self.width();
        &self.entries[player * w..(player + 1) * w]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.entries.chunks(self.width())
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows().map(<[f64]>::to_vec).collect()
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn column_sum(&self, s: Coalition) -> f64 {
        (0..self.n).map(|i| self.get(i, s)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn l1_norm(&self) -> f64 {
        self.entries.iter().map(|x| x.abs()).sum()
    }

    /// Largest absolute entrywise difference; `None` on shape mismatch.
    pub fn max_abs_diff(&self, other: &AllocationMatrix) -> Option<f64> {
        (self.n == other.n)
            .then(|| self.entries.iter().zip(&other.entries).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs())))
    }

    /// `self += weight · special_allocation(chain)`, touching only its `2n` nonzeros.
    pub fn add_special(&mut self, chain: &SetChain, weight: f64) -> Result<()> {
        if chain.n() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "chain over {} players, matrix over {}",
                chain.n(),
                self.n
            )));
        }
        for (p, s, sign) in chain.nonzeros() {
            self.add_to(p, s, weight * sign);
        }
        Ok(())
    }

    /// Entrywise `t·self + (1 − t)·other`.
    pub fn convex_with(&self, other: &AllocationMatrix, t: f64) -> Result<AllocationMatrix> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!("{} vs {} players", self.n, other.n)));
        }
        Ok(self * t + &(other * (1.0 - t)))
    }
}

impl Mul<f64> for &AllocationMatrix {
    type Output = AllocationMatrix;

    fn mul(self, k: f64) -> AllocationMatrix {
        AllocationMatrix { n: self.n, entries: self.entries.iter().map(|x| x * k).collect() }
    }
}

impl Add<&AllocationMatrix> for AllocationMatrix {
    type Output = AllocationMatrix;

    /// Panics on shape mismatch, like slice indexing.
    fn add(mut self, rhs: &AllocationMatrix) -> AllocationMatrix {
        assert_eq!(self.n, rhs.n, "allocation matrices over different player counts");
        for (a, b) in self.entries.iter_mut().zip(&rhs.entries) {
            *a += b;
        }
        self
    }
}

/// The allocation paying every player its marginal contribution along `chain`.
pub fn special_allocation(chain: &SetChain) -> AllocationMatrix {
    let mut a = AllocationMatrix::zeros(chain.n()).expect("SetChain has a valid player count");
    a.add_special(chain, 1.0).expect("same player count");
    a
}

pub fn apply_allocation(a: &AllocationMatrix, v: &Game) -> Result<PayoffVector> {
    if a.n() != v.n() {
        return Err(Error::DimensionMismatch(format!(
            "allocation over {} players applied to a {}-player game",
            a.n(),
            v.n()
        )));
    }
    Ok(PayoffVector(a.rows().map(|row| row.iter().zip(v.values()).map(|(x, y)| x * y).sum()).collect()))
}

fn factorials(n: usize) -> Vec<f64> {
    let mut f = vec![1.0; n + 1];
    for k in 1..=n {
        f[k] = f[k - 1] * k as f64;
    }
    f
}

/// Weight `|S|!(n−|S|−1)!/n!` of a marginal contribution `v(S∪{i}) − v(S)`,
/// indexed by `|S|`.
fn shapley_weights(n: usize) -> Vec<f64> {
    let f = factorials(n);
    (0..n).map(|k| f[k] * f[n - k - 1] / f[n]).collect()
}

fn check_shapley_size(n: usize) -> Result<()> {
    check_player_count(n)?;
    if n > MAX_SHAPLEY_PLAYERS {
        return Err(Error::SizeLimit {
            what: "player count for the Shapley value",
            value: n,
            limit: MAX_SHAPLEY_PLAYERS,
        });
    }
    Ok(())
}

pub fn shapley_matrix(n: usize) -> Result<AllocationMatrix> {
    check_shapley_size(n)?;
    let weights = shapley_weights(n);
    let mut a = AllocationMatrix::zeros(n)?;
    for i in 0..n {
        for s in Coalition::all(n).filter(|s| !s.contains(i)) {
            let w = weights[s.len()];
            a.set(i, s.with(i), w);
            a.set(i, s, -w);
        }
    }
    Ok(a)
}

/// Shapley value computed directly from the weighted marginal contributions.
pub fn shapley_value(v: &Game) -> Result<PayoffVector> {
    let n = v.n();
    check_shapley_size(n)?;
    let weights = shapley_weights(n);
    Ok(PayoffVector(
        (0..n)
            .map(|i| {
                Coalition::all(n)
                    .filter(|s| !s.contains(i))
                    .map(|s| weights[s.len()] * (v.value(s.with(i)) - v.value(s)))
                    .sum()
            })
            .collect(),
    ))
}
