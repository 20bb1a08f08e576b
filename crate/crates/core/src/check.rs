//! Structural verifiers for allocation matrices. Each check scans the whole
//! matrix and reports every failing entry.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::allocation::AllocationMatrix;
use crate::coalition::Coalition;

pub const DEFAULT_TOL: f64 = 1e-9;

/// Requirement an observed quantity failed to meet.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Bound {
    Equal(f64),
    AtLeast(f64),
    AtMost(f64),
}

impl Bound {
    pub fn holds(self, x: f64, tol: f64) -> bool {
        match self {
            Bound::Equal(t) => (x - t).abs() <= tol,
            Bound::AtLeast(t) => x >= t - tol,
            Bound::AtMost(t) => x <= t + tol,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Equal(t) => write!(f, "= {t}"),
            Bound::AtLeast(t) => write!(f, ">= {t}"),
            Bound::AtMost(t) => write!(f, "<= {t}"),
        }
    }
}

fn one_based<S: Serializer>(p: &Option<usize>, s: S) -> Result<S::Ok, S::Error> {
    match p {
        Some(p) => s.serialize_some(&(p + 1)),
        None => s.serialize_none(),
    }
}

fn label<S: Serializer>(c: &Option<Coalition>, s: S) -> Result<S::Ok, S::Error> {
    match c {
        Some(c) => s.serialize_some(&c.label()),
        None => s.serialize_none(),
    }
}

/// One failing quantity. `player` is 0-based in memory and 1-based when serialized.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub rule: &'static str,
    #[serde(serialize_with = "one_based")]
    pub player: Option<usize>,
    #[serde(serialize_with = "label")]
    pub coalition: Option<Coalition>,
    pub observed: f64,
    pub required: Bound,
    pub tolerance: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.rule)?;
        if let Some(p) = self.player {
            write!(f, " player {}", p + 1)?;
        }
        if let Some(c) = self.coalition {
            write!(f, " column {c}")?;
        }
        write!(f, " observed {} required {} (tol {})", self.observed, self.required, self.tolerance)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub pass: bool,
    pub violations: Vec<Violation>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>, violations: Vec<Violation>) -> Self {
        CheckReport { name: name.into(), pass: violations.is_empty(), violations }
    }

    pub fn violations_of(&self, rule: &str) -> impl Iterator<Item = &Violation> {
        let rule = rule.to_owned();
        self.violations.iter().filter(move |v| v.rule == rule)
    }
}

struct Collector {
    tol: f64,
    out: Vec<Violation>,
}

impl Collector {
    fn new(tol: f64) -> Self {
        Collector { tol, out: Vec::new() }
    }

    fn require(
        &mut self,
        rule: &'static str,
        player: Option<usize>,
        coalition: Option<Coalition>,
        observed: f64,
        required: Bound,
    ) {
        if !required.holds(observed, self.tol) {
            self.out.push(Violation { rule, player, coalition, observed, required, tolerance: self.tol });
        }
    }
}

/// Column sums must be −1 at `∅`, +1 at `N` and 0 elsewhere, which is the
/// same as `Σ_i φ_i(v) = v(N) − v(∅)` for every game.
pub fn check_efficiency(a: &AllocationMatrix, tol: f64) -> CheckReport {
    let n = a.n();
    let full = Coalition::full(n);
    let mut c = Collector::new(tol);
    for s in Coalition::all(n) {
        let target = if s.is_empty() {
            -1.0
        } else if s == full {
            1.0
        } else {
            0.0
        };
        c.require("column_sum", None, Some(s), a.column_sum(s), Bound::Equal(target));
    }
    CheckReport::new("efficiency", c.out)
}

/// Sign, pairing and partial-row-sum conditions; together they are
/// equivalent to reasonableness. All three are evaluated in full.
pub fn check_reasonable_structural(a: &AllocationMatrix, tol: f64) -> CheckReport {
    let n = a.n();
    let mut c = Collector::new(tol);
    for i in 0..n {
        for s in Coalition::all(n) {
            let bound = if s.contains(i) { Bound::AtLeast(0.0) } else { Bound::AtMost(0.0) };
            c.require("sign", Some(i), Some(s), a.get(i, s), bound);
        }
    }
    for i in 0..n {
        for t in Coalition::all(n).filter(|t| !t.contains(i)) {
            let sum = a.get(i, t) + a.get(i, t.with(i));
            c.require("pairing", Some(i), Some(t), sum, Bound::Equal(0.0));
        }
    }
    for i in 0..n {
        let partial: f64 = Coalition::all(n).filter(|s| s.contains(i)).map(|s| a.get(i, s)).sum();
        c.require("partial_row_sum", Some(i), None, partial, Bound::Equal(1.0));
    }
    CheckReport::new("reasonable_structural", c.out)
}

/// Every row and every interior column (neither `∅` nor `N`) has
/// absolute-value sum 2.
///
/// The row condition holds for every reasonable, efficient matrix. The
/// column condition does not: it already fails on special allocations,
/// whose columns off the chain are zero. See [`check_level_abs_sums`] for
/// the per-cardinality form that does hold.
pub fn check_abs_sums(a: &AllocationMatrix, tol: f64) -> CheckReport {
    let n = a.n();
    let full = Coalition::full(n);
    let mut c = Collector::new(tol);
    for (i, row) in a.rows().enumerate() {
        let s: f64 = row.iter().map(|x| x.abs()).sum();
        c.require("row_abs_sum", Some(i), None, s, Bound::Equal(2.0));
    }
    for s in Coalition::all(n).filter(|&s| !s.is_empty() && s != full) {
        let sum: f64 = (0..n).map(|i| a.get(i, s).abs()).sum();
        c.require("column_abs_sum", None, Some(s), sum, Bound::Equal(2.0));
    }
    CheckReport::new("abs_sums", c.out)
}

/// For each cardinality `1 <= k < n`, the absolute values of all entries in
/// columns of size `k` sum to 2: one unit of mass leaves level `k` and one
/// arrives there.
pub fn check_level_abs_sums(a: &AllocationMatrix, tol: f64) -> CheckReport {
    let n = a.n();
    let mut c = Collector::new(tol);
    for k in 1..n {
        let sum: f64 = Coalition::all(n)
            .filter(|s| s.len() == k)
            .flat_map(|s| (0..n).map(move |i| (i, s)))
            .map(|(i, s)| a.get(i, s).abs())
            .sum();
        c.require("level_abs_sum", None, None, sum, Bound::Equal(2.0));
    }
    CheckReport::new("level_abs_sums", c.out)
}

pub fn check_row_sums_zero(a: &AllocationMatrix, tol: f64) -> CheckReport {
    let mut c = Collector::new(tol);
    for (i, row) in a.rows().enumerate() {
        c.require("row_sum", Some(i), None, row.iter().sum(), Bound::Equal(0.0));
    }
    CheckReport::new("row_sums_zero", c.out)
}
