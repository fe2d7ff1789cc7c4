//! Orders of products of elements of `S = { p q : p ≠ q ∈ D, [p, q] = 1 }`.
//!
//! `S` should be a 6-transposition set: every product of two of its elements
//! has order at most 6.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::phi::{realize, GroupSpec};
use crate::transpositions::{class_representatives, matrix_of};

pub const MAX_ALLOWED_ORDER: u32 = 6;
/// Orders are computed up to this cap; anything beyond is a violation.
const ORDER_CAP: u32 = 60;
const MAX_LISTED_VIOLATIONS: usize = 20;
pub const DEFAULT_PAIR_BUDGET: u64 = 5_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub first: usize,
    pub second: usize,
    /// `None` when the order exceeds the computation cap.
    pub order: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NortonReport {
    pub spec: GroupSpec,
    pub class_size: usize,
    /// Distinct products `p q`.
    pub s_size: usize,
    pub pairs_tested: u64,
    pub exhaustive: bool,
    pub max_order_seen: u32,
    pub histogram: BTreeMap<u32, u64>,
    pub violation_count: u64,
    /// The first few violations, in index order.
    pub violations: Vec<Violation>,
}

impl NortonReport {
    pub fn holds(&self) -> bool {
        self.violation_count == 0
    }
}

/// The set `S` as matrices, sorted.
pub fn commuting_products(spec: GroupSpec) -> Result<Vec<Matrix>> {
    let (space, class) = realize(spec)?;
    let reps = class_representatives(&space, class)?;
    let mats: Vec<Matrix> = reps.iter().map(|v| matrix_of(&space, class, v)).collect::<Result<_>>()?;
    let mut set = BTreeSet::new();
    for i in 0..reps.len() {
        for j in i + 1..reps.len() {
            if space.bilinear(&reps[i], &reps[j])?.is_zero() {
                let s = mats[i].mul(&mats[j]);
                if !s.mul(&s).is_identity() || s.is_identity() {
                    return Err(Error::Contract(format!(
                        "product of commuting transpositions {i}, {j} is not an involution"
                    )));
                }
                set.insert(s);
            }
        }
    }
    Ok(set.into_iter().collect())
}

struct Tally {
    pairs: u64,
    max_order: u32,
    histogram: BTreeMap<u32, u64>,
    violation_count: u64,
    violations: Vec<Violation>,
}

impl Tally {
    fn new() -> Self {
        Tally { pairs: 0, max_order: 0, histogram: BTreeMap::new(), violation_count: 0, violations: Vec::new() }
    }

    fn record(&mut self, i: usize, j: usize, order: Option<u32>) {
        self.pairs += 1;
        // orders past the cap are filed under cap + 1
        let key = order.unwrap_or(ORDER_CAP + 1);
        self.max_order = self.max_order.max(key);
        *self.histogram.entry(key).or_default() += 1;
        if order.is_none_or(|o| o > MAX_ALLOWED_ORDER) {
            self.violation_count += 1;
            if self.violations.len() < MAX_LISTED_VIOLATIONS {
                self.violations.push(Violation { first: i, second: j, order });
            }
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.pairs += other.pairs;
        self.max_order = self.max_order.max(other.max_order);
        for (k, v) in other.histogram {
            *self.histogram.entry(k).or_default() += v;
        }
        self.violation_count += other.violation_count;
        self.violations.extend(other.violations);
        self.violations.truncate(MAX_LISTED_VIOLATIONS);
        self
    }
}

fn order_of(m: &Matrix) -> Result<Option<u32>> {
    match m.order(ORDER_CAP) {
        Ok(o) => Ok(Some(o)),
        Err(Error::OrderCapExceeded { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Tests pairs `(s, t)` with `s ≤ t` in `S`. Exhaustive when the number of
/// such pairs is within `budget`; otherwise each `s` gets an equal share of
/// partners drawn from a generator seeded with `seed` and the row index, so
/// the result does not depend on scheduling.
pub fn norton_check(spec: GroupSpec, budget: u64, seed: u64) -> Result<NortonReport> {
    if !spec.is_classical() {
        return Err(Error::Unsupported(format!("{spec} has no form space to enumerate")));
    }
    let (space, class) = realize(spec)?;
    let class_size = class_representatives(&space, class)?.len();
    let s = commuting_products(spec)?;
    let n = s.len();
    let total = (n as u64) * (n as u64 + 1) / 2;
    let exhaustive = total <= budget;
    let per_row = if n == 0 { 0 } else { (budget / n as u64).max(1) };
    let rows: Vec<Result<Tally>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut t = Tally::new();
            if exhaustive {
                for j in i..n {
                    t.record(i, j, order_of(&s[i].mul(&s[j]))?);
                }
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
                for _ in 0..per_row {
                    let j = rng.random_range(i..n);
                    t.record(i, j, order_of(&s[i].mul(&s[j]))?);
                }
            }
            Ok(t)
        })
        .collect();
    let mut tally = Tally::new();
    for r in rows {
        tally = tally.merge(r?);
    }
    Ok(NortonReport {
        spec,
        class_size,
        s_size: n,
        pairs_tested: tally.pairs,
        exhaustive,
        max_order_seen: tally.max_order,
        histogram: tally.histogram,
        violation_count: tally.violation_count,
        violations: tally.violations,
    })
}
