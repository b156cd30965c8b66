//! Step-size sets, distinctness and separation checks, and the Conway–Guy
//! construction.

mod bitset;
mod conway_guy;
pub mod io;

use std::borrow::Cow;

use num_bigint::BigUint;

pub(crate) use bitset::ReachableSums;
pub use conway_guy::{conway_guy, conway_guy_sequence, MAX_CONWAY_GUY_LEN};

use crate::error::check_capacity;
use crate::{Error, Result};

/// Largest subset-sum total handled by the dense bit-array routes.
pub const MAX_BITSET_TOTAL: u128 = 1 << 32;
/// Largest cardinality for [`check_distinct`].
pub const MAX_DISTINCT_CHECK_LEN: usize = 32;
/// Largest cardinality for full enumeration in [`separation`].
pub const MAX_SEPARATION_LEN: usize = 26;

/// Strictly increasing positive integers `a₁ < … < aₙ` with exact `Σaᵢ` and
/// `Σaᵢ²`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegerSet {
    elements: Vec<u64>,
    total: u128,
    sum_sq: BigUint,
}

impl IntegerSet {
    pub fn new(elements: Vec<u64>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidSet("set must be nonempty".into()));
        }
        if elements[0] == 0 {
            return Err(Error::InvalidSet("elements must be positive".into()));
        }
        if let Some(w) = elements.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSet(format!(
                "elements must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        let total = elements.iter().map(|&a| a as u128).sum();
        let sum_sq = elements
            .iter()
            .map(|&a| BigUint::from(a as u128 * a as u128))
            .sum();
        Ok(IntegerSet {
            elements,
            total,
            sum_sq,
        })
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    /// Always false: empty sets are rejected at construction.
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `aₙ`.
    pub fn largest(&self) -> u64 {
        *self.elements.last().expect("nonempty")
    }

    /// `Σaᵢ`.
    pub fn total(&self) -> u128 {
        self.total
    }

    /// `Σaᵢ²`, the variance of the signed walk.
    pub fn sum_sq(&self) -> &BigUint {
        &self.sum_sq
    }

    pub fn sum_sq_u128(&self) -> Option<u128> {
        u128::try_from(&self.sum_sq).ok()
    }

    pub fn sum_sq_f64(&self) -> f64 {
        crate::numeric::big_to_f64_scaled(&self.sum_sq, 0)
    }

    pub fn to_real(&self) -> RealSet {
        RealSet {
            elements: self.elements.iter().map(|&a| a as f64).collect(),
        }
    }
}

/// Strictly increasing positive reals.
#[derive(Clone, Debug, PartialEq)]
pub struct RealSet {
    elements: Vec<f64>,
}

impl RealSet {
    pub fn new(elements: Vec<f64>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidSet("set must be nonempty".into()));
        }
        if elements.iter().any(|a| !a.is_finite() || *a <= 0.0) {
            return Err(Error::InvalidSet(
                "elements must be finite and positive".into(),
            ));
        }
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSet(
                "elements must be strictly increasing".into(),
            ));
        }
        Ok(RealSet { elements })
    }

    pub fn elements(&self) -> &[f64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn largest(&self) -> f64 {
        *self.elements.last().expect("nonempty")
    }

    pub fn sum_sq(&self) -> f64 {
        self.elements.iter().map(|a| a * a).sum()
    }
}

/// Common view of integer and real step sets for the Fourier-side routines.
pub trait StepSet {
    fn steps(&self) -> Cow<'_, [f64]>;
    fn largest_step(&self) -> f64;
    fn variance(&self) -> f64;
    fn as_integer(&self) -> Option<&IntegerSet> {
        None
    }
}

impl StepSet for IntegerSet {
    fn steps(&self) -> Cow<'_, [f64]> {
        Cow::Owned(self.elements.iter().map(|&a| a as f64).collect())
    }
    fn largest_step(&self) -> f64 {
        self.largest() as f64
    }
    fn variance(&self) -> f64 {
        self.sum_sq_f64()
    }
    fn as_integer(&self) -> Option<&IntegerSet> {
        Some(self)
    }
}

impl StepSet for RealSet {
    fn steps(&self) -> Cow<'_, [f64]> {
        Cow::Borrowed(&self.elements)
    }
    fn largest_step(&self) -> f64 {
        self.largest()
    }
    fn variance(&self) -> f64 {
        self.sum_sq()
    }
}

/// Outcome of [`check_distinct`]. A witness is a pair of disjoint,
/// nonempty index sets (0-based) with equal element sums.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistinctnessVerdict {
    pub is_distinct: bool,
    pub witness: Option<(Vec<usize>, Vec<usize>)>,
}

impl DistinctnessVerdict {
    /// The witness as element values rather than indices.
    pub fn witness_values(&self, set: &IntegerSet) -> Option<(Vec<u64>, Vec<u64>)> {
        let pick = |idx: &[usize]| idx.iter().map(|&i| set.elements[i]).collect();
        self.witness.as_ref().map(|(l, r)| (pick(l), pick(r)))
    }
}

/// Whether all `2ⁿ` subset sums are pairwise distinct, by incremental
/// bit-array intersection.
pub fn check_distinct(set: &IntegerSet) -> Result<DistinctnessVerdict> {
    check_capacity("subset-sum total", set.total(), MAX_BITSET_TOTAL)?;
    check_capacity(
        "cardinality",
        set.len() as u128,
        MAX_DISTINCT_CHECK_LEN as u128,
    )?;
    let mut sums = ReachableSums::new(set.total() as u64);
    for (i, &a) in set.elements.iter().enumerate() {
        if let Some(value) = sums.add_element(a) {
            let witness = extract_witness(&set.elements, i, value);
            return Ok(DistinctnessVerdict {
                is_distinct: false,
                witness: Some(witness),
            });
        }
    }
    Ok(DistinctnessVerdict {
        is_distinct: true,
        witness: None,
    })
}

/// Number of distinct values among the `2ⁿ` subset sums.
pub fn count_distinct(set: &IntegerSet) -> Result<u64> {
    check_capacity("subset-sum total", set.total(), MAX_BITSET_TOTAL)?;
    let mut sums = ReachableSums::new(set.total() as u64);
    for &a in &set.elements {
        sums.add_element(a);
    }
    Ok(sums.count())
}

/// Collision found while adding `elements[pivot]`: `value` is reachable
/// without it and `value − elements[pivot]` is too.
fn extract_witness(elements: &[u64], pivot: usize, value: u64) -> (Vec<usize>, Vec<usize>) {
    let prefix = &elements[..pivot];
    let without = subset_with_sum(prefix, value);
    let mut with = subset_with_sum(prefix, value - elements[pivot]);
    with.push(pivot);
    // Common indices contribute equally to both sides.
    let left: Vec<usize> = with
        .iter()
        .copied()
        .filter(|i| !without.contains(i))
        .collect();
    let right: Vec<usize> = without
        .iter()
        .copied()
        .filter(|i| !with.contains(i))
        .collect();
    (left, right)
}

/// Indices of some subset of `elements` summing to `target`, which must be
/// reachable. Rebuilds prefix bit arrays instead of storing all of them.
fn subset_with_sum(elements: &[u64], mut target: u64) -> Vec<usize> {
    let capacity: u64 = elements.iter().sum();
    let mut chosen = Vec::new();
    let mut sums = ReachableSums::new(capacity);
    for j in (0..elements.len()).rev() {
        sums.reset(capacity);
        for &a in &elements[..j] {
            sums.add_element(a);
        }
        if !sums.contains(target) {
            target -= elements[j];
            chosen.push(j);
        }
    }
    debug_assert_eq!(target, 0);
    chosen.reverse();
    chosen
}

/// All `2ⁿ` subset sums in ascending order, built by merging each doubling
/// step so no sort is needed.
pub(crate) fn sorted_subset_sums(elements: &[f64]) -> Vec<f64> {
    let mut sums = Vec::with_capacity(1 << elements.len());
    sums.push(0.0);
    let mut merged = Vec::with_capacity(1 << elements.len());
    for &a in elements {
        merged.clear();
        let (mut i, mut j) = (0, 0);
        let len = sums.len();
        while i < len || j < len {
            let take_left = j == len || (i < len && sums[i] <= sums[j] + a);
            if take_left {
                merged.push(sums[i]);
                i += 1;
            } else {
                merged.push(sums[j] + a);
                j += 1;
            }
        }
        std::mem::swap(&mut sums, &mut merged);
    }
    sums
}

/// Minimum distance between the sums of two distinct subsets. The set is
/// 1-separated iff this is at least 1.
pub fn separation(set: &RealSet) -> Result<f64> {
    check_capacity("cardinality", set.len() as u128, MAX_SEPARATION_LEN as u128)?;
    let sums = sorted_subset_sums(&set.elements);
    Ok(sums
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min))
}
