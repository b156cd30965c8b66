//! Exact law of the signed walk `X = ±a₁ ± … ± aₙ`.
//!
//! The walk value for a subset with sum `S` is `v = 2S − Σaᵢ`, so the support
//! sits on a lattice of spacing 2 and the multiplicity table is indexed by
//! subset sum: `counts[k] = r(−Σaᵢ + 2k)`.

use std::io::{self, Write};

use crate::error::check_capacity;
use crate::numeric::{cos_2pi, KahanSum};
use crate::sets::IntegerSet;
use crate::{Error, Result};

/// Largest `Σaᵢ` for a dense spectrum.
pub const MAX_SPECTRUM_TOTAL: u128 = 1 << 31;
/// Largest cardinality (64-bit counts).
pub const MAX_SPECTRUM_LEN: usize = 64;
/// Counts are 32-bit up to this cardinality.
pub const NARROW_COUNT_MAX_LEN: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Counts {
    Narrow(Vec<u32>),
    Wide(Vec<u64>),
}

/// Multiplicity table of the signed walk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumSpectrum {
    n: usize,
    total: u64,
    counts: Counts,
}

trait CountWord: Copy + Default + std::ops::AddAssign + Into<u64> {
    const ONE: Self;
}

impl CountWord for u32 {
    const ONE: Self = 1;
}

impl CountWord for u64 {
    const ONE: Self = 1;
}

fn convolve_all<T: CountWord>(elements: &[u64], total: u64) -> Vec<T> {
    let mut counts = vec![T::default(); total as usize + 1];
    counts[0] = T::ONE;
    let mut prefix = 0usize;
    for &a in elements {
        add_shifted(&mut counts, a as usize, prefix);
        prefix += a as usize;
    }
    counts
}

/// `counts[s + a] += counts[s]` for `s ∈ [0, prefix]`, in descending blocks of
/// length `a` so source and destination slices never overlap.
fn add_shifted<T: CountWord>(counts: &mut [T], a: usize, prefix: usize) {
    let mut end = prefix + 1;
    while end > 0 {
        let start = end.saturating_sub(a);
        let (lo, hi) = counts.split_at_mut(start + a);
        for (dst, src) in hi[..end - start].iter_mut().zip(&lo[start..end]) {
            *dst += *src;
        }
        end = start;
    }
}

/// Mean and variance of the walk, computed from the table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub variance: u128,
}

/// `Σr(v)² / 4ⁿ`, the probability two independent walks coincide.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CollisionProbability {
    pub numerator: u128,
    pub denominator_log2: u32,
    pub value: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HistogramBin {
    pub center: f64,
    pub mass: f64,
}

/// Build the exact multiplicity table by iterated convolution with
/// `δ₋ₐ + δₐ`.
pub fn build_spectrum(set: &IntegerSet) -> Result<SumSpectrum> {
    check_capacity("subset-sum total", set.total(), MAX_SPECTRUM_TOTAL)?;
    check_capacity("cardinality", set.len() as u128, MAX_SPECTRUM_LEN as u128)?;
    let total = set.total() as u64;
    let counts = if set.len() <= NARROW_COUNT_MAX_LEN {
        Counts::Narrow(convolve_all(set.elements(), total))
    } else {
        Counts::Wide(convolve_all(set.elements(), total))
    };
    Ok(SumSpectrum {
        n: set.len(),
        total,
        counts,
    })
}

impl SumSpectrum {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `Σaᵢ`.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Leftmost support point, `−Σaᵢ`.
    pub fn offset(&self) -> i64 {
        -(self.total as i64)
    }

    /// Number of table entries, `Σaᵢ + 1`.
    pub fn len(&self) -> usize {
        self.total as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `r(offset + 2k)`.
    pub fn count(&self, k: usize) -> u64 {
        match &self.counts {
            Counts::Narrow(c) => c[k] as u64,
            Counts::Wide(c) => c[k],
        }
    }

    /// Walk value of table entry `k`.
    pub fn value_at(&self, k: usize) -> i64 {
        2 * k as i64 - self.total as i64
    }

    /// `r(v)`; zero off the support lattice.
    pub fn multiplicity(&self, v: i64) -> u64 {
        let shifted = v + self.total as i64;
        if shifted < 0 || shifted % 2 != 0 || shifted / 2 > self.total as i64 {
            0
        } else {
            self.count((shifted / 2) as usize)
        }
    }

    /// All table entries in index order.
    pub fn counts(&self) -> CountIter<'_> {
        match &self.counts {
            Counts::Narrow(c) => CountIter::Narrow(c.iter()),
            Counts::Wide(c) => CountIter::Wide(c.iter()),
        }
    }

    /// `(v, r(v))` for every support point with `r(v) > 0`, ascending in `v`.
    pub fn nonzero(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        let total = self.total as i64;
        self.counts()
            .enumerate()
            .filter(|&(_, c)| c != 0)
            .map(move |(k, c)| (2 * k as i64 - total, c))
    }

    /// Check mass, symmetry and the two moment identities against `set`.
    pub fn verify(&self, set: &IntegerSet) -> std::result::Result<(), String> {
        let mass: u128 = self.counts().map(|c| c as u128).sum();
        if mass != 1u128 << self.n {
            return Err(format!("mass {mass} != 2^{}", self.n));
        }
        let len = self.len();
        if (0..len / 2).any(|k| self.count(k) != self.count(len - 1 - k)) {
            return Err("counts are not palindromic".into());
        }
        let (first, second) = self.raw_moments();
        if first != 0 {
            return Err(format!("first moment {first} != 0"));
        }
        let expected = set
            .sum_sq_u128()
            .and_then(|s| s.checked_mul(1u128 << self.n))
            .ok_or("sum of squares overflow")?;
        if second != expected {
            return Err(format!("second moment {second} != 2^n Σa² = {expected}"));
        }
        Ok(())
    }

    /// `(Σ r(v)·v, Σ r(v)·v²)`. Both fit: `Σaᵢ ≤ 2³¹` bounds `v² ≤ 2⁶²` and
    /// the second moment is `2ⁿ Σaᵢ² ≤ 2⁶⁴ · 2⁶²`.
    fn raw_moments(&self) -> (i128, u128) {
        let mut first = 0i128;
        let mut second = 0u128;
        for (v, c) in self.nonzero() {
            first += c as i128 * v as i128;
            second += c as u128 * (v as i128 * v as i128) as u128;
        }
        (first, second)
    }
}

pub enum CountIter<'a> {
    Narrow(std::slice::Iter<'a, u32>),
    Wide(std::slice::Iter<'a, u64>),
}

impl Iterator for CountIter<'_> {
    type Item = u64;

    #[inline]
    fn next(&mut self) -> Option<u64> {
        match self {
            CountIter::Narrow(it) => it.next().map(|&c| c as u64),
            CountIter::Wide(it) => it.next().copied(),
        }
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        match self {
            CountIter::Narrow(it) => it.size_hint(),
            CountIter::Wide(it) => it.size_hint(),
        }
    }
}

/// Exact `Σr(v)² / 4ⁿ`. This is also the exact value of
/// `∫₀¹ ∏cos²(2πaᵢx) dx`.
pub fn collision_probability(spec: &SumSpectrum) -> Result<CollisionProbability> {
    if spec.n > 63 {
        return Err(Error::Overflow(format!(
            "collision numerator needs n <= 63, got {}",
            spec.n
        )));
    }
    let numerator: u128 = spec.counts().map(|c| c as u128 * c as u128).sum();
    let denominator_log2 = 2 * spec.n as u32;
    Ok(CollisionProbability {
        numerator,
        denominator_log2,
        value: numerator as f64 * crate::numeric::pow2(-(denominator_log2 as i64)),
    })
}

/// Mean (zero) and exact integer variance `Σaᵢ²` of the walk.
pub fn moments(spec: &SumSpectrum) -> Moments {
    let (first, second) = spec.raw_moments();
    Moments {
        mean: first as f64 / (1u128 << spec.n) as f64,
        variance: second >> spec.n,
    }
}

/// Mass of the walk in `bins` equal, half-open bins over `[−Σaᵢ, Σaᵢ]` (the
/// last bin closed).
pub fn histogram(spec: &SumSpectrum, bins: usize) -> Result<Vec<HistogramBin>> {
    if bins == 0 {
        return Err(Error::InvalidArgument("bins must be at least 1".into()));
    }
    let total = spec.total as u128;
    let mut tallies = vec![0u128; bins];
    for (k, c) in spec.counts().enumerate() {
        if c == 0 {
            continue;
        }
        // (v + Σ)/(2Σ) · bins with v + Σ = 2k, in exact integers.
        let idx = ((k as u128 * bins as u128) / total).min(bins as u128 - 1) as usize;
        tallies[idx] += c as u128;
    }
    let scale = crate::numeric::pow2(-(spec.n as i64));
    Ok(tallies
        .iter()
        .enumerate()
        .map(|(i, &t)| HistogramBin {
            // Σ(2i + 1 − bins)/bins: one rounding, so centers are exactly antisymmetric.
            center: (total as i128 * (2 * i as i128 + 1 - bins as i128)) as f64 / bins as f64,
            mass: t as f64 * scale,
        })
        .collect())
}

/// `Σ r(v) cos(2πvx) / 2ⁿ`, the Fourier transform of the walk's law.
pub fn characteristic_function(spec: &SumSpectrum, x: f64) -> f64 {
    let mut acc = KahanSum::new();
    for (v, c) in spec.nonzero() {
        acc.add(c as f64 * cos_2pi(v as f64, x));
    }
    acc.total() * crate::numeric::pow2(-(spec.n as i64))
}

/// CSV `value,count` with nonzero entries only.
pub fn write_spectrum_csv<W: Write>(spec: &SumSpectrum, mut out: W) -> io::Result<()> {
    writeln!(out, "value,count")?;
    for (v, c) in spec.nonzero() {
        writeln!(out, "{v},{c}")?;
    }
    Ok(())
}

/// CSV `bin_center,mass`.
pub fn write_histogram_csv<W: Write>(bins: &[HistogramBin], mut out: W) -> io::Result<()> {
    writeln!(out, "bin_center,mass")?;
    for b in bins {
        writeln!(out, "{},{}", b.center, b.mass)?;
    }
    Ok(())
}
