//! Brute-force references shared by the integration targets. Nothing here
//! calls into the library's algorithms.

#![allow(dead_code)]

use rand::Rng;

/// Every subset sum, by enumerating bit masks.
pub fn subset_sums(elements: &[u64]) -> Vec<u64> {
    let n = elements.len();
    (0u64..1 << n)
        .map(|mask| {
            (0..n)
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| elements[i])
                .sum()
        })
        .collect()
}

/// `counts[s]` = number of subsets summing to `s`.
pub fn subset_sum_counts(elements: &[u64]) -> Vec<u64> {
    let total: u64 = elements.iter().sum();
    let mut counts = vec![0u64; total as usize + 1];
    for s in subset_sums(elements) {
        counts[s as usize] += 1;
    }
    counts
}

pub fn is_distinct(elements: &[u64]) -> bool {
    let mut sums = subset_sums(elements);
    sums.sort_unstable();
    sums.windows(2).all(|w| w[0] != w[1])
}

/// `∫(h∗µ)²` by the midpoint rule on a quarter-unit grid, with the density
/// assembled atom by atom from the raw counts. The density is constant
/// between consecutive integers, so the rule is exact up to rounding.
pub fn smoothed_norm_by_grid(elements: &[u64]) -> f64 {
    let n = elements.len() as i32;
    let counts = subset_sum_counts(elements);
    let total = (counts.len() - 1) as i64;
    let atom = |v: i64| -> f64 {
        // v = 2k − Σ
        let twice_k = v + total;
        if twice_k < 0 || twice_k % 2 != 0 || twice_k / 2 > total {
            0.0
        } else {
            counts[(twice_k / 2) as usize] as f64
        }
    };
    let density = |x: f64| -> f64 {
        let lo = (x - 1.0).ceil() as i64;
        let hi = (x + 1.0).floor() as i64;
        (lo..=hi).map(atom).sum::<f64>() / 2f64.powi(n + 1)
    };
    let h = 0.25;
    let mut acc = 0.0;
    let mut x = -(total as f64) - 1.0 + h / 2.0;
    while x < total as f64 + 1.0 {
        let d = density(x);
        acc += d * d * h;
        x += h;
    }
    acc
}

/// Strictly increasing random set of `n` values in `1..=max`.
pub fn random_set<R: Rng>(rng: &mut R, n: usize, max: u64) -> Vec<u64> {
    assert!(max >= n as u64);
    let mut chosen = std::collections::BTreeSet::new();
    while chosen.len() < n {
        chosen.insert(rng.random_range(1..=max));
    }
    chosen.into_iter().collect()
}

/// The Conway–Guy set of size `n`, straight from `u_{k+1} = 2u_k − u_{k−r}`
/// with `r` the integer nearest `√(2k)`.
pub fn conway_guy_reference(n: usize) -> Vec<u64> {
    let mut u: Vec<u64> = vec![0, 1];
    while u.len() <= n {
        let k = u.len() - 1;
        let r = ((2.0 * k as f64).sqrt()).round() as usize;
        u.push(2 * u[k] - u[k - r]);
    }
    let mut set: Vec<u64> = (0..n).map(|i| u[n] - u[i]).collect();
    set.sort_unstable();
    set
}
