//! Experimental harness: sets whose subset sums take close to `2ⁿ` distinct
//! values while `aₙ` stays below a budget.
//!
//! The generator is PCG-64 (`Lcg128Xsl64`, O'Neill 2014) seeded through
//! `SeedableRng::seed_from_u64`, which is specified independently of the
//! platform. Candidates are drawn sequentially from that one stream in
//! fixed batches and only their evaluation is parallel, so results do not
//! depend on the thread count.

use std::cmp::Ordering;
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::check_capacity;
use crate::sets::{conway_guy, IntegerSet, ReachableSums, MAX_CONWAY_GUY_LEN};
use crate::{Error, Result};

pub const MAX_SEARCH_LEN: usize = 26;
/// Bound on `max_a_n · n`, the largest possible subset-sum total.
pub const MAX_SEARCH_TOTAL: u128 = 1 << 31;
/// Candidates drawn per parallel evaluation round.
pub const BATCH: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Random,
    PerturbConwayGuy,
    GreedyLocal,
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(Strategy::Random),
            "perturb_conway_guy" | "perturb-conway-guy" => Ok(Strategy::PerturbConwayGuy),
            "greedy_local" | "greedy-local" => Ok(Strategy::GreedyLocal),
            other => Err(Error::InvalidArgument(format!(
                "unknown strategy {other:?}"
            ))),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Random => "random",
            Strategy::PerturbConwayGuy => "perturb_conway_guy",
            Strategy::GreedyLocal => "greedy_local",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchConfig {
    pub n: usize,
    pub max_a_n: u64,
    pub iterations: u64,
    pub seed: u64,
    pub strategy: Strategy,
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        check_capacity("cardinality", self.n as u128, MAX_SEARCH_LEN as u128)?;
        check_capacity(
            "max_a_n * n",
            self.max_a_n as u128 * self.n as u128,
            MAX_SEARCH_TOTAL,
        )?;
        if self.max_a_n < self.n as u64 {
            return Err(Error::InvalidArgument(format!(
                "max_a_n = {} leaves no strictly increasing set of {} positive integers",
                self.max_a_n, self.n
            )));
        }
        if self.iterations == 0 {
            return Err(Error::InvalidArgument(
                "iterations must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Improvement {
    /// 1-based evaluation index at which this set became the best.
    pub evaluation: u64,
    pub distinct_count: u64,
    #[serde(serialize_with = "crate::json::u128_as_string")]
    pub total: u128,
    pub elements: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchResult {
    #[serde(serialize_with = "serialize_set")]
    pub best_set: IntegerSet,
    pub distinct_count: u64,
    pub distinct_fraction: f64,
    pub evaluations: u64,
    pub improvements: Vec<Improvement>,
}

fn serialize_set<S: serde::Serializer>(
    set: &IntegerSet,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(set.elements())
}

/// Better sets first: more distinct sums, then smaller `Σaᵢ`, then
/// lexicographically smaller elements.
fn rank(a: (&IntegerSet, u64), b: (&IntegerSet, u64)) -> Ordering {
    b.1.cmp(&a.1)
        .then_with(|| a.0.total().cmp(&b.0.total()))
        .then_with(|| a.0.elements().cmp(b.0.elements()))
}

/// Replace one element by a fresh value in `[1, max_a_n]` and re-sort. When
/// `max_a_n` equals the cardinality no fresh value exists and the set is
/// returned unchanged.
pub fn mutate<R: Rng + ?Sized>(set: &IntegerSet, max_a_n: u64, rng: &mut R) -> IntegerSet {
    let n = set.len();
    if max_a_n <= n as u64 {
        return set.clone();
    }
    let slot = rng.random_range(0..n);
    let fresh = loop {
        let v = rng.random_range(1..=max_a_n);
        if set.elements().binary_search(&v).is_err() {
            break v;
        }
    };
    let mut elements = set.elements().to_vec();
    elements[slot] = fresh;
    elements.sort_unstable();
    IntegerSet::new(elements).expect("distinct positive values")
}

fn random_set<R: Rng + ?Sized>(n: usize, max_a_n: u64, rng: &mut R) -> IntegerSet {
    let mut elements: Vec<u64> = index::sample(rng, max_a_n as usize, n)
        .into_iter()
        .map(|i| i as u64 + 1)
        .collect();
    elements.sort_unstable();
    IntegerSet::new(elements).expect("distinct positive values")
}

/// Conway–Guy set squeezed under the budget: scaled down, then nudged to
/// stay strictly increasing within `[1, max_a_n]`.
fn conway_guy_start(n: usize, max_a_n: u64) -> IntegerSet {
    let base = if n <= MAX_CONWAY_GUY_LEN {
        conway_guy(n).expect("length in range").elements().to_vec()
    } else {
        (1..=n as u64).collect()
    };
    let top = *base.last().unwrap();
    if top <= max_a_n {
        return IntegerSet::new(base).unwrap();
    }
    let mut e: Vec<u64> = base
        .iter()
        .map(|&a| (a as u128 * max_a_n as u128 / top as u128) as u64)
        .collect();
    let mut prev = 0;
    for v in e.iter_mut() {
        *v = (*v).max(prev + 1);
        prev = *v;
    }
    let mut next = max_a_n + 1;
    for v in e.iter_mut().rev() {
        *v = (*v).min(next - 1);
        next = *v;
    }
    IntegerSet::new(e).expect("fits because max_a_n >= n")
}

struct Tracker {
    best: Option<(IntegerSet, u64)>,
    evaluations: u64,
    improvements: Vec<Improvement>,
}

impl Tracker {
    fn record(&mut self, set: &IntegerSet, count: u64) {
        self.evaluations += 1;
        let better = match &self.best {
            None => true,
            Some((b, c)) => rank((set, count), (b, *c)) == Ordering::Less,
        };
        if better {
            self.improvements.push(Improvement {
                evaluation: self.evaluations,
                distinct_count: count,
                total: set.total(),
                elements: set.elements().to_vec(),
            });
            self.best = Some((set.clone(), count));
        }
    }
}

fn evaluate(batch: &[IntegerSet], capacity: u64) -> Vec<u64> {
    batch
        .par_iter()
        .map_init(
            || ReachableSums::new(capacity),
            |sums, set| {
                sums.reset(set.total() as u64);
                for &a in set.elements() {
                    sums.add_element(a);
                }
                sums.count()
            },
        )
        .collect()
}

fn best_of<'a>(batch: &'a [IntegerSet], counts: &[u64]) -> (&'a IntegerSet, u64) {
    batch
        .iter()
        .zip(counts.iter().copied())
        .min_by(|a, b| rank((a.0, a.1), (b.0, b.1)))
        .expect("nonempty batch")
}

/// Run the configured strategy for exactly `iterations` evaluations on the
/// current rayon pool.
pub fn search(cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.validate()?;
    let n = cfg.n;
    let capacity = cfg.max_a_n * n as u64;
    let mut rng = Pcg64::seed_from_u64(cfg.seed);
    let mut t = Tracker {
        best: None,
        evaluations: 0,
        improvements: Vec::new(),
    };
    let remaining = |t: &Tracker| (cfg.iterations - t.evaluations).min(BATCH as u64) as usize;

    match cfg.strategy {
        Strategy::Random => {
            while t.evaluations < cfg.iterations {
                let batch: Vec<IntegerSet> = (0..remaining(&t))
                    .map(|_| random_set(n, cfg.max_a_n, &mut rng))
                    .collect();
                for (set, count) in batch.iter().zip(evaluate(&batch, capacity)) {
                    t.record(set, count);
                }
            }
        }
        Strategy::PerturbConwayGuy | Strategy::GreedyLocal => {
            let start = match cfg.strategy {
                Strategy::PerturbConwayGuy => conway_guy_start(n, cfg.max_a_n),
                _ => random_set(n, cfg.max_a_n, &mut rng),
            };
            let mut current_count = evaluate(std::slice::from_ref(&start), capacity)[0];
            t.record(&start, current_count);
            let mut current = start;
            let mut stale = 0u64;
            let restart_after = (n * n) as u64;
            while t.evaluations < cfg.iterations {
                let batch: Vec<IntegerSet> = (0..remaining(&t))
                    .map(|_| mutate(&current, cfg.max_a_n, &mut rng))
                    .collect();
                let counts = evaluate(&batch, capacity);
                for (set, &count) in batch.iter().zip(&counts) {
                    t.record(set, count);
                }
                let (cand, count) = best_of(&batch, &counts);
                if cfg.strategy == Strategy::PerturbConwayGuy {
                    // Plateau moves allowed.
                    if count >= current_count {
                        current = cand.clone();
                        current_count = count;
                    }
                } else if rank((cand, count), (&current, current_count)) == Ordering::Less {
                    current = cand.clone();
                    current_count = count;
                    stale = 0;
                } else {
                    stale += batch.len() as u64;
                    if stale >= restart_after && t.evaluations < cfg.iterations {
                        current = random_set(n, cfg.max_a_n, &mut rng);
                        current_count = evaluate(std::slice::from_ref(&current), capacity)[0];
                        t.record(&current, current_count);
                        stale = 0;
                    }
                }
            }
        }
    }

    let (best_set, distinct_count) = t.best.expect("iterations >= 1");
    Ok(SearchResult {
        distinct_fraction: distinct_count as f64 / (1u64 << n) as f64,
        best_set,
        distinct_count,
        evaluations: t.evaluations,
        improvements: t.improvements,
    })
}

/// [`search`] on a dedicated pool of `threads` workers (0 = rayon default).
pub fn search_with_threads(cfg: &SearchConfig, threads: usize) -> Result<SearchResult> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    pool.install(|| search(cfg))
}

/// One CSV row per improvement; elements are `;`-separated.
pub fn write_improvements_csv<W: Write>(
    result: &SearchResult,
    n: usize,
    mut out: W,
) -> io::Result<()> {
    writeln!(
        out,
        "evaluation,distinct_count,distinct_fraction,total,elements"
    )?;
    let denom = (1u64 << n) as f64;
    for imp in &result.improvements {
        let elements: Vec<String> = imp.elements.iter().map(u64::to_string).collect();
        writeln!(
            out,
            "{},{},{},{},{}",
            imp.evaluation,
            imp.distinct_count,
            imp.distinct_count as f64 / denom,
            imp.total,
            elements.join(";")
        )?;
    }
    Ok(())
}
