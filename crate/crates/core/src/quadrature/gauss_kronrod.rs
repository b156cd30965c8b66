//! Adaptive 7/15-point Gauss–Kronrod integration with worst-panel bisection.

// Tables carry the published digits; rounding to f64 happens at compile time.
#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use super::QuadratureConfig;
use crate::numeric::KahanSum;
use crate::{Error, Result};

/// Kronrod abscissae on [0, 1]; odd positions are the Gauss nodes.
const KRONROD_NODES: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const KRONROD_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// 7-point Gauss–Legendre rule on [−1, 1].
pub(crate) const GAUSS7_NODES: [f64; 7] = [
    -0.949_107_912_342_758_524_526_189_684_047_851,
    -0.741_531_185_599_394_439_863_864_773_280_788,
    -0.405_845_151_377_397_166_906_606_412_076_961,
    0.0,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.949_107_912_342_758_524_526_189_684_047_851,
];

pub(crate) const GAUSS7_WEIGHTS: [f64; 7] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.129_484_966_168_869_693_270_611_432_679_082,
];

#[derive(Clone, Copy, Debug)]
struct Panel {
    left: f64,
    right: f64,
    value: f64,
    error: f64,
}

/// QUADPACK-style error scaling of `|K15 − G7|`.
fn rescale_error(err: f64, resabs: f64, resasc: f64) -> f64 {
    let mut err = err.abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    err
}

fn gk15<F: Fn(f64) -> f64>(f: &F, left: f64, right: f64) -> Panel {
    let center = 0.5 * (left + right);
    let half = 0.5 * (right - left);
    let fc = f(center);
    let mut kronrod = fc * KRONROD_WEIGHTS[7];
    let mut gauss = fc * 0.417_959_183_673_469_387_755_102_040_816_327;
    let mut resabs = (fc * KRONROD_WEIGHTS[7]).abs();
    let mut samples = [(0.0, 0.0); 7];
    for (j, sample) in samples.iter_mut().enumerate() {
        let dx = half * KRONROD_NODES[j];
        let (f1, f2) = (f(center - dx), f(center + dx));
        *sample = (f1, f2);
        kronrod += KRONROD_WEIGHTS[j] * (f1 + f2);
        resabs += KRONROD_WEIGHTS[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += GAUSS7_WEIGHTS[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut resasc = KRONROD_WEIGHTS[7] * (fc - mean).abs();
    for (j, &(f1, f2)) in samples.iter().enumerate() {
        resasc += KRONROD_WEIGHTS[j] * ((f1 - mean).abs() + (f2 - mean).abs());
    }
    let scale = half.abs();
    Panel {
        left,
        right,
        value: kronrod * half,
        error: rescale_error((kronrod - gauss) * half, resabs * scale, resasc * scale),
    }
}

/// Heap key: largest error first, leftmost panel among equals.
struct Worst {
    error: f64,
    left: f64,
    index: usize,
}

impl PartialEq for Worst {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Worst {}

impl PartialOrd for Worst {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Worst {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.left.total_cmp(&self.left))
    }
}

/// Value and error estimate of an adaptive integration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub panels: usize,
    pub subdivisions: usize,
}

/// Integrate `f` over `[a, b]` starting from `initial_panels` equal panels.
///
/// Initial panels are evaluated in parallel; the bisection loop and the
/// final reduction (in order of panel left endpoint) are sequential, so the
/// result does not depend on the thread count.
pub fn integrate<F>(
    f: F,
    a: f64,
    b: f64,
    initial_panels: usize,
    cfg: &QuadratureConfig,
) -> Result<Estimate>
where
    F: Fn(f64) -> f64 + Sync,
{
    cfg.validate()?;
    let count = initial_panels.max(1);
    let width = (b - a) / count as f64;
    let mut panels: Vec<Panel> = (0..count)
        .into_par_iter()
        .map(|i| {
            let left = a + i as f64 * width;
            let right = if i + 1 == count {
                b
            } else {
                a + (i + 1) as f64 * width
            };
            gk15(&f, left, right)
        })
        .collect();

    let mut heap: BinaryHeap<Worst> = panels
        .iter()
        .enumerate()
        .map(|(index, p)| Worst {
            error: p.error,
            left: p.left,
            index,
        })
        .collect();

    let mut value: f64 = panels.iter().map(|p| p.value).sum();
    let mut error: f64 = panels.iter().map(|p| p.error).sum();
    let mut subdivisions = 0usize;
    loop {
        let target = cfg.abs_tol.max(cfg.rel_tol * value.abs());
        if error <= target {
            break;
        }
        if subdivisions >= cfg.max_subdivisions {
            // Resum before giving up: the running totals drift.
            let error: f64 = panels.iter().map(|p| p.error).sum();
            if error <= target {
                break;
            }
            return Err(Error::BudgetExceeded {
                subdivisions,
                error,
                target,
            });
        }
        let worst = heap.pop().expect("at least one panel");
        let parent = panels[worst.index];
        let mid = 0.5 * (parent.left + parent.right);
        let left = gk15(&f, parent.left, mid);
        let right = gk15(&f, mid, parent.right);
        value += left.value + right.value - parent.value;
        error += left.error + right.error - parent.error;
        panels[worst.index] = left;
        heap.push(Worst {
            error: left.error,
            left: left.left,
            index: worst.index,
        });
        heap.push(Worst {
            error: right.error,
            left: right.left,
            index: panels.len(),
        });
        panels.push(right);
        subdivisions += 1;
    }

    panels.sort_by(|p, q| p.left.total_cmp(&q.left));
    let value = panels.iter().map(|p| p.value).collect::<KahanSum>().total();
    let error = panels.iter().map(|p| p.error).collect::<KahanSum>().total();
    Ok(Estimate {
        value,
        error,
        panels: panels.len(),
        subdivisions,
    })
}
