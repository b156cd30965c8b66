//! Library results against oracles built independently in test code.

mod common;

use std::f64::consts::PI;

use subset_sums::bounds::bounds_report;
use subset_sums::numeric::{normal_cdf, normal_upper_tail};
use subset_sums::quadrature::{integrate_full, periodized_sinc_sq, FullRoute, QuadratureConfig};
use subset_sums::sets::{check_distinct, conway_guy, RealSet};
use subset_sums::smoothing::{
    cross_term, gaussian_l2_distance, l2_norm_sq_smoothed, l2_norm_sq_smoothed_real, GaussianModel,
    SmoothedDensity,
};
use subset_sums::spectrum::build_spectrum;
use subset_sums::IntegerSet;

fn int(elements: &[u64]) -> IntegerSet {
    IntegerSet::new(elements.to_vec()).unwrap()
}

/// Composite Simpson on `[a, b]` with `m` (even) intervals.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, m: usize) -> f64 {
    let h = (b - a) / m as f64;
    let inner: f64 = (1..m)
        .map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 })
        .sum();
    (f(a) + inner + f(b)) * h / 3.0
}

fn sinc(t: f64) -> f64 {
    if t == 0.0 {
        1.0
    } else {
        t.sin() / t
    }
}

/// Sample sets mixing distinct and colliding ones.
const SAMPLE_SETS: [&[u64]; 6] = [
    &[1],
    &[1, 2, 3],
    &[1, 2, 4, 8],
    &[3, 5, 6, 7],
    &[2, 3, 7, 11, 12],
    &[4, 9, 10, 13, 19, 20, 21],
];

#[test]
fn normal_cdf_matches_high_precision_values() {
    let cdf = [
        (-8.0, 6.220_960_574_271_784e-16),
        (-3.0, 1.349_898_031_630_094_5e-3),
        (-1.0, 0.158_655_253_931_457_05),
        (-0.1, 0.460_172_162_722_971),
        (0.0, 0.5),
        (0.5, 0.691_462_461_274_013_1),
        (2.0, 0.977_249_868_051_820_8),
        (5.0, 0.999_999_713_348_428_1),
    ];
    for (z, want) in cdf {
        assert!(((normal_cdf(z) - want) / want).abs() < 1e-12, "Φ({z})");
    }
    let tail = [
        (5.0, 2.866_515_718_791_939e-7),
        (10.0, 7.619_853_024_160_526e-24),
        (20.0, 2.753_624_118_606_233_7e-89),
        (37.0, 5.725_571_222_524_577e-300),
    ];
    for (z, want) in tail {
        assert!(
            ((normal_upper_tail(z) - want) / want).abs() < 1e-12,
            "Q({z})"
        );
    }
}

#[test]
fn periodization_partial_sums_converge_at_rate_one_over_k() {
    let deviation = |k_max: i64| -> f64 {
        (0..=1000)
            .map(|i| {
                let x = i as f64 / 1000.0;
                let partial: f64 = (-k_max..=k_max)
                    .map(|k| sinc(2.0 * PI * (x - k as f64)).powi(2))
                    .sum();
                (partial - (1.0 + (2.0 * PI * x).cos()) / 2.0).abs()
            })
            .fold(0.0, f64::max)
    };
    let d1 = deviation(10_000);
    let d2 = deviation(20_000);
    assert!(d1 <= 2e-4, "K = 1e4 deviation {d1:e}");
    let ratio = d1 / d2;
    assert!(
        (1.8..2.2).contains(&ratio),
        "doubling K shrank the deviation by {ratio}"
    );
    for x in [0.0, 0.13, 0.5, 0.77] {
        let mine: f64 = (-500i64..=500)
            .map(|k| sinc(2.0 * PI * (x - k as f64)).powi(2))
            .sum();
        assert!((periodized_sinc_sq(x, 500) - mine).abs() < 1e-13);
    }
}

#[test]
fn smoothed_norm_matches_grid_integration() {
    for e in SAMPLE_SETS {
        let spec = build_spectrum(&int(e)).unwrap();
        let closed = l2_norm_sq_smoothed(&SmoothedDensity::new(&spec))
            .unwrap()
            .value;
        let grid = common::smoothed_norm_by_grid(e);
        assert!(((closed - grid) / grid).abs() < 1e-12, "{e:?}");
    }
}

#[test]
fn cross_term_matches_direct_integration() {
    for e in SAMPLE_SETS {
        let counts = common::subset_sum_counts(e);
        let n = e.len() as i32;
        let total = (counts.len() - 1) as i64;
        let var: f64 = e.iter().map(|&a| (a * a) as f64).sum();
        let gamma = |x: f64| (-x * x / (2.0 * var)).exp() / (2.0 * PI * var).sqrt();
        // Each atom at v = 2k − Σ carries mass r/2ⁿ spread uniformly over [v−1, v+1].
        let direct: f64 = counts
            .iter()
            .enumerate()
            .filter(|(_, &r)| r > 0)
            .map(|(k, &r)| {
                let v = 2 * k as i64 - total;
                r as f64 / 2f64.powi(n + 1) * simpson(gamma, v as f64 - 1.0, v as f64 + 1.0, 400)
            })
            .sum();
        let spec = build_spectrum(&int(e)).unwrap();
        let got = cross_term(&SmoothedDensity::new(&spec), &GaussianModel::matched(&spec));
        assert!(
            ((got - direct) / direct).abs() < 1e-9,
            "{e:?}: {got} vs {direct}"
        );
    }
}

#[test]
fn distance_agrees_with_fourier_side() {
    for e in SAMPLE_SETS {
        let counts = common::subset_sum_counts(e);
        let n = e.len() as i32;
        let var: f64 = e.iter().map(|&a| (a * a) as f64).sum();
        let sigma = var.sqrt();
        // ∫ĥ²µ̂² from the raw counts, ∫ĥµ̂γ̂ by Simpson, ∫γ̂² in closed form.
        let sq: f64 = counts.iter().map(|&r| (r * r) as f64).sum::<f64>() / 2f64.powi(2 * n + 1);
        let reach = 2.0 / sigma;
        let mixed = simpson(
            |x| {
                let mu: f64 = e.iter().map(|&a| (2.0 * PI * a as f64 * x).cos()).product();
                sinc(2.0 * PI * x) * mu * (-2.0 * PI * PI * var * x * x).exp()
            },
            -reach,
            reach,
            40_000,
        );
        let gauss = 1.0 / (2.0 * PI.sqrt() * sigma);
        let fourier = sq - 2.0 * mixed + gauss;
        let spec = build_spectrum(&int(e)).unwrap();
        let d = gaussian_l2_distance(&SmoothedDensity::new(&spec), &GaussianModel::matched(&spec))
            .unwrap();
        assert!(
            (d.distance - fourier).abs() < 1e-12,
            "{e:?}: {} vs {fourier}",
            d.distance
        );
    }
}

#[test]
fn real_full_integral_brackets_spatial_value() {
    let cfg = QuadratureConfig::default();
    for e in [vec![1.0, 1.5], vec![0.5, 1.25, 2.0], vec![1.0, 2.0, 4.0]] {
        let set = RealSet::new(e.clone()).unwrap();
        let spatial = l2_norm_sq_smoothed_real(&set).unwrap();
        let full = integrate_full(&set, &cfg).unwrap();
        assert_eq!(full.route, FullRoute::Truncated);
        assert!(
            (full.value - spatial).abs() <= full.error,
            "{e:?}: {} ± {} vs {spatial}",
            full.value,
            full.error
        );
    }
}

#[test]
fn conway_guy_family_matches_recurrence_and_is_distinct() {
    for n in 1..=22 {
        let set = conway_guy(n).unwrap();
        assert_eq!(
            set.elements(),
            common::conway_guy_reference(n).as_slice(),
            "n = {n}"
        );
        assert!(check_distinct(&set).unwrap().is_distinct, "n = {n}");
        let top = set.largest() as f64;
        let heavy = set
            .elements()
            .iter()
            .filter(|&&a| a as f64 >= 0.9 * top)
            .count();
        assert!(heavy + 10 >= n, "n = {n}: only {heavy} elements ≥ 0.9 aₙ");
    }
}

#[test]
fn gaussian_match_trends_toward_one() {
    let ratios: Vec<f64> = (8..=22)
        .map(|n| bounds_report(&conway_guy(n).unwrap()).gaussian_match)
        .collect();
    assert!(ratios.windows(2).all(|w| w[1] < w[0]), "{ratios:?}");
    for (n, r) in (8..=22).zip(&ratios) {
        if n >= 16 {
            assert!(*r <= 1.05, "n = {n}: {r}");
        }
        // From the definition with Σa² summed independently.
        let sum_sq: f64 = common::conway_guy_reference(n)
            .iter()
            .map(|&a| (a as f64).powi(2))
            .sum();
        let want = 2f64.powi(n as i32 + 1) / (2.0 * PI * sum_sq).sqrt();
        assert!(((r - want) / want).abs() < 1e-12);
    }
}
