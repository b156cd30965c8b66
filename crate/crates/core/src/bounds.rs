//! The inequality ledger for one integer set, and the combined diagnostic
//! report tying the spatial and Fourier sides together.

use std::f64::consts::PI;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::numeric::pow2;
use crate::quadrature::{
    near_gaussian_difference, region_integrals, NearGaussianDifference, QuadratureConfig,
    RegionIntegrals,
};
use crate::sets::IntegerSet;
use crate::smoothing::{gaussian_l2_distance, GaussianDistance, GaussianModel, SmoothedDensity};
use crate::spectrum::{build_spectrum, SumSpectrum};
use crate::Result;

pub const SCHEMA_VERSION: u32 = 1;

/// Published constants `c` in `aₙ ≥ (c − o(1))·2ⁿ/√n`, in historical order.
pub const REFERENCE_CONSTANTS: [(&str, f64); 6] = [
    ("erdos_moser", 0.25),
    ("alon_spencer", 0.384_900_179_459_750_5), // 2/3^{3/2}
    ("elkies", 0.564_189_583_547_756_3),       // 1/√π
    ("bae_guy", 0.577_350_269_189_625_8),      // 1/√3
    ("aliev", 0.690_988_298_942_670_9),        // √(3/2π)
    ("dubroff_fox_xu", 0.797_884_560_802_865_4), // √(2/π)
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReferenceLine {
    pub name: &'static str,
    pub constant: f64,
    /// `aₙ√n / (c·2ⁿ)`.
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HypothesisRatios {
    /// `aₙ² · n^{1/2} / Σaᵢ²`.
    pub n_1_2: f64,
    /// `aₙ² · n^{2/3} / Σaᵢ²`.
    pub n_2_3: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsReport {
    pub n: usize,
    pub a_n: u64,
    #[serde(serialize_with = "crate::json::u128_as_string")]
    pub sum: u128,
    #[serde(serialize_with = "crate::json::biguint_as_string")]
    pub sum_sq: BigUint,
    /// `Σaᵢ ≥ 2ⁿ − 1`.
    pub erdos_moser_sum_ok: bool,
    /// `3·n·aₙ² ≥ 4ⁿ − 1`.
    pub variance_bound_ok: bool,
    /// `3·Σaᵢ² ≥ 4ⁿ − 1`.
    pub moser_variance_ok: bool,
    pub dfx_ratio: f64,
    pub elkies_ratio: f64,
    pub moser_4n_ratio: f64,
    pub hypothesis_ratios: HypothesisRatios,
    /// `(2πΣaᵢ²)^{−1/2} · 2^{n+1}`.
    pub gaussian_match: f64,
    pub reference_lines: Vec<ReferenceLine>,
}

/// Integer inequalities in exact arithmetic; ratios in double precision.
pub fn bounds_report(set: &IntegerSet) -> BoundsReport {
    let n = set.len();
    let a_n = set.largest();
    let four_n_minus_1 = (BigUint::one() << (2 * n)) - 1u32;
    let two_n_minus_1 = (BigUint::one() << n) - 1u32;
    let a_sq = BigUint::from(a_n) * BigUint::from(a_n);

    let erdos_moser_sum_ok = BigUint::from(set.total()) >= two_n_minus_1;
    let variance_bound_ok = a_sq * BigUint::from(3 * n as u64) >= four_n_minus_1;
    let moser_variance_ok = set.sum_sq() * 3u32 >= four_n_minus_1;

    let a = a_n as f64;
    let nf = n as f64;
    let two_n = pow2(n as i64);
    let sum_sq = set.sum_sq_f64();
    let reference_lines = REFERENCE_CONSTANTS
        .iter()
        .map(|&(name, c)| ReferenceLine {
            name,
            constant: c,
            ratio: a * nf.sqrt() / (c * two_n),
        })
        .collect();

    BoundsReport {
        n,
        a_n,
        sum: set.total(),
        sum_sq: set.sum_sq().clone(),
        erdos_moser_sum_ok,
        variance_bound_ok,
        moser_variance_ok,
        dfx_ratio: a * nf.sqrt() * (PI / 2.0).sqrt() / two_n,
        elkies_ratio: a * (PI * nf).sqrt() / two_n,
        // 3Σa²/(4ⁿ − 1), with 4ⁿ − 1 rounded only once.
        moser_4n_ratio: 3.0 * sum_sq / (pow2(2 * n as i64) - 1.0),
        hypothesis_ratios: HypothesisRatios {
            n_1_2: a * a * nf.sqrt() / sum_sq,
            n_2_3: a * a * nf.powf(2.0 / 3.0) / sum_sq,
        },
        gaussian_match: (2.0 * PI * sum_sq).powf(-0.5) * 2.0 * two_n,
        reference_lines,
    }
}

/// Largest gap between the exact walk CDF and the matched Gaussian CDF,
/// checked on both sides of every jump.
pub fn cdf_max_gap(spec: &SumSpectrum, g: &GaussianModel) -> f64 {
    let scale = pow2(-(spec.n() as i64));
    let mut below: u128 = 0;
    let mut gap: f64 = 0.0;
    for (v, c) in spec.nonzero() {
        let phi = g.cdf(v as f64);
        let left = below as f64 * scale;
        below += c as u128;
        let right = below as f64 * scale;
        gap = gap.max((left - phi).abs()).max((right - phi).abs());
    }
    gap
}

/// `Σaᵢ³ / (Σaᵢ²)^{3/2}`, the Berry–Esseen-type bound, reported only.
pub fn berry_esseen_bound(set: &IntegerSet) -> f64 {
    let cubes: f64 = set.elements().iter().map(|&a| (a as f64).powi(3)).sum();
    cubes / set.sum_sq_f64().powf(1.5)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Diagnostics {
    pub schema_version: u32,
    pub elements: Vec<u64>,
    pub bounds: BoundsReport,
    pub smoothing: GaussianDistance,
    pub regions: RegionIntegrals,
    pub near_gaussian_difference: NearGaussianDifference,
    /// `gaussian_l2_distance − far`; small next to `2⁻ⁿ` when the walk is
    /// close to Gaussian.
    pub distance_far_gap: f64,
    /// `|distance_far_gap| · 2ⁿ`.
    pub distance_far_gap_times_2n: f64,
    pub cdf_max_gap: f64,
    pub berry_esseen_bound: f64,
}

/// Everything in one report. Needs the set within spectrum capacity.
pub fn diagnostics(set: &IntegerSet, cfg: &QuadratureConfig) -> Result<Diagnostics> {
    let spec = build_spectrum(set)?;
    let g = GaussianModel::matched(&spec);
    let smoothing = gaussian_l2_distance(&SmoothedDensity::new(&spec), &g)?;
    let regions = region_integrals(set, cfg)?;
    let ngd = near_gaussian_difference(set, cfg)?;
    let gap = smoothing.distance - regions.far;
    Ok(Diagnostics {
        schema_version: SCHEMA_VERSION,
        elements: set.elements().to_vec(),
        bounds: bounds_report(set),
        smoothing,
        regions,
        near_gaussian_difference: ngd,
        distance_far_gap: gap,
        distance_far_gap_times_2n: gap.abs() * pow2(set.len() as i64),
        cdf_max_gap: cdf_max_gap(&spec, &g),
        berry_esseen_bound: berry_esseen_bound(set),
    })
}

/// CSV header for one-row-per-set bounds summaries.
pub const BOUNDS_CSV_HEADER: &str = "n,a_n,sum,sum_sq,erdos_moser_sum_ok,variance_bound_ok,moser_variance_ok,dfx_ratio,elkies_ratio,moser_4n_ratio,hypothesis_n_1_2,hypothesis_n_2_3,gaussian_match";

pub fn bounds_csv_row(r: &BoundsReport) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{}",
        r.n,
        r.a_n,
        r.sum,
        r.sum_sq,
        r.erdos_moser_sum_ok,
        r.variance_bound_ok,
        r.moser_variance_ok,
        r.dfx_ratio,
        r.elkies_ratio,
        r.moser_4n_ratio,
        r.hypothesis_ratios.n_1_2,
        r.hypothesis_ratios.n_2_3,
        r.gaussian_match
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::conway_guy;

    fn int(e: &[u64]) -> IntegerSet {
        IntegerSet::new(e.to_vec()).unwrap()
    }

    #[test]
    fn reference_constants_match_closed_forms() {
        let closed = [
            0.25,
            2.0 / 3f64.powf(1.5),
            1.0 / PI.sqrt(),
            1.0 / 3f64.sqrt(),
            (3.0 / (2.0 * PI)).sqrt(),
            (2.0 / PI).sqrt(),
        ];
        for ((_, c), expected) in REFERENCE_CONSTANTS.iter().zip(closed) {
            assert!((c - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn powers_of_two_are_tight() {
        let r = bounds_report(&int(&[1, 2, 4, 8]));
        assert_eq!(r.sum, 15);
        assert!(r.erdos_moser_sum_ok && r.variance_bound_ok && r.moser_variance_ok);
        // Σa² = 85 = (4⁴ − 1)/3 exactly.
        assert_eq!(r.moser_4n_ratio, 1.0);
    }

    #[test]
    fn variance_bound_is_not_sufficient() {
        let r = bounds_report(&int(&[1, 2, 3]));
        assert!(r.variance_bound_ok);
        assert!(!r.erdos_moser_sum_ok);
    }

    #[test]
    fn conway_guy_dfx_ratio() {
        let r = bounds_report(&conway_guy(22).unwrap());
        let expected = 1_051_905.0 * 22f64.sqrt() * (PI / 2.0).sqrt() / 4_194_304.0;
        assert!((r.dfx_ratio - expected).abs() < 1e-14);
        assert!((r.dfx_ratio - 1.474).abs() < 1e-3);
    }

    #[test]
    fn huge_sets_stay_exact() {
        let r = bounds_report(&conway_guy(64).unwrap());
        assert!(r.erdos_moser_sum_ok && r.variance_bound_ok && r.moser_variance_ok);
        assert!(r.sum_sq.bits() > 128);
    }

    #[test]
    fn cdf_gap_singleton() {
        let spec = build_spectrum(&int(&[1])).unwrap();
        let g = GaussianModel::matched(&spec);
        // Jumps at ±1: max(|0 − Φ(−1)|, |½ − Φ(−1)|, …) = ½ − Φ(−1).
        let expected = 0.5 - crate::numeric::normal_cdf(-1.0);
        assert!((cdf_max_gap(&spec, &g) - expected).abs() < 1e-15);
    }

    #[test]
    fn diagnostics_powers_of_two() {
        let d = diagnostics(&int(&[1, 2, 4, 8]), &QuadratureConfig::default()).unwrap();
        assert!((0.0..=1.0).contains(&d.cdf_max_gap));
        assert_eq!(d.schema_version, 1);
        assert!((d.regions.full - 1.0 / 32.0).abs() < 1e-9 / 32.0);
    }

    #[test]
    fn csv_row_has_header_arity() {
        let row = bounds_csv_row(&bounds_report(&int(&[1, 2, 4])));
        assert_eq!(row.split(',').count(), BOUNDS_CSV_HEADER.split(',').count());
    }
}
