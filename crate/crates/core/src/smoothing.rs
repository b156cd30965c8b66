//! Box-smoothed walk law `h∗µ` with `h = ½·𝟙[−1,1]`, the matched Gaussian
//! `γ`, and the spatial-side L² quantities.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::check_capacity;
use crate::numeric::{normal_cdf, normal_interval_mass, pow2, KahanSum};
use crate::sets::{sorted_subset_sums, RealSet, MAX_SEPARATION_LEN};
use crate::spectrum::{collision_probability, moments, SumSpectrum};
use crate::{Error, Result};

/// Centered normal density with variance `σ² = Σaᵢ²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianModel {
    variance: f64,
}

impl GaussianModel {
    pub fn new(variance: f64) -> Result<Self> {
        if !(variance.is_finite() && variance > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "gaussian variance must be positive and finite, got {variance}"
            )));
        }
        Ok(GaussianModel { variance })
    }

    /// The Gaussian matched to the spectrum's exact variance.
    pub fn matched(spec: &SumSpectrum) -> Self {
        GaussianModel {
            variance: moments(spec).variance as f64,
        }
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn sigma(&self) -> f64 {
        self.variance.sqrt()
    }

    pub fn density(&self, x: f64) -> f64 {
        (-0.5 * x * x / self.variance).exp() / (2.0 * PI * self.variance).sqrt()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        normal_cdf(x / self.sigma())
    }

    /// Fourier transform `exp(−2π²ξ²σ²)`.
    pub fn transform(&self, xi: f64) -> f64 {
        (-2.0 * PI * PI * xi * xi * self.variance).exp()
    }
}

/// `h∗µ` for an integer spectrum; the kernel half-width is fixed at 1.
#[derive(Clone, Copy, Debug)]
pub struct SmoothedDensity<'a> {
    spectrum: &'a SumSpectrum,
}

pub const KERNEL_HALFWIDTH: f64 = 1.0;

impl<'a> SmoothedDensity<'a> {
    pub fn new(spectrum: &'a SumSpectrum) -> Self {
        SmoothedDensity { spectrum }
    }

    pub fn spectrum(&self) -> &'a SumSpectrum {
        self.spectrum
    }

    /// `(h∗µ)(x) = 2^{−n−1} · #{support points within distance 1 of x}`,
    /// counted with multiplicity and closed intervals.
    pub fn value_at(&self, x: f64) -> f64 {
        let spec = self.spectrum;
        let total = spec.total() as f64;
        // Indices k with |2k − Σ − x| ≤ 1.
        let lo = ((x - 1.0 + total) / 2.0).ceil().max(0.0);
        let hi = ((x + 1.0 + total) / 2.0).floor().min(total);
        if lo > hi {
            return 0.0;
        }
        let mass: u64 = (lo as usize..=hi as usize).map(|k| spec.count(k)).sum();
        mass as f64 * pow2(-(spec.n() as i64) - 1)
    }
}

/// An exact dyadic rational `numerator / 2^denominator_log2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DyadicRational {
    #[serde(serialize_with = "crate::json::u128_as_string")]
    pub numerator: u128,
    pub denominator_log2: u32,
}

impl DyadicRational {
    pub fn to_f64(self) -> f64 {
        self.numerator as f64 * pow2(-(self.denominator_log2 as i64))
    }
}

/// `‖h∗µ‖²` with its exact value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SmoothedNorm {
    pub exact: DyadicRational,
    pub value: f64,
}

/// `‖h∗µ‖² = 4⁻ⁿ · ¼ · Σ_{u,v} r(u)r(v)·max(0, 2 − |u − v|)`. Integer support
/// points are 2 apart, so only `u = v` survives and the result is
/// `Σr² / 2^{2n+1}`, exactly half the collision probability.
pub fn l2_norm_sq_smoothed(sd: &SmoothedDensity<'_>) -> Result<SmoothedNorm> {
    let c = collision_probability(sd.spectrum)?;
    let exact = DyadicRational {
        numerator: c.numerator,
        denominator_log2: c.denominator_log2 + 1,
    };
    Ok(SmoothedNorm {
        exact,
        value: exact.to_f64(),
    })
}

/// `‖h∗µ‖²` for a real step set, summing the overlap of every pair of walk
/// values closer than 2 (subset sums closer than 1).
pub fn l2_norm_sq_smoothed_real(set: &RealSet) -> Result<f64> {
    check_capacity("cardinality", set.len() as u128, MAX_SEPARATION_LEN as u128)?;
    let sums = sorted_subset_sums(set.elements());
    let mut overlap = KahanSum::new();
    for i in 0..sums.len() {
        // Diagonal pair contributes 2; each off-diagonal pair twice.
        overlap.add(2.0);
        for &s in &sums[i + 1..] {
            let gap = 2.0 * (s - sums[i]);
            if gap >= 2.0 {
                break;
            }
            overlap.add(2.0 * (2.0 - gap));
        }
    }
    Ok(overlap.total() * 0.25 * pow2(-2 * set.len() as i64))
}

/// `‖γ‖² = 1 / (2√π σ)`.
pub fn l2_norm_sq_gaussian(g: &GaussianModel) -> f64 {
    1.0 / (2.0 * PI.sqrt() * g.sigma())
}

/// `∫(h∗µ)γ = 2^{−n−1} Σ_v r(v)·[Φ((v+1)/σ) − Φ((v−1)/σ)]`.
pub fn cross_term(sd: &SmoothedDensity<'_>, g: &GaussianModel) -> f64 {
    let sigma = g.sigma();
    let mut acc = KahanSum::new();
    for (v, c) in sd.spectrum.nonzero() {
        let v = v as f64;
        acc.add(c as f64 * normal_interval_mass((v - 1.0) / sigma, (v + 1.0) / sigma));
    }
    acc.total() * pow2(-(sd.spectrum.n() as i64) - 1)
}

/// Spatial-side record of `∫((h∗µ) − γ)²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GaussianDistance {
    pub l2_smoothed: f64,
    pub l2_gaussian: f64,
    pub cross: f64,
    pub distance: f64,
    pub distance_times_2n: f64,
}

/// `‖h∗µ − γ‖² = ‖h∗µ‖² − 2⟨h∗µ, γ⟩ + ‖γ‖²` against the variance-matched γ.
pub fn gaussian_l2_distance(
    sd: &SmoothedDensity<'_>,
    g: &GaussianModel,
) -> Result<GaussianDistance> {
    let expected = moments(sd.spectrum).variance as f64;
    if g.variance() != expected {
        return Err(Error::VarianceMismatch {
            gaussian: g.variance(),
            spectrum: expected,
        });
    }
    let l2_smoothed = l2_norm_sq_smoothed(sd)?.value;
    let l2_gaussian = l2_norm_sq_gaussian(g);
    let cross = cross_term(sd, g);
    let distance = l2_smoothed - 2.0 * cross + l2_gaussian;
    Ok(GaussianDistance {
        l2_smoothed,
        l2_gaussian,
        cross,
        distance,
        distance_times_2n: distance * pow2(sd.spectrum.n() as i64),
    })
}
