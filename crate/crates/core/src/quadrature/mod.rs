//! Fourier side of the collision identity: the integrand
//! `F(x) = sinc²(2πx) ∏cos²(2πaᵢx)` over the full line, the near region
//! `|x| ≤ 1/(4aₙ)` and its complement, plus the auxiliary near-origin
//! integrals.
//!
//! Integer sets never integrate the full line directly: the product is
//! 1-periodic and `Σ_k sinc²(2π(x−k)) = (1 + cos 2πx)/2`, so the full
//! integral collapses to one period, and beyond `aₙ = 10⁴` to its exact
//! combinatorial value.

pub(crate) mod gauss_kronrod;

use std::f64::consts::{PI, SQRT_2};

use num_bigint::BigUint;
use serde::Serialize;

pub use gauss_kronrod::{integrate, Estimate};

use crate::numeric::{big_to_f64_scaled, cos_2pi, cos_product, pow2, sinc_2pi};
use crate::sets::StepSet;
use crate::smoothing::{l2_norm_sq_smoothed, DyadicRational, SmoothedDensity};
use crate::spectrum::{build_spectrum, MAX_SPECTRUM_TOTAL};
use crate::{Error, Result};

/// Direct quadrature is only attempted when `aₙ` is at most this.
pub const MAX_DIRECT_LARGEST: f64 = 1e4;
/// Cap on the initial panel grid of any single integration.
pub const MAX_INITIAL_PANELS: usize = 1 << 18;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Bisections allowed beyond the initial grid.
    pub max_subdivisions: usize,
    /// Initial panels per period of the fastest cosine factor.
    pub oscillation_oversampling: usize,
    /// Truncation point for the real-set full-line integral. `None` picks
    /// the largest cutoff the initial panel cap allows.
    pub tail_cutoff: Option<f64>,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-9,
            abs_tol: 1e-15,
            max_subdivisions: 100_000,
            oscillation_oversampling: 8,
            tail_cutoff: None,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::InvalidArgument("tolerances must be positive".into()));
        }
        if self.oscillation_oversampling < 4 {
            return Err(Error::InvalidArgument(
                "oscillation_oversampling must be >= 4".into(),
            ));
        }
        if let Some(x) = self.tail_cutoff {
            if !(x.is_finite() && x > 0.0) {
                return Err(Error::InvalidArgument(
                    "tail_cutoff must be positive".into(),
                ));
            }
        }
        Ok(())
    }

    /// Panels for `[a, b]` when the fastest factor is `cos²(2π·freq·x)`.
    fn panels_for(&self, length: f64, freq: f64) -> Result<usize> {
        let periods = length * 2.0 * freq.max(1.0);
        let panels = (periods * self.oscillation_oversampling as f64)
            .ceil()
            .max(1.0);
        if panels > MAX_INITIAL_PANELS as f64 {
            return Err(Error::Capacity {
                what: "initial quadrature panels",
                got: panels as u128,
                limit: MAX_INITIAL_PANELS as u128,
            });
        }
        Ok(panels as usize)
    }
}

/// `F(x) = sinc²(2πx) ∏cos²(2πaᵢx)`, in `[0, 1]`.
pub fn integrand<S: StepSet + ?Sized>(set: &S, x: f64) -> f64 {
    integrand_steps(&set.steps(), x)
}

#[inline]
fn integrand_steps(steps: &[f64], x: f64) -> f64 {
    let s = sinc_2pi(x);
    let p = cos_product(steps, x);
    s * s * p * p
}

/// How [`integrate_full`] obtained its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FullRoute {
    /// Integer set: one period with weight `(1 + cos 2πx)/2`.
    Periodized,
    /// Integer set too wide to integrate: the exact collision value.
    Exact,
    /// Real set: `[−X, X]` plus the sinc² tail bound.
    Truncated,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FullIntegral {
    pub value: f64,
    pub error: f64,
    pub route: FullRoute,
    pub tail_cutoff: Option<f64>,
    /// `Σr² / 2^{2n+1}` for integer sets within spectrum capacity.
    pub exact: Option<DyadicRational>,
}

/// Exact full-line integral of an integer set, via the spectrum.
pub fn exact_full<S: StepSet + ?Sized>(set: &S) -> Result<Option<DyadicRational>> {
    let Some(int) = set.as_integer() else {
        return Ok(None);
    };
    if int.total() > MAX_SPECTRUM_TOTAL {
        return Ok(None);
    }
    let spec = build_spectrum(int)?;
    Ok(Some(
        l2_norm_sq_smoothed(&SmoothedDensity::new(&spec))?.exact,
    ))
}

/// `∫_ℝ F`. See [`FullRoute`] for the strategy per set type.
pub fn integrate_full<S: StepSet + ?Sized>(
    set: &S,
    cfg: &QuadratureConfig,
) -> Result<FullIntegral> {
    cfg.validate()?;
    let steps = set.steps();
    let largest = set.largest_step();
    let exact = exact_full(set)?;

    if set.as_integer().is_some() {
        if largest <= MAX_DIRECT_LARGEST {
            // (1/2)∫₀¹ = ∫₀^{1/2} by the symmetry x ↦ 1 − x.
            let panels = cfg.panels_for(0.5, largest)?;
            let est = integrate(
                |x| (1.0 + cos_2pi(1.0, x)) * cos_product(&steps, x).powi(2),
                0.0,
                0.5,
                panels,
                cfg,
            )?;
            return Ok(FullIntegral {
                value: est.value,
                error: est.error,
                route: FullRoute::Periodized,
                tail_cutoff: None,
                exact,
            });
        }
        return match exact {
            Some(e) => Ok(FullIntegral {
                value: e.to_f64(),
                error: 0.0,
                route: FullRoute::Exact,
                tail_cutoff: None,
                exact,
            }),
            None => Err(Error::Capacity {
                what: "subset-sum total",
                got: set.as_integer().map_or(0, |s| s.total()),
                limit: MAX_SPECTRUM_TOTAL,
            }),
        };
    }

    if largest > MAX_DIRECT_LARGEST {
        return Err(Error::Capacity {
            what: "largest element for direct quadrature",
            got: largest.ceil() as u128,
            limit: MAX_DIRECT_LARGEST as u128,
        });
    }
    let cutoff = match cfg.tail_cutoff {
        Some(x) => x,
        None => {
            let floor = pow2(-(steps.len() as i64) - 1);
            let wanted = 1.0 / (2.0 * PI * PI * cfg.rel_tol * floor);
            let affordable = MAX_INITIAL_PANELS as f64
                / (2.0 * largest.max(1.0) * cfg.oscillation_oversampling as f64);
            wanted.min(affordable)
        }
    };
    let panels = cfg.panels_for(cutoff, largest)?;
    let est = integrate(|x| integrand_steps(&steps, x), 0.0, cutoff, panels, cfg)?;
    // ∫_{|x|>X} sinc² ≤ 2∫_X^∞ (2πx)⁻² dx.
    let tail = 1.0 / (2.0 * PI * PI * cutoff);
    Ok(FullIntegral {
        value: 2.0 * est.value,
        error: 2.0 * est.error + tail,
        route: FullRoute::Truncated,
        tail_cutoff: Some(cutoff),
        exact,
    })
}

/// Half-width `1/(4aₙ)` of the region where every cosine factor is
/// nonnegative.
pub fn near_boundary<S: StepSet + ?Sized>(set: &S) -> f64 {
    0.25 / set.largest_step()
}

/// `∫_{|x| ≤ 1/(4aₙ)} F`.
pub fn integrate_near<S: StepSet + ?Sized>(set: &S, cfg: &QuadratureConfig) -> Result<Estimate> {
    let steps = set.steps();
    let edge = near_boundary(set);
    let panels = cfg.panels_for(edge, set.largest_step())?;
    let est = integrate(|x| integrand_steps(&steps, x), 0.0, edge, panels, cfg)?;
    Ok(Estimate {
        value: 2.0 * est.value,
        error: 2.0 * est.error,
        ..est
    })
}

/// Exact Wallis value `(1/(2πaₙ))·(π/4ⁿ)·C(2n,n) = C(2n,n) / (2aₙ·4ⁿ)` of
/// `∫_{|x|≤1/(4aₙ)} cos(2πaₙx)^{2n} dx`.
#[derive(Clone, Debug, PartialEq)]
pub struct WallisBound {
    pub central_binomial: BigUint,
    /// `C(2n,n) / 4ⁿ`.
    pub normalized: f64,
    pub value: f64,
    /// `1 / (2aₙ √(πn))`.
    pub asymptotic: f64,
}

pub fn wallis_bound(n: usize, a_n: f64) -> Result<WallisBound> {
    if n == 0 {
        return Err(Error::InvalidArgument("wallis_bound needs n >= 1".into()));
    }
    if !(a_n.is_finite() && a_n > 0.0) {
        return Err(Error::InvalidArgument("a_n must be positive".into()));
    }
    let central_binomial: BigUint =
        num_integer::binomial(BigUint::from(2 * n as u64), BigUint::from(n as u64));
    let normalized = big_to_f64_scaled(&central_binomial, -2 * n as i64);
    Ok(WallisBound {
        normalized,
        value: normalized / (2.0 * a_n),
        asymptotic: 1.0 / (2.0 * a_n * (PI * n as f64).sqrt()),
        central_binomial,
    })
}

/// `∫_{|x|≤1/(4aₙ)} |sinc(2πx) ∏cos(2πaᵢx) − exp(−2π²x²Σaᵢ²)|² dx`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NearGaussianDifference {
    pub value: f64,
    pub error: f64,
    /// `value · 2ⁿ`.
    pub ratio_to_2_pow_minus_n: f64,
}

pub fn near_gaussian_difference<S: StepSet + ?Sized>(
    set: &S,
    cfg: &QuadratureConfig,
) -> Result<NearGaussianDifference> {
    let steps = set.steps();
    let variance = set.variance();
    let edge = near_boundary(set);
    let panels = cfg.panels_for(edge, set.largest_step())?;
    let est = integrate(
        |x| {
            let d =
                sinc_2pi(x) * cos_product(&steps, x) - (-2.0 * PI * PI * x * x * variance).exp();
            d * d
        },
        0.0,
        edge,
        panels,
        cfg,
    )?;
    let value = 2.0 * est.value;
    Ok(NearGaussianDifference {
        value,
        error: 2.0 * est.error,
        ratio_to_2_pow_minus_n: value * pow2(steps.len() as i64),
    })
}

/// `(√2 − 1)/(2√π) · (Σaᵢ²)^{−1/2}`, the far-region floor.
pub fn far_floor(variance: f64) -> f64 {
    (SQRT_2 - 1.0) / (2.0 * PI.sqrt()) / variance.sqrt()
}

/// `aₙ² · n^{exponent} / Σaᵢ²`.
pub fn hypothesis_ratio<S: StepSet + ?Sized>(set: &S, exponent: f64) -> f64 {
    let a = set.largest_step();
    a * a * (set.steps().len() as f64).powf(exponent) / set.variance()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FarIntegral {
    pub value: f64,
    pub error: f64,
    pub floor: f64,
    pub floor_ratio: f64,
    /// `aₙ² · n^{2/3} / Σaᵢ²`; the floor is only expected when this is small.
    pub hypothesis_ratio: f64,
}

fn far_from(full: &FullIntegral, near: &Estimate, variance: f64, hypothesis: f64) -> FarIntegral {
    let (total, total_err) = match full.exact {
        Some(e) => (e.to_f64(), 0.0),
        None => (full.value, full.error),
    };
    let value = total - near.value;
    let floor = far_floor(variance);
    FarIntegral {
        value,
        error: total_err + near.error,
        floor,
        floor_ratio: value / floor,
        hypothesis_ratio: hypothesis,
    }
}

/// `∫_{|x| ≥ 1/(4aₙ)} F = full − near`, using the exact full value when one
/// exists.
pub fn integrate_far<S: StepSet + ?Sized>(set: &S, cfg: &QuadratureConfig) -> Result<FarIntegral> {
    let full = integrate_full(set, cfg)?;
    let near = integrate_near(set, cfg)?;
    Ok(far_from(
        &full,
        &near,
        set.variance(),
        hypothesis_ratio(set, 2.0 / 3.0),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RegionRatios {
    /// `full · 2^{n+1}`; 1 exactly for separated sets.
    pub full_over_floor: f64,
    pub near_over_wallis: f64,
    pub near_over_wallis_asymptotic: f64,
    pub far_over_floor: f64,
    pub hypothesis_n_2_3: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RegionIntegrals {
    pub near: f64,
    pub far: f64,
    pub full: f64,
    pub near_error_est: f64,
    pub far_error_est: f64,
    pub full_error_est: f64,
    pub route: FullRoute,
    pub tail_cutoff: Option<f64>,
    pub exact_full: Option<f64>,
    pub exact_full_rational: Option<DyadicRational>,
    /// `2^{−(n+1)}`.
    pub theorem1_floor: f64,
    pub ratios: RegionRatios,
}

/// Near, far and full integrals with their diagnostic ratios.
pub fn region_integrals<S: StepSet + ?Sized>(
    set: &S,
    cfg: &QuadratureConfig,
) -> Result<RegionIntegrals> {
    let n = set.steps().len();
    let full = integrate_full(set, cfg)?;
    let near = integrate_near(set, cfg)?;
    let far = far_from(
        &full,
        &near,
        set.variance(),
        hypothesis_ratio(set, 2.0 / 3.0),
    );
    let wallis = wallis_bound(n, set.largest_step())?;
    let floor = pow2(-(n as i64) - 1);
    Ok(RegionIntegrals {
        near: near.value,
        far: far.value,
        full: full.value,
        near_error_est: near.error,
        far_error_est: far.error,
        full_error_est: full.error,
        route: full.route,
        tail_cutoff: full.tail_cutoff,
        exact_full: full.exact.map(DyadicRational::to_f64),
        exact_full_rational: full.exact,
        theorem1_floor: floor,
        ratios: RegionRatios {
            full_over_floor: full.value / floor,
            near_over_wallis: near.value / wallis.value,
            near_over_wallis_asymptotic: near.value / wallis.asymptotic,
            far_over_floor: far.floor_ratio,
            hypothesis_n_2_3: far.hypothesis_ratio,
        },
    })
}

/// `Σ_{|k|≤K} sinc²(2π(x − k))`, which tends to `(1 + cos 2πx)/2`.
pub fn periodized_sinc_sq(x: f64, k_max: u64) -> f64 {
    let mut acc = crate::numeric::KahanSum::new();
    let k_max = k_max as i64;
    for k in -k_max..=k_max {
        let s = sinc_2pi(x - k as f64);
        acc.add(s * s);
    }
    acc.total()
}
