//! Small floating-point kernels shared across modules: phase-reduced
//! trigonometry, `sinc`, compensated summation and the normal CDF.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use crate::quadrature::gauss_kronrod::{GAUSS7_NODES, GAUSS7_WEIGHTS};

/// Fractional part of `a * x` reduced to `[-1/2, 1/2]`, computed with an
/// error-free product so large `a * x` keeps its low-order phase bits.
#[inline]
pub fn reduced_phase(a: f64, x: f64) -> f64 {
    let p = a * x;
    let e = a.mul_add(x, -p);
    (p - p.round()) + e
}

/// `cos(2π a x)`.
#[inline]
pub fn cos_2pi(a: f64, x: f64) -> f64 {
    (TAU * reduced_phase(a, x)).cos()
}

/// `∏ cos(2π aᵢ x)`, the characteristic function of the signed walk.
pub fn cos_product(steps: &[f64], x: f64) -> f64 {
    steps.iter().map(|&a| cos_2pi(a, x)).product()
}

/// `sin(2πx) / (2πx)` with the removable singularity at zero.
#[inline]
pub fn sinc_2pi(x: f64) -> f64 {
    let t = TAU * x;
    if t.abs() < 1e-4 {
        let t2 = t * t;
        1.0 - t2 / 6.0 + t2 * t2 / 120.0
    } else {
        (TAU * reduced_phase(1.0, x)).sin() / t
    }
}

/// Neumaier compensated accumulator. Summation order is the caller's
/// iteration order, so results are reproducible.
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = KahanSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Standard normal density.
#[inline]
pub fn normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

/// Upper tail `P(Z > z)` of the standard normal.
#[inline]
pub fn normal_upper_tail(z: f64) -> f64 {
    0.5 * libm::erfc(z * FRAC_1_SQRT_2)
}

/// Standard normal CDF `Φ(z)`.
#[inline]
pub fn normal_cdf(z: f64) -> f64 {
    normal_upper_tail(-z)
}

/// `Φ(hi) − Φ(lo)` without catastrophic cancellation.
///
/// Narrow intervals are integrated directly with a 7-point Gauss rule (the
/// density is entire, so the rule is accurate to rounding for widths up to
/// one half). Wider intervals use whichever tail keeps both terms small.
pub fn normal_interval_mass(lo: f64, hi: f64) -> f64 {
    debug_assert!(lo <= hi);
    let width = hi - lo;
    if width <= 0.5 {
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * width;
        let mut acc = KahanSum::new();
        for (&node, &weight) in GAUSS7_NODES.iter().zip(GAUSS7_WEIGHTS.iter()) {
            acc.add(weight * normal_pdf(mid + half * node));
        }
        acc.total() * half
    } else if lo >= 0.0 {
        normal_upper_tail(lo) - normal_upper_tail(hi)
    } else if hi <= 0.0 {
        normal_upper_tail(-hi) - normal_upper_tail(-lo)
    } else {
        1.0 - normal_upper_tail(hi) - normal_upper_tail(-lo)
    }
}

/// `m · 2^e` for an integer mantissa given as a big unsigned integer.
pub(crate) fn big_to_f64_scaled(value: &num_bigint::BigUint, exp2: i64) -> f64 {
    use num_traits::ToPrimitive;
    let bits = value.bits() as i64;
    let shift = (bits - 64).max(0);
    let mantissa = (value >> shift as usize).to_u64().unwrap_or(u64::MAX) as f64;
    pow2(shift + exp2) * mantissa
}

/// `2^e` for exponents well outside `powi`'s comfortable range.
pub(crate) fn pow2(e: i64) -> f64 {
    let mut result = 1.0;
    let mut e = e;
    while e > 1000 {
        result *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        result *= 2f64.powi(-1000);
        e += 1000;
    }
    result * 2f64.powi(e as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sinc_is_continuous_across_series_switch() {
        let edge = 1e-4 / TAU;
        let below = sinc_2pi(edge * 0.999_999);
        let above = sinc_2pi(edge * 1.000_001);
        assert!((below - above).abs() < 1e-12);
        assert_eq!(sinc_2pi(0.0), 1.0);
        assert!(sinc_2pi(0.5).abs() < 1e-16);
    }

    #[test]
    fn phase_reduction_handles_large_products() {
        // 2^30 * 0.25 is an exact integer: phase must be exactly zero.
        assert_eq!(reduced_phase((1u64 << 30) as f64, 0.25), 0.0);
        assert!((cos_2pi(3.0, 1.0 / 3.0) - 1.0).abs() < 1e-15);
        assert!((cos_2pi(1.0, 0.25)).abs() < 1e-16);
    }

    #[test]
    fn interval_mass_matches_cdf_difference_where_stable() {
        for &(lo, hi) in &[
            (-2.0, 2.0),
            (0.0, 2.0),
            (-3.0, -0.25),
            (0.1, 0.3),
            (-0.2, 0.2),
        ] {
            let direct = normal_cdf(hi) - normal_cdf(lo);
            let stable = normal_interval_mass(lo, hi);
            assert!(
                (direct - stable).abs() <= 1e-15 * direct.abs().max(1.0),
                "{lo} {hi}"
            );
        }
    }

    #[test]
    fn interval_mass_is_relatively_accurate_for_tiny_widths() {
        // Width 2e-7 around z = 1: mass ≈ φ(1)·2e-7 with curvature correction.
        let (lo, hi) = (1.0 - 1e-7, 1.0 + 1e-7);
        let w = hi - lo;
        let mass = normal_interval_mass(lo, hi);
        let phi = normal_pdf(1.0);
        // ∫ φ over symmetric interval = φ(m)·w·(1 + (m²−1)w²/24 + …); m = 1 kills the term.
        assert!((mass / (phi * w) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn kahan_recovers_small_terms() {
        let mut acc = KahanSum::new();
        acc.add(1.0);
        for _ in 0..1000 {
            acc.add(1e-17);
        }
        acc.add(-1.0);
        assert!((acc.total() - 1e-14).abs() < 1e-26);
    }
}
