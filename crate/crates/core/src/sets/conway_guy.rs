use super::IntegerSet;
use crate::{Error, Result};

/// Largest supported length; `u_64` is just below 2⁶³.
pub const MAX_CONWAY_GUY_LEN: usize = 64;

/// The Conway–Guy sequence `u₀ = 0, u₁ = 1, u_{k+1} = 2u_k − u_{k−r}` with
/// `r` the integer nearest to `√(2k)`.
pub fn conway_guy_sequence(len: usize) -> Vec<u64> {
    let mut u: Vec<u64> = vec![0, 1];
    for k in 1..len.saturating_sub(1) {
        let r = nearest_sqrt_of_double(k as u64) as usize;
        u.push(2 * u[k] - u[k - r]);
    }
    u.truncate(len);
    u
}

/// Nearest integer to `√(2k)`. `√(2k)` is never a half-integer, so
/// `√(2k) > r + ½ ⇔ 2k > r² + r` with `r = ⌊√(2k)⌋`.
fn nearest_sqrt_of_double(k: u64) -> u64 {
    let m = 2 * k;
    let r = m.isqrt();
    if m > r * r + r {
        r + 1
    } else {
        r
    }
}

/// The n-element Conway–Guy set `{u_n − u_{n−j} : j = 1..n}`.
pub fn conway_guy(n: usize) -> Result<IntegerSet> {
    if !(1..=MAX_CONWAY_GUY_LEN).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "conway_guy length must be in 1..={MAX_CONWAY_GUY_LEN}, got {n}"
        )));
    }
    let u = conway_guy_sequence(n + 1);
    let mut elements: Vec<u64> = (1..=n).map(|j| u[n] - u[n - j]).collect();
    elements.sort_unstable();
    IntegerSet::new(elements)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequence_prefix() {
        assert_eq!(conway_guy_sequence(8), vec![0, 1, 2, 4, 7, 13, 24, 44]);
    }

    #[test]
    fn small_sets() {
        assert_eq!(conway_guy(1).unwrap().elements(), &[1]);
        assert_eq!(conway_guy(4).unwrap().elements(), &[3, 5, 6, 7]);
        assert_eq!(conway_guy(6).unwrap().elements(), &[11, 17, 20, 22, 23, 24]);
    }

    #[test]
    fn anchor_at_twenty_two() {
        // Must never drift: the recurrence is validated against this value.
        assert_eq!(conway_guy(22).unwrap().largest(), 1_051_905);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(conway_guy(0).is_err());
        assert!(conway_guy(65).is_err());
        assert!(conway_guy(64).is_ok());
    }
}
