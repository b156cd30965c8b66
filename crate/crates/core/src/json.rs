//! Serde adapters: integers that may exceed 2⁵³ go out as decimal strings.

use num_bigint::BigUint;
use serde::Serializer;

pub fn u128_as_string<S: Serializer>(v: &u128, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub fn biguint_as_string<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}
