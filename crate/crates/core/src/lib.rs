//! Exact and numerical tools for sets with distinct subset sums.
//!
//! The signed walk `X = ±a₁ ± … ± aₙ` is the central object: its exact law
//! ([`spectrum`]), the box-smoothed law and the matched Gaussian
//! ([`smoothing`]), the Fourier-side collision integral split into near and
//! far regions ([`quadrature`]), the classical inequality ledger
//! ([`bounds`]) and a search harness for near-distinct sets ([`search`]).

pub mod bounds;
pub mod cli;
mod error;
mod json;
pub mod numeric;
pub mod quadrature;
pub mod search;
pub mod sets;
pub mod smoothing;
pub mod spectrum;

pub use error::{Error, Result};
pub use sets::{IntegerSet, RealSet};
pub use spectrum::SumSpectrum;
