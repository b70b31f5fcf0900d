//! Truncated q-series arithmetic and congruence verification for partitions
//! into parts that are simultaneously ℓ-regular and t-distinct.
//!
//! The series machinery is generic over a coefficient [`Ring`]; the aliases
//! below name the two instantiations used throughout: exact big integers and
//! integers modulo `m`.

pub mod catalog;
pub mod congruence;
pub mod error;
pub mod partition;
pub mod report;
pub mod ring;
pub mod series;
pub mod special;

pub use error::{Error, Result};
pub use ring::{CoefficientRing, Exact, ExactInteger, Modular, Ring};
pub use series::{Comparison, TruncatedSeries};

/// Arbitrary-precision integers.
pub type Integers = Exact<num_bigint::BigInt>;

/// Series with exact integer coefficients.
pub type ExactSeries = TruncatedSeries<Integers>;

/// Series with coefficients in `Z/mZ`.
pub type ModSeries = TruncatedSeries<Modular>;

pub use num_bigint::BigInt;
