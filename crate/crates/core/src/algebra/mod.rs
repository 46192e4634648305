//! Exact arithmetic: rationals, univariate polynomials over Q, finite fields
//! `F_{p^m}`, residue rings `Z/p^k`, truncated power series and rational
//! functions in one variable.

mod field;
mod poly;
mod ratfn;
mod trunc;
mod zmod;

pub use field::{field_make, is_prime, FieldDesc, FqElem};
pub(crate) use field::LogTables;
pub use poly::Poly;
pub use ratfn::{ratfn_substitute_inverse, RatFn};
pub use trunc::TruncSeries;
pub use zmod::ZmodElem;
pub(crate) use zmod::{mul_mod as zmod_mul, pow_mod as zmod_pow, prime_power};

use num_bigint::BigInt;
use num_rational::BigRational;

/// Exact rational number. `BigRational` keeps numerator and denominator
/// coprime with a positive denominator.
pub type Rat = BigRational;

/// Shorthand for `n/d`; panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a rational.
pub fn rat_int(n: impl Into<BigInt>) -> Rat {
    Rat::from_integer(n.into())
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of order {p}^{m} is too large")]
    FieldTooLarge { p: u64, m: u32 },
    #[error("truncation orders differ ({0} vs {1})")]
    OrderMismatch(usize, usize),
    #[error("series has zero constant term and cannot be inverted")]
    NotInvertible,
    #[error("exp needs a series with constant term 0")]
    ExpConstantTerm,
    #[error("log needs a series with constant term 1")]
    LogConstantTerm,
    #[error("denominator vanishes at T = 0")]
    PoleAtZero,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("modulus {p}^{k} does not fit in 64 bits")]
    PrecisionTooLarge { p: u64, k: u32 },
    #[error("elements belong to different rings")]
    RingMismatch,
}
