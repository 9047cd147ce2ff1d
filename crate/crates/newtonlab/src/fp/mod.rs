//! Arithmetic over the prime field `F_p`: dense polynomials with
//! factorization, rational functions in lowest terms, and a parser for the
//! expression syntax used on the command line.

mod parse;
mod poly;
mod ratfunc;

pub use parse::parse_ratfunc;
pub use poly::FpPoly;
pub use ratfunc::RatFunc;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FpError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("cannot parse rational function: {0}")]
    Parse(String),
}

/// Trial-division primality check; inputs here are desk scale.
pub fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn require_odd_prime(p: u64) -> Result<(), FpError> {
    if is_odd_prime(p) {
        Ok(())
    } else {
        Err(FpError::NotOddPrime(p))
    }
}

#[inline]
pub(crate) fn mod_add(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub(crate) fn mod_sub(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
pub(crate) fn mod_mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn mod_pow(mut base: u64, mut exp: u128, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base, p);
        }
        base = mod_mul(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue via Fermat.
pub(crate) fn mod_inv(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    mod_pow(a, (p - 2) as u128, p)
}
