//! Small number theory helpers used by the counting formula and by φ.

use num_bigint::BigUint;
use num_integer::Integer;

use crate::error::{Error, Result};

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Euler's totient by trial division.
pub fn euler_phi(m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::Precondition("euler_phi is defined for m >= 1".into()));
    }
    let mut rest = m;
    let mut result = m;
    let mut p = 2;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            while rest.is_multiple_of(p) {
                rest /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if rest > 1 {
        result -= result / rest;
    }
    Ok(result)
}

/// Exact binomial coefficient `C(a, b)`.
pub fn binomial(a: u64, b: u64) -> Result<BigUint> {
    if b > a {
        return Err(Error::Precondition(format!("binomial({a}, {b}) needs b <= a")));
    }
    let b = b.min(a - b);
    let mut acc = BigUint::from(1u32);
    for i in 0..b {
        // the running product is C(a, i + 1) after this step, so the division is exact
        acc *= a - i;
        acc /= i + 1;
    }
    Ok(acc)
}

/// `C(a, b)` saturated into a `u64`, for sizing enumerations.
pub fn binomial_u64(a: u64, b: u64) -> Option<u64> {
    binomial(a, b).ok().and_then(|v| u64::try_from(v).ok())
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Inverse of `a` modulo `n` via the extended Euclidean algorithm, in `0..n`.
pub fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    if n == 0 {
        return None;
    }
    let ext = (a as i128 % n as i128).extended_gcd(&(n as i128));
    if ext.gcd != 1 {
        return if n == 1 { Some(0) } else { None };
    }
    Some(ext.x.rem_euclid(n as i128) as u64)
}

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}
