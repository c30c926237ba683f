// Copyright 2026 The ionfactor Authors
// SPDX-License-Identifier: Apache-2.0

use crate::error::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `a^x mod n` by square-and-multiply.
pub fn classical_modexp(a: u64, x: u64, n: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::Domain(format!("modulus must be at least 2, got {n}")));
    }
    if a == 0 || a >= n {
        return Err(Error::Domain(format!("base must lie in [1, {n}), got {a}")));
    }
    let n128 = u128::from(n);
    let mut base = u128::from(a);
    let mut exp = x;
    let mut acc: u128 = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % n128;
        }
        base = base * base % n128;
        exp >>= 1;
    }
    Ok(acc as u64)
}

/// Order of `a` modulo `n` by direct iteration. This is the reference every
/// period claim in the crate is checked against.
pub fn find_period(a: u64, n: u64) -> Result<u64> {
    if n < 2 || a == 0 || a >= n {
        return Err(Error::Domain(format!("need 1 <= a < n, got a = {a}, n = {n}")));
    }
    let g = gcd(a, n);
    if g != 1 {
        return Err(Error::TrivialFactor { a, n, factor: g });
    }
    let mut value = a % n;
    let mut r = 1;
    while value != 1 {
        value = (u128::from(value) * u128::from(a) % u128::from(n)) as u64;
        r += 1;
    }
    Ok(r)
}

/// Bits needed to hold any residue modulo `n`.
pub fn register_bits(n: u64) -> usize {
    (64 - (n.max(2) - 1).leading_zeros()) as usize
}
