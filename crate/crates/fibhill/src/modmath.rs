//! Exact modular integer arithmetic: power, inverse, primality, primitive
//! roots and small factorization. Everything else in the crate sits on top
//! of this module.
//!
//! Moduli are capped below 2^31 so that a product of two residues always
//! fits in unsigned 64-bit arithmetic; primality testing alone works over
//! the full `u64` range (it widens to 128 bits internally).

use crate::error::{Error, Result};

/// Largest allowed modulus (exclusive): residue products must fit in u64.
pub const MAX_MODULUS: u64 = 1 << 31;

/// Canonical representative of `x` in `[0, m)`, for possibly negative `x`.
///
/// ```
/// assert_eq!(fibhill::modmath::reduce(-3, 37), 34);
/// assert_eq!(fibhill::modmath::reduce(40, 37), 3);
/// ```
pub fn reduce(x: i64, m: u64) -> u64 {
    let m = m as i64;
    (((x % m) + m) % m) as u64
}

/// `base^exp mod m` by square-and-multiply; `exp = 0` gives `1 mod m`.
pub fn mod_pow(base: u64, exp: u64, m: u64) -> Result<u64> {
    if m < 2 {
        return Err(Error::InvalidModulus(m));
    }
    if m >= MAX_MODULUS {
        return Err(Error::ModulusTooLarge(m));
    }
    let mut result = 1 % m;
    let mut base = base % m;
    let mut exp = exp;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    Ok(result)
}

/// Modular inverse by extended Euclid; errors when `gcd(a, m) != 1`.
pub fn mod_inv(a: u64, m: u64) -> Result<u64> {
    if m < 2 {
        return Err(Error::InvalidModulus(m));
    }
    let a = a % m;
    // Iterative extended Euclid on (a, m), tracking only the coefficient of a.
    let (mut old_r, mut r) = (a as i64, m as i64);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return Err(Error::NotInvertible(a, m));
    }
    Ok(reduce(old_s, m))
}

fn mul_mod_u128(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u128(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut result = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod_u128(result, base, m);
        }
        base = mul_mod_u128(base, base, m);
        exp >>= 1;
    }
    result
}

/// Deterministic Miller-Rabin, exact for all `n < 2^64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    // This witness set is exact below 3.3 * 10^24.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u128(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod_u128(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factors of `n` with multiplicity, ascending; empty for `n = 1`.
/// Trial division, intended for desk-scale inputs.
pub fn factorize(mut n: u64) -> Vec<u64> {
    let mut factors = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        while n.is_multiple_of(d) {
            factors.push(d);
            n /= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        factors.push(n);
    }
    factors
}

/// A prime modulus below 2^31, validated at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeModulus(u64);

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self> {
        if p >= MAX_MODULUS {
            return Err(Error::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeModulus(p))
    }

    pub fn value(self) -> u64 {
        self.0
    }
}

impl std::fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// True iff the multiplicative order of `alpha` mod `p` is `p - 1`,
/// checked via `alpha^((p-1)/q) != 1` for each distinct prime `q | p - 1`.
pub fn is_primitive_root(alpha: u64, p: PrimeModulus) -> Result<bool> {
    let p = p.value();
    if alpha == 0 {
        return Err(Error::InvalidArgument("alpha must be nonzero".into()));
    }
    let alpha = alpha % p;
    if p == 2 {
        return Ok(alpha == 1);
    }
    let phi = p - 1;
    let mut qs = factorize(phi);
    qs.dedup();
    for q in qs {
        if mod_pow(alpha, phi / q, p)? == 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Smallest primitive root of `p`; returns 1 for the degenerate group mod 2.
pub fn find_primitive_root(p: PrimeModulus) -> u64 {
    if p.value() == 2 {
        return 1;
    }
    (1..p.value())
        .find(|&a| is_primitive_root(a, p).unwrap_or(false))
        .expect("every prime has a primitive root")
}
