//! Generalized Fibonacci (multinacci) sequences of order λ: each term is
//! the sum of the preceding λ terms, seeded by λ-1 zeros followed by a one.
//! Terms are defined for any signed index by running the recurrence
//! backward below zero, either in exact 64-bit integers or modulo m.

use crate::error::{Error, Result};
use crate::modmath::reduce;

/// Maximum accepted order; keeps key matrices desk-scale.
pub const MAX_ORDER: u64 = 64;

/// Order λ of a multinacci recurrence, restricted to [2, 64].
///
/// Order 1 is rejected: its "sequence" is constant and would yield a 1x1
/// identity-like key with no diffusion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultinacciOrder(u64);

impl MultinacciOrder {
    pub fn new(lambda: u64) -> Result<Self> {
        if !(2..=MAX_ORDER).contains(&lambda) {
            return Err(Error::InvalidOrder(lambda));
        }
        Ok(MultinacciOrder(lambda))
    }

    pub fn get(self) -> usize {
        self.0 as usize
    }

    pub fn value(self) -> u64 {
        self.0
    }
}

impl std::fmt::Display for MultinacciOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// A contiguous run of multinacci terms f_lo .. f_hi.
///
/// In exact mode (`modulus: None`) terms are signed integers; with a
/// modulus attached every term is the canonical residue in [0, m).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceWindow {
    pub order: MultinacciOrder,
    pub lo: i64,
    pub terms: Vec<i64>,
    pub modulus: Option<u64>,
}

impl SequenceWindow {
    /// Term at signed index `n`; panics if `n` is outside the window.
    pub fn term(&self, n: i64) -> i64 {
        self.terms[(n - self.lo) as usize]
    }
}

/// Seed window [0, 0, ..., 0, 1] covering indices 0 .. λ-1.
pub fn initial_values(order: MultinacciOrder) -> SequenceWindow {
    let lambda = order.get();
    let mut terms = vec![0i64; lambda];
    terms[lambda - 1] = 1;
    SequenceWindow {
        order,
        lo: 0,
        terms,
        modulus: None,
    }
}

/// Window of terms f_lo .. f_hi, exact when `modulus` is `None`.
///
/// The forward recurrence f_{k+λ} = f_k + ... + f_{k+λ-1} extends above
/// the seed block; f_k = f_{k+λ} - (f_{k+1} + ... + f_{k+λ-1}) extends
/// below index zero. Exact mode errors on 64-bit overflow instead of
/// wrapping.
///
/// ```
/// use fibhill::multinacci::{terms, MultinacciOrder};
///
/// let tribonacci = MultinacciOrder::new(3)?;
/// let window = terms(tribonacci, -8, 8, None)?;
/// assert_eq!(
///     window.terms,
///     vec![-8, 4, 1, -3, 2, 0, -1, 1, 0, 0, 1, 1, 2, 4, 7, 13, 24],
/// );
/// # Ok::<(), fibhill::Error>(())
/// ```
pub fn terms(
    order: MultinacciOrder,
    lo: i64,
    hi: i64,
    modulus: Option<u64>,
) -> Result<SequenceWindow> {
    if lo > hi {
        return Err(Error::InvalidRange { lo, hi });
    }
    if let Some(m) = modulus {
        if m < 2 {
            return Err(Error::InvalidModulus(m));
        }
    }
    let lambda = order.get() as i64;
    // Always compute a range that contains the seed block.
    let full_lo = lo.min(0);
    let full_hi = hi.max(lambda - 1);
    let len = (full_hi - full_lo + 1) as usize;
    let mut buf = vec![0i64; len];
    let at = |n: i64| (n - full_lo) as usize;

    buf[at(lambda - 1)] = 1;
    match modulus {
        None => {
            for n in lambda..=full_hi {
                let mut sum = 0i64;
                for t in 1..=lambda {
                    sum = sum.checked_add(buf[at(n - t)]).ok_or(Error::Overflow(n))?;
                }
                buf[at(n)] = sum;
            }
            for n in (full_lo..0).rev() {
                let mut sum = 0i64;
                for t in 1..lambda {
                    sum = sum.checked_add(buf[at(n + t)]).ok_or(Error::Overflow(n))?;
                }
                buf[at(n)] = buf[at(n + lambda)]
                    .checked_sub(sum)
                    .ok_or(Error::Overflow(n))?;
            }
        }
        Some(m) => {
            for n in lambda..=full_hi {
                let mut sum = 0u64;
                for t in 1..=lambda {
                    sum = (sum + buf[at(n - t)] as u64) % m;
                }
                buf[at(n)] = sum as i64;
            }
            for n in (full_lo..0).rev() {
                let mut sum = 0u64;
                for t in 1..lambda {
                    sum = (sum + buf[at(n + t)] as u64) % m;
                }
                // Canonical subtraction: add m before taking the difference.
                buf[at(n)] = ((buf[at(n + lambda)] as u64 + m - sum) % m) as i64;
            }
        }
    }

    let start = (lo - full_lo) as usize;
    let end = (hi - full_lo) as usize;
    Ok(SequenceWindow {
        order,
        lo,
        terms: buf[start..=end].to_vec(),
        modulus,
    })
}

/// Single term f_n mod m, canonical; runs entirely in mod-m arithmetic.
pub fn term_mod(order: MultinacciOrder, n: i64, m: u64) -> Result<u64> {
    let w = terms(order, n, n, Some(m))?;
    Ok(reduce(w.terms[0], m))
}
