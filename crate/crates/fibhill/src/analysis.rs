//! Keyspace quantification and a structured known-plaintext attack.
//!
//! A naive key search over λ x λ matrices must cover |GL_λ(F_p)|
//! candidates; the scheme only ever reaches powers of one companion
//! matrix, so its effective keyspace is the multiplicative period of
//! Q_λ mod p. The attack below exploits exactly that gap.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::cipher::Block;
use crate::error::{Error, Result};
use crate::modmath::PrimeModulus;
use crate::multinacci::MultinacciOrder;
use crate::qmatrix::{mat_mul, q_matrix, ModMatrix};

/// |GL_λ(F_p)| = (p^λ - p^(λ-1)) (p^λ - p^(λ-2)) ... (p^λ - 1), exact.
///
/// λ = 1 is accepted here (the group of units, order p - 1) even though
/// the cipher itself rejects order-1 keys.
///
/// ```
/// use fibhill::analysis::gl_order;
/// use fibhill::modmath::PrimeModulus;
///
/// let p = PrimeModulus::new(37)?;
/// assert_eq!(gl_order(1, p).to_string(), "36");
/// assert_eq!(gl_order(2, p).to_string(), "1822176");
/// assert_eq!(gl_order(3, p).to_string(), "126354399631488");
/// # Ok::<(), fibhill::Error>(())
/// ```
pub fn gl_order(lambda: u64, p: PrimeModulus) -> BigUint {
    let p = BigUint::from(p.value());
    let p_lambda = p.pow(lambda as u32);
    let mut total = BigUint::one();
    for i in 0..lambda {
        total *= &p_lambda - p.pow(i as u32);
    }
    total
}

/// Approximate log10 of a big integer, good to ~14 digits.
fn log10_big(n: &BigUint) -> f64 {
    let s = n.to_string();
    let head: f64 = s[..s.len().min(15)].parse().unwrap();
    head.log10() + (s.len() - s.len().min(15)) as f64
}

/// Exact count of distinct matrices Q_λ^k mod p over k in [1, k_max],
/// with the detected period of k -> Q_λ^k if one occurs in range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuredCount {
    pub count: u64,
    pub period: Option<u64>,
}

pub fn structured_keyspace(
    p: PrimeModulus,
    lambda: MultinacciOrder,
    k_max: u64,
) -> Result<StructuredCount> {
    let q = q_matrix(lambda, p.value())?;
    let mut seen: HashSet<ModMatrix> = HashSet::new();
    let mut acc = q.matrix().clone();
    for k in 1..=k_max {
        if acc.is_identity() {
            // First return to the identity closes the cycle: powers 1..k
            // were all distinct, and everything beyond repeats.
            return Ok(StructuredCount {
                count: seen.len() as u64 + 1,
                period: Some(k),
            });
        }
        seen.insert(acc.clone());
        acc = mat_mul(&acc, q.matrix())?;
    }
    Ok(StructuredCount {
        count: seen.len() as u64,
        period: None,
    })
}

/// Report contrasting the naive GL count against the structured keyspace.
#[derive(Debug, Clone, Serialize)]
pub struct KeyspaceReport {
    pub p: u64,
    pub lambda: u64,
    /// Exact |GL_λ(F_p)| as a decimal string.
    pub gl_order: String,
    pub structured_count: u64,
    pub period: Option<u64>,
    /// log10 of gl_order / structured_count.
    pub ratio_log10: f64,
}

pub fn keyspace_report(
    p: PrimeModulus,
    lambda: MultinacciOrder,
    k_max: u64,
) -> Result<KeyspaceReport> {
    let gl = gl_order(lambda.value(), p);
    let sc = structured_keyspace(p, lambda, k_max)?;
    let ratio_log10 = log10_big(&gl) - (sc.count.max(1) as f64).log10();
    Ok(KeyspaceReport {
        p: p.value(),
        lambda: lambda.value(),
        gl_order: gl.to_string(),
        structured_count: sc.count,
        period: sc.period,
        ratio_log10,
    })
}

/// Outcome of a structured brute-force search: every (λ, k) consistent
/// with all supplied block pairs, in (λ ascending, k ascending) order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackResult {
    pub candidates: Vec<(u64, u64)>,
    pub tried: u64,
    pub elapsed: Duration,
}

/// Enumerate λ in [2, lambda_max], k in [1, k_max] and keep every pair
/// whose key matrix reproduces all plaintext/ciphertext pairs.
///
/// With B known one pair suffices; with B unknown two pairs are needed,
/// since the difference C_i - C_0 = (P_i - P_0) K eliminates B. Orders
/// that do not match the block length cannot be consistent and are
/// skipped without counting. `tried_cap`, when set, bounds the number of
/// (λ, k) tests as a cooperative cancellation budget.
///
/// ```
/// use fibhill::analysis::known_plaintext_attack;
/// use fibhill::modmath::PrimeModulus;
///
/// let pairs = vec![
///     (vec![7, 4, 11], vec![7, 15, 29]),
///     (vec![11, 14, 28], vec![35, 29, 8]),
/// ];
/// let p = PrimeModulus::new(37)?;
/// let shift = [31, 13, 19];
/// let result = known_plaintext_attack(&pairs, p, Some(&shift), 8, 100, None)?;
/// assert!(result.candidates.contains(&(3, 4)));
/// # Ok::<(), fibhill::Error>(())
/// ```
pub fn known_plaintext_attack(
    pairs: &[(Block, Block)],
    p: PrimeModulus,
    b_known: Option<&[u64]>,
    lambda_max: u64,
    k_max: u64,
    tried_cap: Option<u64>,
) -> Result<AttackResult> {
    let need = if b_known.is_some() { 1 } else { 2 };
    if pairs.len() < need {
        return Err(Error::InsufficientPairs {
            need,
            got: pairs.len(),
        });
    }
    let start = Instant::now();
    let pv = p.value();
    let mut candidates = Vec::new();
    let mut tried = 0u64;
    'outer: for lambda in 2..=lambda_max {
        if pairs.iter().any(|(pb, cb)| {
            pb.len() as u64 != lambda || cb.len() as u64 != lambda
        }) {
            continue;
        }
        let order = MultinacciOrder::new(lambda)?;
        let q = q_matrix(order, pv)?;
        let mut key = q.matrix().clone();
        for k in 1..=k_max {
            if let Some(cap) = tried_cap {
                if tried >= cap {
                    break 'outer;
                }
            }
            tried += 1;
            if matches_all(pairs, &key, b_known, pv) {
                candidates.push((lambda, k));
            }
            key = mat_mul(&key, q.matrix())?;
        }
    }
    Ok(AttackResult {
        candidates,
        tried,
        elapsed: start.elapsed(),
    })
}

fn row_times(key: &ModMatrix, row: &[u64], p: u64) -> Vec<u64> {
    let n = key.cols();
    (0..n)
        .map(|j| {
            row.iter()
                .enumerate()
                .fold(0u64, |s, (t, &v)| (s + v * key.get(t, j)) % p)
        })
        .collect()
}

fn matches_all(pairs: &[(Block, Block)], key: &ModMatrix, b_known: Option<&[u64]>, p: u64) -> bool {
    match b_known {
        Some(b) => pairs.iter().all(|(pb, cb)| {
            row_times(key, pb, p)
                .iter()
                .zip(b.iter().zip(cb))
                .all(|(&pk, (&bj, &cj))| (pk + bj) % p == cj)
        }),
        None => {
            let (p0, c0) = &pairs[0];
            pairs[1..].iter().all(|(pb, cb)| {
                let dp: Vec<u64> = pb.iter().zip(p0).map(|(&x, &y)| (x + p - y) % p).collect();
                let dc: Vec<u64> = cb.iter().zip(c0).map(|(&x, &y)| (x + p - y) % p).collect();
                row_times(key, &dp, p) == dc
            })
        }
    }
}
