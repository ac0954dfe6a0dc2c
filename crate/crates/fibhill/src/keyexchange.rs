//! ElGamal-style key agreement reduced to a pair of numbers: the receiver
//! publishes (p, e1, e2) with e2 = e1^d, the sender's ephemeral exponent e
//! yields the pair (k, λ) = (e1^e, e2^e) mod p, and the receiver recovers
//! λ = k^d mod p. The pair selects the cipher key matrix K = Q_λ^k.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modmath::{self, PrimeModulus};
use crate::multinacci::{MultinacciOrder, MAX_ORDER};
use crate::qmatrix::{self, QMatrix};

/// Receiver's public triple (p, e1, e2) with e1 a primitive root of p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PublicKey {
    pub p: PrimeModulus,
    pub e1: u64,
    pub e2: u64,
}

/// Receiver's secret exponent d, with e1 retained for re-derivation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrivateKey {
    pub p: PrimeModulus,
    pub e1: u64,
    pub d: u64,
}

/// The derived pair (k, λ): k selects the power, λ the matrix order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SessionKey {
    pub k: u64,
    pub lambda: MultinacciOrder,
}

/// Generate the keypair: e2 = alpha^d mod p. `alpha` defaults to the
/// smallest primitive root; a supplied alpha is validated.
pub fn make_keypair(
    p: PrimeModulus,
    d: u64,
    alpha: Option<u64>,
) -> Result<(PublicKey, PrivateKey)> {
    let phi = p.value() - 1;
    if !(1 < d && d < phi) {
        return Err(Error::ExponentOutOfRange(d, phi));
    }
    let e1 = match alpha {
        Some(a) => {
            if !modmath::is_primitive_root(a, p)? {
                return Err(Error::NotPrimitiveRoot(a, p.value()));
            }
            a % p.value()
        }
        None => modmath::find_primitive_root(p),
    };
    let e2 = modmath::mod_pow(e1, d, p.value())?;
    Ok((PublicKey { p, e1, e2 }, PrivateKey { p, e1, d }))
}

fn check_lambda(lambda: u64) -> Result<MultinacciOrder> {
    if lambda < 2 {
        return Err(Error::LambdaDegenerate(lambda));
    }
    if lambda > MAX_ORDER {
        return Err(Error::LambdaTooLarge(lambda, MAX_ORDER));
    }
    MultinacciOrder::new(lambda)
}

/// Sender side: k = e1^e, λ = e2^e mod p. The reduction can land λ
/// outside [2, 64]; that is reported as an error and the caller retries
/// with a different ephemeral exponent.
pub fn derive_session(pk: &PublicKey, e: u64) -> Result<SessionKey> {
    let p = pk.p.value();
    let phi = p - 1;
    if !(1 < e && e < phi) {
        return Err(Error::ExponentOutOfRange(e, phi));
    }
    let k = modmath::mod_pow(pk.e1, e, p)?;
    let lambda = modmath::mod_pow(pk.e2, e, p)?;
    Ok(SessionKey {
        k,
        lambda: check_lambda(lambda)?,
    })
}

/// Receiver side: λ = k^d mod p, under the same λ policy. An
/// out-of-policy λ signals a malformed or corrupted envelope.
pub fn recover_session(sk: &PrivateKey, k: u64) -> Result<MultinacciOrder> {
    let p = sk.p.value();
    if k == 0 || k >= p {
        return Err(Error::InvalidArgument(format!(
            "signature {k} outside [1, {})",
            p
        )));
    }
    let lambda = modmath::mod_pow(k, sk.d, p)?;
    check_lambda(lambda)
}

/// Materialize the key matrix Q_λ^k mod p, or its inverse Q_λ^{-k}.
pub fn session_to_keymatrix(s: &SessionKey, p: PrimeModulus, inverse: bool) -> Result<QMatrix> {
    let k = if inverse { -(s.k as i64) } else { s.k as i64 };
    qmatrix::q_power(s.lambda, k, p.value())
}

/// Public-key file payload: {"v":1,"p":37,"e1":5,"e2":13}.
#[derive(Debug, Serialize, Deserialize)]
pub struct PublicKeyFile {
    pub v: u32,
    pub p: u64,
    pub e1: u64,
    pub e2: u64,
}

/// Private-key file payload: {"v":1,"p":37,"e1":5,"d":13}.
#[derive(Debug, Serialize, Deserialize)]
pub struct PrivateKeyFile {
    pub v: u32,
    pub p: u64,
    pub e1: u64,
    pub d: u64,
}

impl PublicKey {
    pub fn to_file(&self) -> PublicKeyFile {
        PublicKeyFile {
            v: 1,
            p: self.p.value(),
            e1: self.e1,
            e2: self.e2,
        }
    }

    pub fn from_file(f: &PublicKeyFile) -> Result<Self> {
        let p = PrimeModulus::new(f.p)?;
        if !modmath::is_primitive_root(f.e1, p)? {
            return Err(Error::NotPrimitiveRoot(f.e1, f.p));
        }
        Ok(PublicKey {
            p,
            e1: f.e1,
            e2: f.e2 % f.p,
        })
    }
}

impl PrivateKey {
    pub fn to_file(&self) -> PrivateKeyFile {
        PrivateKeyFile {
            v: 1,
            p: self.p.value(),
            e1: self.e1,
            d: self.d,
        }
    }

    pub fn from_file(f: &PrivateKeyFile) -> Result<Self> {
        let p = PrimeModulus::new(f.p)?;
        if !(1 < f.d && f.d < p.value() - 1) {
            return Err(Error::ExponentOutOfRange(f.d, p.value() - 1));
        }
        Ok(PrivateKey {
            p,
            e1: f.e1,
            d: f.d,
        })
    }
}
