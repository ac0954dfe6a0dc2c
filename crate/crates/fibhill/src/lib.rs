//! Affine-Hill encryption keyed by powers of multinacci companion
//! matrices, with an ElGamal-style exchange that transmits only the pair
//! (λ, k) instead of a key matrix.
//!
//! The pieces, bottom up:
//!
//! - [`modmath`]: exact modular arithmetic, primality, primitive roots.
//! - [`multinacci`]: order-λ generalized Fibonacci terms at any signed
//!   index, exact or mod m.
//! - [`qmatrix`]: the companion matrix Q_λ, its signed powers assembled
//!   straight from sequence terms, and generic modular matrix algebra.
//! - [`keyexchange`]: (p, e1, e2) keypairs, session derivation
//!   (k, λ) = (e1^e, e2^e) mod p, and recovery λ = k^d mod p.
//! - [`cipher`]: the block transform C_i = P_i K + B mod p and the
//!   envelope file format.
//! - [`analysis`]: |GL_λ(F_p)| counting, the structured keyspace
//!   actually reachable as Q_λ^k, and a known-plaintext attack over it.
//!
//! A complete exchange, end to end:
//!
//! ```
//! use fibhill::cipher::{decrypt_message, encrypt_message, Alphabet, ShiftVector};
//! use fibhill::keyexchange::make_keypair;
//! use fibhill::modmath::PrimeModulus;
//!
//! let p = PrimeModulus::new(37)?;
//! let (public, private) = make_keypair(p, 13, Some(5))?;
//!
//! let alphabet = Alphabet::default();
//! let shift = ShiftVector::new(vec![31, 13, 19], 37);
//! let envelope = encrypt_message(&public, 22, &shift, "HELLO2019", &alphabet)?;
//! assert_eq!(envelope.cipher, "HP393IVY1");
//!
//! let recovered = decrypt_message(&private, &envelope, &alphabet)?;
//! assert_eq!(recovered, "HELLO2019");
//! # Ok::<(), fibhill::Error>(())
//! ```

pub mod analysis;
pub mod cipher;
pub mod error;
pub mod keyexchange;
pub mod modmath;
pub mod multinacci;
pub mod qmatrix;

pub use error::{Error, Result};
