//! The Affine-Hill block transform: encode text over a p-symbol alphabet,
//! split into λ-length blocks, apply C_i = P_i K + B mod p, and ship the
//! result in a self-describing envelope. Decryption runs (C_i - B) K^{-1}
//! with the inverse key matrix Q_λ^{-k}.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::keyexchange::{self, PrivateKey, PublicKey};
use crate::qmatrix::QMatrix;

/// Bijection between text symbols and residues 0 .. size-1. The last
/// index doubles as the padding symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<char>,
}

/// The default 37-symbol alphabet: A-Z at 0-25, digits at 26-35 and
/// space at 36 (also the pad).
pub const DEFAULT_SYMBOLS: &str = "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789 ";

impl Alphabet {
    pub fn new(symbols: &str) -> Result<Self> {
        let symbols: Vec<char> = symbols.chars().collect();
        for (i, &c) in symbols.iter().enumerate() {
            if symbols[..i].contains(&c) {
                return Err(Error::DuplicateSymbol(c));
            }
        }
        Ok(Alphabet { symbols })
    }

    pub fn size(&self) -> usize {
        self.symbols.len()
    }

    /// Index of the padding symbol (always the last).
    pub fn pad_value(&self) -> u64 {
        (self.symbols.len() - 1) as u64
    }

    pub fn symbols(&self) -> String {
        self.symbols.iter().collect()
    }

    /// The alphabet must fit inside the modulus it is used with.
    pub fn check_fits(&self, p: u64) -> Result<()> {
        if self.size() as u64 > p {
            return Err(Error::AlphabetTooLarge(self.size(), p));
        }
        Ok(())
    }
}

impl Default for Alphabet {
    fn default() -> Self {
        Alphabet::new(DEFAULT_SYMBOLS).expect("default alphabet is duplicate-free")
    }
}

/// Alphabet file payload: {"v":1,"symbols":"ABC..."}.
#[derive(Debug, Serialize, Deserialize)]
pub struct AlphabetFile {
    pub v: u32,
    pub symbols: String,
}

/// Text to residues. Input is upper-cased first; anything still outside
/// the alphabet is a hard error, not skipped, so length accounting in
/// the envelope stays exact.
pub fn encode(text: &str, a: &Alphabet) -> Result<Vec<u64>> {
    text.chars()
        .flat_map(char::to_uppercase)
        .enumerate()
        .map(|(pos, c)| {
            a.symbols
                .iter()
                .position(|&s| s == c)
                .map(|i| i as u64)
                .ok_or(Error::UnmappedCharacter(c, pos))
        })
        .collect()
}

/// Residues back to text; inverse of [`encode`].
pub fn decode(vals: &[u64], a: &Alphabet) -> Result<String> {
    vals.iter()
        .map(|&v| {
            a.symbols
                .get(v as usize)
                .copied()
                .ok_or(Error::ValueOutOfRange(v, a.size()))
        })
        .collect()
}

/// Ciphertext residues to envelope text. Residues are mod p, which can
/// exceed the alphabet when p is larger than the symbol set; those are
/// rendered as `{n}` tokens so the envelope stays plain text. When the
/// alphabet covers the full residue range (the p = 37 default) the output
/// is pure alphabet text.
pub fn cipher_to_text(vals: &[u64], a: &Alphabet) -> String {
    vals.iter()
        .map(|&v| match a.symbols.get(v as usize) {
            Some(&c) => c.to_string(),
            None => format!("{{{v}}}"),
        })
        .collect()
}

/// Inverse of [`cipher_to_text`]. Symbols are matched exactly (no case
/// folding); `{n}` tokens carry residues beyond the alphabet.
pub fn text_to_cipher(text: &str, a: &Alphabet) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    let mut chars = text.chars().enumerate();
    while let Some((pos, c)) = chars.next() {
        if c == '{' && !a.symbols.contains(&'{') {
            let mut digits = String::new();
            loop {
                match chars.next() {
                    Some((_, '}')) => break,
                    Some((_, d)) if d.is_ascii_digit() => digits.push(d),
                    _ => {
                        return Err(Error::MalformedEnvelope(format!(
                            "unterminated residue token at position {pos}"
                        )))
                    }
                }
            }
            out.push(digits.parse::<u64>().map_err(|_| {
                Error::MalformedEnvelope(format!("bad residue token at position {pos}"))
            })?);
        } else {
            let idx = a
                .symbols
                .iter()
                .position(|&s| s == c)
                .ok_or(Error::UnmappedCharacter(c, pos))?;
            out.push(idx as u64);
        }
    }
    Ok(out)
}

/// The additive vector B of the affine step, canonical mod p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftVector {
    entries: Vec<u64>,
}

impl ShiftVector {
    pub fn new(entries: Vec<u64>, p: u64) -> Self {
        ShiftVector {
            entries: entries.into_iter().map(|e| e % p).collect(),
        }
    }

    pub fn zero(len: usize) -> Self {
        ShiftVector {
            entries: vec![0; len],
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }
}

/// A 1xλ row vector of residues: one plaintext or ciphertext block.
pub type Block = Vec<u64>;

/// Split residues into λ-length blocks, padding the final partial block
/// with `pad`. Returns the blocks and the true (pre-padding) length.
pub fn make_blocks(vals: &[u64], lambda: usize, pad: u64) -> (Vec<Block>, usize) {
    let true_len = vals.len();
    let blocks = vals
        .chunks(lambda)
        .map(|c| {
            let mut b = c.to_vec();
            b.resize(lambda, pad);
            b
        })
        .collect();
    (blocks, true_len)
}

fn transform_block(block: &[u64], key: &QMatrix, shift: &[u64], subtract_first: bool) -> Block {
    let n = key.order.get();
    let p = key.modulus();
    let input: Vec<u64> = if subtract_first {
        block
            .iter()
            .zip(shift)
            .map(|(&c, &b)| (c + p - b % p) % p)
            .collect()
    } else {
        block.to_vec()
    };
    let mut out = vec![0u64; n];
    for (j, cell) in out.iter_mut().enumerate() {
        let mut sum = 0u64;
        for (t, &v) in input.iter().enumerate() {
            sum = (sum + v * key.get(t, j)) % p;
        }
        if !subtract_first {
            sum = (sum + shift[j]) % p;
        }
        *cell = sum;
    }
    out
}

fn check_dims(blocks: &[Block], key: &QMatrix, b: &ShiftVector) -> Result<()> {
    let n = key.order.get();
    if b.len() != n {
        return Err(Error::ShiftLengthMismatch(b.len(), n));
    }
    for blk in blocks {
        if blk.len() != n {
            return Err(Error::DimensionMismatch(1, blk.len(), n, n));
        }
    }
    Ok(())
}

/// C_i = P_i K + B mod p for each block.
pub fn encrypt_blocks(blocks: &[Block], key: &QMatrix, b: &ShiftVector) -> Result<Vec<Block>> {
    check_dims(blocks, key, b)?;
    Ok(blocks
        .iter()
        .map(|blk| transform_block(blk, key, b.entries(), false))
        .collect())
}

/// P_i = (C_i - B) K^{-1} mod p, with `key_inv` = Q_λ^{-k}.
pub fn decrypt_blocks(cblocks: &[Block], key_inv: &QMatrix, b: &ShiftVector) -> Result<Vec<Block>> {
    check_dims(cblocks, key_inv, b)?;
    Ok(cblocks
        .iter()
        .map(|blk| transform_block(blk, key_inv, b.entries(), true))
        .collect())
}

/// The transmitted object: (p, k, B, true length, ciphertext). The order
/// λ is deliberately absent; it is recoverable only via k and the
/// private key.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Envelope {
    pub v: u32,
    pub p: u64,
    pub k: u64,
    pub b: Vec<u64>,
    pub len: usize,
    pub cipher: String,
}

/// Full sender pipeline: derive the session pair from (pk, e), build
/// K = Q_λ^k, encode, block, transform, and pack the envelope.
pub fn encrypt_message(
    pk: &PublicKey,
    e: u64,
    b: &ShiftVector,
    text: &str,
    a: &Alphabet,
) -> Result<Envelope> {
    let p = pk.p.value();
    a.check_fits(p)?;
    let session = keyexchange::derive_session(pk, e)?;
    let lambda = session.lambda.get();
    if b.len() != lambda {
        return Err(Error::ShiftLengthMismatch(b.len(), lambda));
    }
    let key = keyexchange::session_to_keymatrix(&session, pk.p, false)?;
    let vals = encode(text, a)?;
    let (blocks, true_len) = make_blocks(&vals, lambda, a.pad_value());
    let cblocks = encrypt_blocks(&blocks, &key, b)?;
    let cipher = cipher_to_text(&cblocks.concat(), a);
    Ok(Envelope {
        v: 1,
        p,
        k: session.k,
        b: b.entries().to_vec(),
        len: true_len,
        cipher,
    })
}

/// Full receiver pipeline: recover λ from (k, d), build Q_λ^{-k},
/// invert the transform and truncate to the true length.
pub fn decrypt_message(sk: &PrivateKey, env: &Envelope, a: &Alphabet) -> Result<String> {
    let p = sk.p.value();
    if env.p != p {
        return Err(Error::MalformedEnvelope(format!(
            "envelope modulus {} does not match key modulus {}",
            env.p, p
        )));
    }
    a.check_fits(p)?;
    let lambda = keyexchange::recover_session(sk, env.k)?;
    let session = keyexchange::SessionKey {
        k: env.k,
        lambda,
    };
    let cvals = text_to_cipher(&env.cipher, a)?;
    if let Some(&v) = cvals.iter().find(|&&v| v >= p) {
        return Err(Error::MalformedEnvelope(format!(
            "cipher residue {v} not below modulus {p}"
        )));
    }
    if cvals.len() % lambda.get() != 0 {
        return Err(Error::MalformedEnvelope(format!(
            "cipher length {} is not a multiple of recovered order {}",
            cvals.len(),
            lambda
        )));
    }
    if env.len > cvals.len() {
        return Err(Error::MalformedEnvelope(format!(
            "claimed length {} exceeds cipher length {}",
            env.len,
            cvals.len()
        )));
    }
    let b = ShiftVector::new(env.b.clone(), p);
    let key_inv = keyexchange::session_to_keymatrix(&session, sk.p, true)?;
    let cblocks: Vec<Block> = cvals.chunks(lambda.get()).map(<[u64]>::to_vec).collect();
    let pblocks = decrypt_blocks(&cblocks, &key_inv, &b)?;
    let mut vals = pblocks.concat();
    vals.truncate(env.len);
    decode(&vals, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::keyexchange::make_keypair;
    use crate::modmath::PrimeModulus;
    use crate::multinacci::MultinacciOrder;
    use crate::qmatrix::q_power;

    fn example_keys() -> (PublicKey, PrivateKey) {
        make_keypair(PrimeModulus::new(37).unwrap(), 13, Some(5)).unwrap()
    }

    fn example_shift() -> ShiftVector {
        ShiftVector::new(vec![31, 13, 19], 37)
    }

    #[test]
    fn default_alphabet_layout() {
        let a = Alphabet::default();
        assert_eq!(a.size(), 37);
        assert_eq!(encode("H", &a).unwrap(), vec![7]);
        assert_eq!(encode("2", &a).unwrap(), vec![28]);
        assert_eq!(encode("A", &a).unwrap(), vec![0]);
        assert_eq!(a.pad_value(), 36);
    }

    #[test]
    fn encode_decode_examples() {
        let a = Alphabet::default();
        assert_eq!(encode("HEL", &a).unwrap(), vec![7, 4, 11]);
        assert_eq!(decode(&[7, 15, 29], &a).unwrap(), "HP3");
        assert_eq!(decode(&[35], &a).unwrap(), "9");
        assert_eq!(decode(&[0], &a).unwrap(), "A");
        assert_eq!(
            encode("HE!", &a),
            Err(Error::UnmappedCharacter('!', 2))
        );
        assert_eq!(decode(&[37], &a), Err(Error::ValueOutOfRange(37, 37)));
    }

    #[test]
    fn case_folding() {
        let a = Alphabet::default();
        assert_eq!(encode("hello", &a).unwrap(), encode("HELLO", &a).unwrap());
    }

    #[test]
    fn alphabet_validation() {
        assert_eq!(Alphabet::new("ABA"), Err(Error::DuplicateSymbol('A')));
        let a = Alphabet::default();
        assert_eq!(a.check_fits(36), Err(Error::AlphabetTooLarge(37, 36)));
        assert!(a.check_fits(37).is_ok());
    }

    #[test]
    fn block_segmentation() {
        let (blocks, len) = make_blocks(&[7, 4, 11, 11, 14, 28, 26, 27, 35], 3, 36);
        assert_eq!(blocks.len(), 3);
        assert_eq!(len, 9);
        assert_eq!(blocks[0], vec![7, 4, 11]);

        let (blocks, len) = make_blocks(&[1, 2, 3, 4], 3, 36);
        assert_eq!(blocks, vec![vec![1, 2, 3], vec![4, 36, 36]]);
        assert_eq!(len, 4);

        let (blocks, len) = make_blocks(&[], 3, 36);
        assert!(blocks.is_empty());
        assert_eq!(len, 0);
    }

    #[test]
    fn worked_example_block_transforms() {
        let key = q_power(MultinacciOrder::new(3).unwrap(), 4, 37).unwrap();
        let b = example_shift();
        let c = encrypt_blocks(
            &[vec![7, 4, 11], vec![11, 14, 28], vec![26, 27, 35]],
            &key,
            &b,
        )
        .unwrap();
        assert_eq!(c, vec![vec![7, 15, 29], vec![35, 29, 8], vec![21, 24, 27]]);

        let key_inv = q_power(MultinacciOrder::new(3).unwrap(), -4, 37).unwrap();
        let p = decrypt_blocks(&c, &key_inv, &b).unwrap();
        assert_eq!(p, vec![vec![7, 4, 11], vec![11, 14, 28], vec![26, 27, 35]]);
    }

    #[test]
    fn zero_shift_is_plain_hill() {
        let key = q_power(MultinacciOrder::new(3).unwrap(), 4, 37).unwrap();
        let zero = ShiftVector::zero(3);
        assert_eq!(
            encrypt_blocks(&[vec![0, 0, 0]], &key, &zero).unwrap(),
            vec![vec![0, 0, 0]]
        );
        // With B = 0 the affine transform degenerates to C = P K.
        let p_block = vec![7u64, 4, 11];
        let c = encrypt_blocks(std::slice::from_ref(&p_block), &key, &zero).unwrap();
        let mut expected = vec![0u64; 3];
        for j in 0..3 {
            for t in 0..3 {
                expected[j] = (expected[j] + p_block[t] * key.get(t, j)) % 37;
            }
        }
        assert_eq!(c[0], expected);
    }

    #[test]
    fn scalar_oracle_equivalence() {
        // Independent double-loop implementation checked on random inputs.
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for lambda in 2..=5usize {
            let order = MultinacciOrder::new(lambda as u64).unwrap();
            for _ in 0..20 {
                let p = 37u64;
                let k = rng.gen_range(1..=30i64);
                let key = q_power(order, k, p).unwrap();
                let block: Vec<u64> = (0..lambda).map(|_| rng.gen_range(0..p)).collect();
                let shift: Vec<u64> = (0..lambda).map(|_| rng.gen_range(0..p)).collect();
                let b = ShiftVector::new(shift.clone(), p);
                let got = encrypt_blocks(std::slice::from_ref(&block), &key, &b).unwrap();
                let mut want = vec![0u64; lambda];
                for j in 0..lambda {
                    let mut s = 0u64;
                    for t in 0..lambda {
                        s = (s + block[t] * key.get(t, j)) % p;
                    }
                    want[j] = (s + shift[j]) % p;
                }
                assert_eq!(got[0], want);
            }
        }
    }

    #[test]
    fn dimension_errors() {
        let key = q_power(MultinacciOrder::new(3).unwrap(), 4, 37).unwrap();
        let b = example_shift();
        assert!(matches!(
            encrypt_blocks(&[vec![1, 2]], &key, &b),
            Err(Error::DimensionMismatch(..))
        ));
        let short_b = ShiftVector::new(vec![1, 2], 37);
        assert_eq!(
            encrypt_blocks(&[vec![1, 2, 3]], &key, &short_b),
            Err(Error::ShiftLengthMismatch(2, 3))
        );
    }

    #[test]
    fn worked_example_end_to_end() {
        let (pk, sk) = example_keys();
        let a = Alphabet::default();
        let env = encrypt_message(&pk, 22, &example_shift(), "HELLO2019", &a).unwrap();
        assert_eq!(env.cipher, "HP393IVY1");
        assert_eq!(env.k, 4);
        assert_eq!(env.len, 9);
        assert_eq!(decrypt_message(&sk, &env, &a).unwrap(), "HELLO2019");
    }

    #[test]
    fn empty_and_padded_messages() {
        let (pk, sk) = example_keys();
        let a = Alphabet::default();
        let env = encrypt_message(&pk, 22, &example_shift(), "", &a).unwrap();
        assert_eq!(env.len, 0);
        assert_eq!(env.cipher, "");
        assert_eq!(decrypt_message(&sk, &env, &a).unwrap(), "");

        let env = encrypt_message(&pk, 22, &example_shift(), "A", &a).unwrap();
        assert_eq!(env.cipher.chars().count(), 3); // one block, two pads
        assert_eq!(decrypt_message(&sk, &env, &a).unwrap(), "A");
    }

    #[test]
    fn tampered_signature() {
        let (pk, sk) = example_keys();
        let a = Alphabet::default();
        let mut env = encrypt_message(&pk, 22, &example_shift(), "HELLO2019", &a).unwrap();
        env.k = 2;
        // lambda recomputes to 2^13 mod 37 = 15; 9 symbols is not a
        // multiple of 15, so the envelope is rejected.
        match decrypt_message(&sk, &env, &a) {
            Err(Error::MalformedEnvelope(_)) => {}
            Err(Error::LambdaDegenerate(_) | Error::LambdaTooLarge(..)) => {}
            other => panic!("tampered envelope accepted: {other:?}"),
        }
    }

    #[test]
    fn shift_mismatch_reports_derived_order() {
        let (pk, _) = example_keys();
        let a = Alphabet::default();
        let bad_b = ShiftVector::new(vec![1, 2], 37);
        assert_eq!(
            encrypt_message(&pk, 22, &bad_b, "HI", &a),
            Err(Error::ShiftLengthMismatch(2, 3))
        );
    }

    #[test]
    fn envelope_format_stability() {
        let (pk, _) = example_keys();
        let a = Alphabet::default();
        let env = encrypt_message(&pk, 22, &example_shift(), "HELLO2019", &a).unwrap();
        let json = serde_json::to_string(&env).unwrap();
        assert_eq!(
            json,
            r#"{"v":1,"p":37,"k":4,"b":[31,13,19],"len":9,"cipher":"HP393IVY1"}"#
        );
        let parsed: Envelope = serde_json::from_str(&json).unwrap();
        assert_eq!(serde_json::to_string(&parsed).unwrap(), json);
    }

    #[test]
    fn cipher_text_tokens_above_alphabet() {
        let a = Alphabet::default();
        let vals = vec![7u64, 96, 0, 255];
        let text = cipher_to_text(&vals, &a);
        assert_eq!(text, "H{96}A{255}");
        assert_eq!(text_to_cipher(&text, &a).unwrap(), vals);
        assert!(matches!(
            text_to_cipher("H{96", &a),
            Err(Error::MalformedEnvelope(_))
        ));
    }

    #[test]
    fn roundtrip_grid() {
        use rand::{Rng, SeedableRng};
        let a = Alphabet::default();
        let mut rng = rand::rngs::StdRng::seed_from_u64(23);
        for p in [37u64, 101, 257] {
            let pm = PrimeModulus::new(p).unwrap();
            let (pk, sk) = make_keypair(pm, 13, None).unwrap();
            let mut done = 0;
            let mut e = 2;
            while done < 5 {
                e += 1;
                let session = match crate::keyexchange::derive_session(&pk, e) {
                    Ok(s) => s,
                    Err(_) => continue,
                };
                let lambda = session.lambda.get();
                let shift: Vec<u64> = (0..lambda).map(|_| rng.gen_range(0..p)).collect();
                let b = ShiftVector::new(shift, p);
                let len = rng.gen_range(0..100);
                let msg: String = (0..len)
                    .map(|_| {
                        DEFAULT_SYMBOLS
                            .chars()
                            .nth(rng.gen_range(0..37))
                            .unwrap()
                    })
                    .collect();
                let env = encrypt_message(&pk, e, &b, &msg, &a).unwrap();
                assert_eq!(decrypt_message(&sk, &env, &a).unwrap(), msg);
                done += 1;
            }
        }
    }
}
