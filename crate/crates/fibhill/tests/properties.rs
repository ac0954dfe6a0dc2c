//! Property tests over randomized inputs.

use proptest::prelude::*;

use fibhill::cipher::{
    decrypt_blocks, decrypt_message, encrypt_blocks, encrypt_message, Alphabet, ShiftVector,
    DEFAULT_SYMBOLS,
};
use fibhill::keyexchange::{derive_session, make_keypair};
use fibhill::modmath::{mod_inv, mod_pow, PrimeModulus};
use fibhill::multinacci::MultinacciOrder;
use fibhill::qmatrix::q_power;

proptest! {
    #[test]
    fn mod_pow_agrees_with_iterated_multiplication(
        a in 0u64..1000,
        e in 0u64..200,
        m in 2u64..1000,
    ) {
        let mut acc = 1 % m;
        for _ in 0..e {
            acc = acc * (a % m) % m;
        }
        prop_assert_eq!(mod_pow(a % m, e, m).unwrap(), acc);
    }

    #[test]
    fn inverse_really_inverts(a in 1u64..5000, m in 2u64..5000) {
        if let Ok(x) = mod_inv(a, m) {
            prop_assert_eq!(a % m * x % m, 1 % m);
        }
    }

    #[test]
    fn block_roundtrip(
        lambda in 2u64..=6,
        k in 1i64..=50,
        seed in any::<u64>(),
    ) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let p = 37u64;
        let order = MultinacciOrder::new(lambda).unwrap();
        let key = q_power(order, k, p).unwrap();
        let key_inv = q_power(order, -k, p).unwrap();
        let n = lambda as usize;
        let blocks: Vec<Vec<u64>> = (0..4)
            .map(|_| (0..n).map(|_| rng.gen_range(0..p)).collect())
            .collect();
        let b = ShiftVector::new((0..n).map(|_| rng.gen_range(0..p)).collect(), p);
        let c = encrypt_blocks(&blocks, &key, &b).unwrap();
        prop_assert_eq!(decrypt_blocks(&c, &key_inv, &b).unwrap(), blocks);
    }

    #[test]
    fn message_roundtrip(
        msg in proptest::collection::vec(0usize..37, 0..128),
        e in 3u64..36,
        d in 2u64..36,
    ) {
        let symbols: Vec<char> = DEFAULT_SYMBOLS.chars().collect();
        let msg: String = msg.into_iter().map(|i| symbols[i]).collect();
        let a = Alphabet::default();
        let pm = PrimeModulus::new(37).unwrap();
        let (pk, sk) = make_keypair(pm, d, None).unwrap();
        let session = match derive_session(&pk, e) {
            Ok(s) => s,
            Err(_) => return Ok(()), // lambda policy rejected this e
        };
        let b = ShiftVector::new(vec![5; session.lambda.get()], 37);
        let env = encrypt_message(&pk, e, &b, &msg, &a).unwrap();
        prop_assert_eq!(decrypt_message(&sk, &env, &a).unwrap(), msg);
    }

    #[test]
    fn envelope_json_is_stable(
        len in 0usize..64,
        e in 3u64..36,
    ) {
        let a = Alphabet::default();
        let pm = PrimeModulus::new(37).unwrap();
        let (pk, _) = make_keypair(pm, 13, Some(5)).unwrap();
        let session = match derive_session(&pk, e) {
            Ok(s) => s,
            Err(_) => return Ok(()),
        };
        let b = ShiftVector::new(vec![1; session.lambda.get()], 37);
        let msg: String = "HELLO2019 ".chars().cycle().take(len).collect();
        let env = encrypt_message(&pk, e, &b, &msg, &a).unwrap();
        let json = serde_json::to_string(&env).unwrap();
        let parsed: fibhill::cipher::Envelope = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(serde_json::to_string(&parsed).unwrap(), json);
    }
}
