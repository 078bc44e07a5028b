//! Safe-prime group arithmetic, exponential ElGamal with additive
//! homomorphism, and disjunctive proofs of correct ballot formation.
//!
//! Two verifiers are provided. The lenient one accepts proof responses as
//! arbitrary non-negative integers, which enter the checks only through
//! modular exponentiation, so a response `t` and `t + q` verify
//! identically. The strict one additionally requires every response to lie
//! in `[0, q)`.

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, Zero};
use rand::RngCore;
use sha2::{Digest, Sha256};

use crate::election::{ElectionError, SecurityParameter};
use crate::encoding::{CodecError, FieldReader, FieldWriter};

const PRIMALITY_ROUNDS: u32 = 40;

const SMALL_PRIMES: [u32; 54] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
    97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191,
    193, 197, 199, 211, 223, 227, 229, 233, 239, 241, 251,
];

/// Miller-Rabin with random witnesses, preceded by small-prime trial
/// division.
pub fn is_probable_prime(n: &BigUint, rounds: u32, rng: &mut dyn RngCore) -> bool {
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    for sp in SMALL_PRIMES {
        let sp = BigUint::from(sp);
        if *n == sp {
            return true;
        }
        if (n % &sp).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().expect("n > 1");
    let d = &n_minus_1 >> s;
    'witness: for _ in 0..rounds {
        let a = rng.gen_biguint_range(&two, &n_minus_1);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 0..s.saturating_sub(1) {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A safe-prime group: p = 2q + 1 with p, q prime and g generating the
/// order-q subgroup of the integers modulo p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupParams {
    p: BigUint,
    q: BigUint,
    g: BigUint,
}

impl GroupParams {
    /// Validates the full invariant, including primality of p and q, so
    /// tests can inject small fixed parameters such as p = 23.
    pub fn new(p: BigUint, q: BigUint, g: BigUint) -> Result<Self, ElectionError> {
        if p != &q * 2u32 + 1u32 {
            return Err(ElectionError::InvalidGroup("p != 2q + 1"));
        }
        let mut check_rng = deterministic_check_rng(&p);
        if !is_probable_prime(&p, PRIMALITY_ROUNDS, &mut check_rng) {
            return Err(ElectionError::InvalidGroup("p is not prime"));
        }
        if !is_probable_prime(&q, PRIMALITY_ROUNDS, &mut check_rng) {
            return Err(ElectionError::InvalidGroup("q is not prime"));
        }
        if g <= BigUint::one() || g >= p {
            return Err(ElectionError::InvalidGroup("generator out of range"));
        }
        if !g.modpow(&q, &p).is_one() {
            return Err(ElectionError::InvalidGroup("generator not of order q"));
        }
        Ok(Self { p, q, g })
    }

    pub fn p(&self) -> &BigUint {
        &self.p
    }

    pub fn q(&self) -> &BigUint {
        &self.q
    }

    pub fn generator(&self) -> &BigUint {
        &self.g
    }

    /// True when x is a non-zero element of the order-q subgroup.
    pub fn is_subgroup_element(&self, x: &BigUint) -> bool {
        !x.is_zero() && x < &self.p && x.modpow(&self.q, &self.p).is_one()
    }
}

fn deterministic_check_rng(p: &BigUint) -> rand_chacha::ChaCha20Rng {
    use rand::SeedableRng;
    let digest = Sha256::digest(p.to_bytes_be());
    rand_chacha::ChaCha20Rng::from_seed(digest.into())
}

/// Generates a k-bit safe prime p = 2q + 1 and a generator of the order-q
/// subgroup, found by squaring a random element until the result is not 1.
pub fn gen_group(k: SecurityParameter, rng: &mut dyn RngCore) -> GroupParams {
    let bits = u64::from(k.bits());
    let two = BigUint::from(2u32);
    loop {
        let mut q = rng.gen_biguint(bits - 1);
        q |= BigUint::one() << (bits - 2);
        q |= BigUint::one();
        if !is_probable_prime(&q, PRIMALITY_ROUNDS, rng) {
            continue;
        }
        let p = &q * 2u32 + 1u32;
        if !is_probable_prime(&p, PRIMALITY_ROUNDS, rng) {
            continue;
        }
        let g = loop {
            let candidate = rng.gen_biguint_range(&two, &(&p - 1u32));
            let squared = candidate.modpow(&two, &p);
            if !squared.is_one() {
                break squared;
            }
        };
        return GroupParams { p, q, g };
    }
}

/// ElGamal key material over a safe-prime group: h = g^x with x secret.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElGamalKeyPair {
    pub params: GroupParams,
    pub x: BigUint,
    pub h: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElGamalPublicKey {
    pub params: GroupParams,
    pub h: BigUint,
}

impl ElGamalKeyPair {
    pub fn public(&self) -> ElGamalPublicKey {
        ElGamalPublicKey {
            params: self.params.clone(),
            h: self.h.clone(),
        }
    }
}

pub fn elgamal_keygen(params: GroupParams, rng: &mut dyn RngCore) -> ElGamalKeyPair {
    let x = rng.gen_biguint_range(&BigUint::one(), params.q());
    let h = params.generator().modpow(&x, params.p());
    ElGamalKeyPair { params, x, h }
}

/// Encryption randomness, uniform over [1, q).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomCoin(BigUint);

impl RandomCoin {
    pub fn random(params: &GroupParams, rng: &mut dyn RngCore) -> Self {
        Self(rng.gen_biguint_range(&BigUint::one(), params.q()))
    }

    pub fn from_value(r: BigUint) -> Self {
        Self(r)
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }
}

/// Exponential ElGamal ciphertext: (g^r, h^r * g^v) mod p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ciphertext {
    pub a: BigUint,
    pub b: BigUint,
}

impl Ciphertext {
    /// Encryption of zero with zero randomness; identity for
    /// [`add_ciphertexts`].
    pub fn identity() -> Self {
        Self {
            a: BigUint::one(),
            b: BigUint::one(),
        }
    }
}

pub fn encrypt(pk: &ElGamalPublicKey, value: u64, coin: &RandomCoin) -> Ciphertext {
    let p = pk.params.p();
    let a = pk.params.generator().modpow(coin.value(), p);
    let b = (pk.h.modpow(coin.value(), p)
        * pk.params.generator().modpow(&BigUint::from(value), p))
        % p;
    Ciphertext { a, b }
}

/// Componentwise product; decrypts to the sum of the plaintext exponents.
pub fn add_ciphertexts(c1: &Ciphertext, c2: &Ciphertext, p: &BigUint) -> Ciphertext {
    Ciphertext {
        a: (&c1.a * &c2.a) % p,
        b: (&c1.b * &c2.b) % p,
    }
}

/// Recovers the plaintext exponent by exhaustive search over 0..=max.
/// Returns None when the ciphertext decrypts outside that range.
pub fn decrypt_exponent(sk: &ElGamalKeyPair, c: &Ciphertext, max: u64) -> Option<u64> {
    let p = sk.params.p();
    let shared = c.a.modpow(&sk.x, p);
    let shared_inv = shared.modpow(&(p - 2u32), p);
    let message = (&c.b * shared_inv) % p;
    let mut acc = BigUint::one();
    for v in 0..=max {
        if acc == message {
            return Some(v);
        }
        acc = (acc * sk.params.generator()) % p;
    }
    None
}

/// SHA-256 over the canonical field encoding of (context, fields...),
/// interpreted big-endian and reduced mod q.
pub fn fiat_shamir(q: &BigUint, context: &[u8], fields: &[&BigUint]) -> BigUint {
    let mut w = FieldWriter::new();
    w.push_bytes(context);
    for field in fields {
        w.push_uint(field);
    }
    let digest = Sha256::digest(w.finish());
    BigUint::from_bytes_be(&digest) % q
}

/// One disjunct of a proof: commitment pair, challenge and response.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofBranch {
    pub commitment_a: BigUint,
    pub commitment_b: BigUint,
    pub challenge: BigUint,
    pub response: BigUint,
}

/// Proof that a ciphertext encrypts one value out of a fixed list, with one
/// branch per candidate value. The branch challenges are bound by a
/// Fiat-Shamir hash over the context, the ciphertext and the commitments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisjunctiveProof {
    pub branches: Vec<ProofBranch>,
}

impl DisjunctiveProof {
    pub(crate) fn write_fields(&self, w: &mut FieldWriter) {
        for branch in &self.branches {
            w.push_uint(&branch.commitment_a);
            w.push_uint(&branch.commitment_b);
            w.push_uint(&branch.challenge);
            w.push_uint(&branch.response);
        }
    }

    pub(crate) fn read_fields(
        r: &mut FieldReader<'_>,
        branch_count: usize,
    ) -> Result<Self, CodecError> {
        let mut branches = Vec::new();
        for _ in 0..branch_count {
            branches.push(ProofBranch {
                commitment_a: r.take_uint()?,
                commitment_b: r.take_uint()?,
                challenge: r.take_uint()?,
                response: r.take_uint()?,
            });
        }
        Ok(Self { branches })
    }
}

fn neg_exponent(q: &BigUint, e: &BigUint) -> BigUint {
    let reduced = e % q;
    if reduced.is_zero() {
        BigUint::zero()
    } else {
        q - reduced
    }
}

/// b / g^value for a subgroup element b.
fn shift_ciphertext_b(pk: &ElGamalPublicKey, b: &BigUint, value: u64) -> BigUint {
    let p = pk.params.p();
    let q = pk.params.q();
    let g_inv_v = pk
        .params
        .generator()
        .modpow(&neg_exponent(q, &BigUint::from(value)), p);
    (b * g_inv_v) % p
}

/// Proves that `ct = encrypt(pk, value, coin)` with `value` one of
/// `values`: the matching branch is answered honestly, the others are
/// simulated with free challenges.
///
/// Panics when `value` is not listed in `values`; honest provers cannot
/// claim membership that does not hold.
pub fn prove_encrypts_one_of(
    pk: &ElGamalPublicKey,
    value: u64,
    coin: &RandomCoin,
    ct: &Ciphertext,
    values: &[u64],
    context: &[u8],
    rng: &mut dyn RngCore,
) -> DisjunctiveProof {
    let p = pk.params.p();
    let q = pk.params.q();
    let g = pk.params.generator();
    let real = values
        .iter()
        .position(|&v| v == value)
        .expect("plaintext must be one of the claimed disjuncts");

    let mut branches: Vec<ProofBranch> = Vec::with_capacity(values.len());
    let mut witness = BigUint::zero();
    for (d, &vd) in values.iter().enumerate() {
        if d == real {
            witness = rng.gen_biguint_below(q);
            branches.push(ProofBranch {
                commitment_a: g.modpow(&witness, p),
                commitment_b: pk.h.modpow(&witness, p),
                challenge: BigUint::zero(),
                response: BigUint::zero(),
            });
        } else {
            let challenge = rng.gen_biguint_below(q);
            let response = rng.gen_biguint_below(q);
            let neg_challenge = neg_exponent(q, &challenge);
            let commitment_a = (g.modpow(&response, p) * ct.a.modpow(&neg_challenge, p)) % p;
            let shifted = shift_ciphertext_b(pk, &ct.b, vd);
            let commitment_b =
                (pk.h.modpow(&response, p) * shifted.modpow(&neg_challenge, p)) % p;
            branches.push(ProofBranch {
                commitment_a,
                commitment_b,
                challenge,
                response,
            });
        }
    }

    let bound = bound_challenge(pk, ct, &branches, context);
    let simulated_sum: BigUint = branches
        .iter()
        .enumerate()
        .filter(|(d, _)| *d != real)
        .map(|(_, b)| &b.challenge)
        .sum();
    let real_challenge = (bound + q - (simulated_sum % q)) % q;
    let real_response = (&witness + coin.value() * &real_challenge) % q;
    branches[real].challenge = real_challenge;
    branches[real].response = real_response;
    DisjunctiveProof { branches }
}

/// Proves that a ciphertext encrypts 0 or 1.
pub fn prove_bit(
    pk: &ElGamalPublicKey,
    bit: u64,
    coin: &RandomCoin,
    ct: &Ciphertext,
    context: &[u8],
    rng: &mut dyn RngCore,
) -> DisjunctiveProof {
    prove_encrypts_one_of(pk, bit, coin, ct, &[0, 1], context, rng)
}

fn bound_challenge(
    pk: &ElGamalPublicKey,
    ct: &Ciphertext,
    branches: &[ProofBranch],
    context: &[u8],
) -> BigUint {
    let mut fields: Vec<&BigUint> = vec![&ct.a, &ct.b];
    for branch in branches {
        fields.push(&branch.commitment_a);
        fields.push(&branch.commitment_b);
    }
    fiat_shamir(pk.params.q(), context, &fields)
}

fn verify_inner(
    pk: &ElGamalPublicKey,
    ct: &Ciphertext,
    proof: &DisjunctiveProof,
    values: &[u64],
    context: &[u8],
    strict: bool,
) -> bool {
    if proof.branches.len() != values.len() {
        return false;
    }
    let p = pk.params.p();
    let q = pk.params.q();
    let g = pk.params.generator();

    let bound = bound_challenge(pk, ct, &proof.branches, context);
    let challenge_sum: BigUint = proof.branches.iter().map(|b| &b.challenge).sum();
    if challenge_sum % q != bound {
        return false;
    }

    for (branch, &vd) in proof.branches.iter().zip(values) {
        if strict && branch.response >= *q {
            return false;
        }
        let lhs_a = g.modpow(&branch.response, p);
        let rhs_a = (&branch.commitment_a * ct.a.modpow(&branch.challenge, p)) % p;
        if lhs_a != rhs_a {
            return false;
        }
        let shifted = shift_ciphertext_b(pk, &ct.b, vd);
        let lhs_b = pk.h.modpow(&branch.response, p);
        let rhs_b = (&branch.commitment_b * shifted.modpow(&branch.challenge, p)) % p;
        if lhs_b != rhs_b {
            return false;
        }
    }
    true
}

/// Lenient membership verification: responses may be any non-negative
/// integers.
pub fn verify_encrypts_one_of(
    pk: &ElGamalPublicKey,
    ct: &Ciphertext,
    proof: &DisjunctiveProof,
    values: &[u64],
    context: &[u8],
) -> bool {
    verify_inner(pk, ct, proof, values, context, false)
}

/// Membership verification with the response range check 0 <= t < q.
pub fn verify_encrypts_one_of_strict(
    pk: &ElGamalPublicKey,
    ct: &Ciphertext,
    proof: &DisjunctiveProof,
    values: &[u64],
    context: &[u8],
) -> bool {
    verify_inner(pk, ct, proof, values, context, true)
}

/// Lenient verification of a 0-or-1 proof.
pub fn verify_disjunctive(
    pk: &ElGamalPublicKey,
    ct: &Ciphertext,
    proof: &DisjunctiveProof,
    context: &[u8],
) -> bool {
    verify_encrypts_one_of(pk, ct, proof, &[0, 1], context)
}

/// Strict verification of a 0-or-1 proof.
pub fn verify_disjunctive_strict(
    pk: &ElGamalPublicKey,
    ct: &Ciphertext,
    proof: &DisjunctiveProof,
    context: &[u8],
) -> bool {
    verify_encrypts_one_of_strict(pk, ct, proof, &[0, 1], context)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn small_params() -> GroupParams {
        GroupParams::new(BigUint::from(23u32), BigUint::from(11u32), BigUint::from(4u32)).unwrap()
    }

    fn small_keypair(seed: u64) -> ElGamalKeyPair {
        elgamal_keygen(small_params(), &mut ChaCha20Rng::seed_from_u64(seed))
    }

    fn k(bits: u32) -> SecurityParameter {
        SecurityParameter::new(bits).unwrap()
    }

    #[test]
    fn p23_group_is_admissible() {
        let params = small_params();
        assert_eq!(
            BigUint::from(4u32).modpow(params.q(), params.p()),
            BigUint::one()
        );
    }

    #[test]
    fn group_params_reject_bad_inputs() {
        let bad = GroupParams::new(BigUint::from(24u32), BigUint::from(11u32), BigUint::from(4u32));
        assert_eq!(bad, Err(ElectionError::InvalidGroup("p != 2q + 1")));
        // p = 2q+1 with q = 10 composite
        let bad = GroupParams::new(BigUint::from(21u32), BigUint::from(10u32), BigUint::from(4u32));
        assert!(bad.is_err());
        // order-2 element p - 1
        let bad = GroupParams::new(BigUint::from(23u32), BigUint::from(11u32), BigUint::from(22u32));
        assert_eq!(
            bad,
            Err(ElectionError::InvalidGroup("generator not of order q"))
        );
        let bad = GroupParams::new(BigUint::from(23u32), BigUint::from(11u32), BigUint::one());
        assert!(bad.is_err());
    }

    #[test]
    fn generated_groups_satisfy_the_contract() {
        for seed in 0..5u64 {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let params = gen_group(k(32), &mut rng);
            assert_eq!(params.p().bits(), 32, "seed {seed}");
            assert_eq!(params.p(), &(params.q() * 2u32 + 1u32));
            let mut check = ChaCha20Rng::seed_from_u64(seed + 1000);
            assert!(is_probable_prime(params.p(), 40, &mut check));
            assert!(is_probable_prime(params.q(), 40, &mut check));
            assert!(params.is_subgroup_element(params.generator()));
            assert!(!params.generator().is_one());
        }
    }

    #[test]
    fn miller_rabin_agrees_with_trial_division_below_2000() {
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        let is_prime_naive = |n: u32| n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
        for n in 2u32..2000 {
            assert_eq!(
                is_probable_prime(&BigUint::from(n), 40, &mut rng),
                is_prime_naive(n),
                "disagreement at {n}"
            );
        }
    }

    #[test]
    fn encrypt_matches_direct_modular_arithmetic() {
        // p=23, q=11, g=4, x=3 => h = 4^3 mod 23 = 18
        let params = small_params();
        let kp = ElGamalKeyPair {
            params: params.clone(),
            x: BigUint::from(3u32),
            h: BigUint::from(18u32),
        };
        let ct = encrypt(&kp.public(), 1, &RandomCoin::from_value(BigUint::from(2u32)));
        // a = 4^2 mod 23 = 16; b = 18^2 * 4 mod 23 = 2 * 4 = 8
        assert_eq!(ct.a, BigUint::from(16u32));
        assert_eq!(ct.b, BigUint::from(8u32));
        assert_eq!(decrypt_exponent(&kp, &ct, 5), Some(1));
    }

    #[test]
    fn encryption_of_zero_is_a_plain_key_power() {
        let kp = small_keypair(11);
        let coin = RandomCoin::from_value(BigUint::from(5u32));
        let ct = encrypt(&kp.public(), 0, &coin);
        assert_eq!(ct.b, kp.h.modpow(coin.value(), kp.params.p()));
    }

    #[test]
    fn decryption_round_trips_small_exponents() {
        let mut rng = ChaCha20Rng::seed_from_u64(12);
        let kp = elgamal_keygen(gen_group(k(16), &mut rng), &mut rng);
        for v in 0..=5u64 {
            let coin = RandomCoin::random(&kp.params, &mut rng);
            let ct = encrypt(&kp.public(), v, &coin);
            assert_eq!(decrypt_exponent(&kp, &ct, 10), Some(v));
        }
    }

    #[test]
    fn decryption_outside_the_search_bound_is_not_found() {
        let mut rng = ChaCha20Rng::seed_from_u64(13);
        let kp = small_keypair(13);
        let coin = RandomCoin::random(&kp.params, &mut rng);
        let ct = encrypt(&kp.public(), 5, &coin);
        assert_eq!(decrypt_exponent(&kp, &ct, 4), None);
        assert_eq!(decrypt_exponent(&kp, &encrypt(&kp.public(), 0, &coin), 4), Some(0));
    }

    #[test]
    fn ciphertext_addition_adds_plaintexts() {
        let mut rng = ChaCha20Rng::seed_from_u64(14);
        let kp = small_keypair(14);
        let pk = kp.public();
        let p = kp.params.p();
        let one_a = encrypt(&pk, 1, &RandomCoin::random(&kp.params, &mut rng));
        let one_b = encrypt(&pk, 1, &RandomCoin::random(&kp.params, &mut rng));
        assert_eq!(decrypt_exponent(&kp, &add_ciphertexts(&one_a, &one_b, p), 5), Some(2));

        let zero = encrypt(&pk, 0, &RandomCoin::random(&kp.params, &mut rng));
        assert_eq!(decrypt_exponent(&kp, &add_ciphertexts(&one_a, &zero, p), 5), Some(1));
    }

    #[test]
    fn folding_random_bit_encryptions_matches_their_sum() {
        let mut rng = ChaCha20Rng::seed_from_u64(15);
        let kp = elgamal_keygen(gen_group(k(16), &mut rng), &mut rng);
        let pk = kp.public();
        let mut sum = 0u64;
        let mut acc = Ciphertext::identity();
        for _ in 0..7 {
            let bit = u64::from(rng.next_u32() & 1);
            sum += bit;
            let ct = encrypt(&pk, bit, &RandomCoin::random(&kp.params, &mut rng));
            acc = add_ciphertexts(&acc, &ct, kp.params.p());
        }
        assert_eq!(decrypt_exponent(&kp, &acc, 7), Some(sum));
    }

    #[test]
    fn ciphertext_components_live_in_the_subgroup() {
        let mut rng = ChaCha20Rng::seed_from_u64(16);
        let kp = elgamal_keygen(gen_group(k(16), &mut rng), &mut rng);
        for v in 0..3u64 {
            let ct = encrypt(&kp.public(), v, &RandomCoin::random(&kp.params, &mut rng));
            assert!(kp.params.is_subgroup_element(&ct.a));
            assert!(kp.params.is_subgroup_element(&ct.b));
        }
    }

    #[test]
    fn fiat_shamir_is_deterministic_and_in_range() {
        let q = BigUint::from(11u32);
        let f1 = BigUint::from(100u32);
        let f2 = BigUint::from(7u32);
        let h1 = fiat_shamir(&q, b"ctx", &[&f1, &f2]);
        let h2 = fiat_shamir(&q, b"ctx", &[&f1, &f2]);
        assert_eq!(h1, h2);
        assert!(h1 < q);
    }

    #[test]
    fn fiat_shamir_reacts_to_transcript_perturbations() {
        let q = BigUint::from(1_000_003u32);
        let mut rng = ChaCha20Rng::seed_from_u64(17);
        let mut changed = 0u32;
        for _ in 0..1000 {
            let field = rng.gen_biguint(64);
            let base = fiat_shamir(&q, b"ctx", &[&field]);
            let perturbed = fiat_shamir(&q, b"ctx", &[&(&field + 1u32)]);
            if base != perturbed {
                changed += 1;
            }
        }
        assert!(changed >= 998, "only {changed}/1000 perturbations changed the hash");
    }

    fn honest_bit_proof(
        kp: &ElGamalKeyPair,
        bit: u64,
        rng: &mut ChaCha20Rng,
    ) -> (Ciphertext, DisjunctiveProof) {
        let pk = kp.public();
        let coin = RandomCoin::random(&kp.params, rng);
        let ct = encrypt(&pk, bit, &coin);
        let proof = prove_bit(&pk, bit, &coin, &ct, b"test-ctx", rng);
        (ct, proof)
    }

    #[test]
    fn honest_bit_proofs_verify_in_both_modes() {
        let mut rng = ChaCha20Rng::seed_from_u64(18);
        let kp = elgamal_keygen(gen_group(k(16), &mut rng), &mut rng);
        let pk = kp.public();
        for bit in [0u64, 1] {
            for _ in 0..200 {
                let (ct, proof) = honest_bit_proof(&kp, bit, &mut rng);
                assert!(verify_disjunctive(&pk, &ct, &proof, b"test-ctx"));
                assert!(verify_disjunctive_strict(&pk, &ct, &proof, b"test-ctx"));
            }
        }
    }

    #[test]
    fn proofs_do_not_survive_a_context_change() {
        let mut rng = ChaCha20Rng::seed_from_u64(19);
        let kp = small_keypair(19);
        let (ct, proof) = honest_bit_proof(&kp, 1, &mut rng);
        assert!(!verify_disjunctive(&kp.public(), &ct, &proof, b"other-ctx"));
    }

    #[test]
    fn random_forgeries_for_an_out_of_range_plaintext_all_fail() {
        let mut rng = ChaCha20Rng::seed_from_u64(20);
        let kp = elgamal_keygen(gen_group(k(16), &mut rng), &mut rng);
        let pk = kp.public();
        let ct = encrypt(&pk, 2, &RandomCoin::random(&kp.params, &mut rng));
        for attempt in 0..1000 {
            let branch = |rng: &mut ChaCha20Rng| ProofBranch {
                commitment_a: rng.gen_biguint_below(kp.params.p()),
                commitment_b: rng.gen_biguint_below(kp.params.p()),
                challenge: rng.gen_biguint_below(kp.params.q()),
                response: rng.gen_biguint_below(kp.params.q()),
            };
            let forged = DisjunctiveProof {
                branches: vec![branch(&mut rng), branch(&mut rng)],
            };
            assert!(
                !verify_disjunctive(&pk, &ct, &forged, b"test-ctx"),
                "forgery {attempt} verified"
            );
        }
    }

    #[test]
    fn adding_q_to_a_response_preserves_lenient_verification_only() {
        let mut rng = ChaCha20Rng::seed_from_u64(21);
        let kp = elgamal_keygen(gen_group(k(16), &mut rng), &mut rng);
        let pk = kp.public();
        for bit in [0u64, 1] {
            for disjunct in 0..2usize {
                let (ct, proof) = honest_bit_proof(&kp, bit, &mut rng);
                let mut mauled = proof.clone();
                mauled.branches[disjunct].response =
                    &mauled.branches[disjunct].response + kp.params.q();
                assert!(verify_disjunctive(&pk, &ct, &mauled, b"test-ctx"));
                assert!(!verify_disjunctive_strict(&pk, &ct, &mauled, b"test-ctx"));
                assert_ne!(mauled, proof);
                let mut enc_orig = FieldWriter::new();
                proof.write_fields(&mut enc_orig);
                let mut enc_mauled = FieldWriter::new();
                mauled.write_fields(&mut enc_mauled);
                assert_ne!(enc_orig.finish(), enc_mauled.finish());
            }
        }
    }

    #[test]
    fn tampered_commitments_fail_verification() {
        let mut rng = ChaCha20Rng::seed_from_u64(22);
        let kp = elgamal_keygen(gen_group(k(16), &mut rng), &mut rng);
        let pk = kp.public();
        let (ct, proof) = honest_bit_proof(&kp, 0, &mut rng);
        let mut tampered = proof;
        tampered.branches[0].commitment_a =
            (&tampered.branches[0].commitment_a * kp.params.generator()) % kp.params.p();
        assert!(!verify_disjunctive(&pk, &ct, &tampered, b"test-ctx"));
    }

    #[test]
    fn strict_verification_implies_lenient_verification() {
        let mut rng = ChaCha20Rng::seed_from_u64(23);
        let kp = elgamal_keygen(gen_group(k(16), &mut rng), &mut rng);
        let pk = kp.public();
        for _ in 0..50 {
            let bit = u64::from(rng.next_u32() & 1);
            let (ct, proof) = honest_bit_proof(&kp, bit, &mut rng);
            let mut maybe_mauled = proof;
            if rng.next_u32() & 1 == 0 {
                maybe_mauled.branches[0].response =
                    &maybe_mauled.branches[0].response + kp.params.q();
            }
            let strict = verify_disjunctive_strict(&pk, &ct, &maybe_mauled, b"test-ctx");
            let lenient = verify_disjunctive(&pk, &ct, &maybe_mauled, b"test-ctx");
            assert!(!strict || lenient);
            if lenient && !strict {
                assert!(maybe_mauled
                    .branches
                    .iter()
                    .any(|b| b.response >= *kp.params.q()));
            }
        }
    }

    #[test]
    fn forced_boundary_response_passes_the_strict_check() {
        // Simulated branch built with response q - 1 instead of a random
        // draw; the real branch answers honestly.
        let mut rng = ChaCha20Rng::seed_from_u64(24);
        let kp = elgamal_keygen(gen_group(k(16), &mut rng), &mut rng);
        let pk = kp.public();
        let p = kp.params.p();
        let q = kp.params.q();
        let g = kp.params.generator();

        let coin = RandomCoin::random(&kp.params, &mut rng);
        let ct = encrypt(&pk, 1, &coin);

        let forced_response = q - 1u32;
        let sim_challenge = rng.gen_biguint_below(q);
        let neg = neg_exponent(q, &sim_challenge);
        let sim = ProofBranch {
            commitment_a: (g.modpow(&forced_response, p) * ct.a.modpow(&neg, p)) % p,
            commitment_b: (pk.h.modpow(&forced_response, p)
                * shift_ciphertext_b(&pk, &ct.b, 0).modpow(&neg, p))
                % p,
            challenge: sim_challenge.clone(),
            response: forced_response,
        };
        let witness = rng.gen_biguint_below(q);
        let mut real = ProofBranch {
            commitment_a: g.modpow(&witness, p),
            commitment_b: pk.h.modpow(&witness, p),
            challenge: BigUint::zero(),
            response: BigUint::zero(),
        };
        let branches_for_hash = vec![sim.clone(), real.clone()];
        let bound = bound_challenge(&pk, &ct, &branches_for_hash, b"test-ctx");
        real.challenge = (&bound + q - (&sim_challenge % q)) % q;
        real.response = (&witness + coin.value() * &real.challenge) % q;
        let proof = DisjunctiveProof {
            branches: vec![sim, real],
        };
        assert_eq!(proof.branches[0].response, q - 1u32);
        assert!(verify_disjunctive_strict(&pk, &ct, &proof, b"test-ctx"));
    }

    #[test]
    fn membership_proofs_cover_non_bit_value_sets() {
        let mut rng = ChaCha20Rng::seed_from_u64(25);
        let kp = elgamal_keygen(gen_group(k(16), &mut rng), &mut rng);
        let pk = kp.public();
        let coin = RandomCoin::random(&kp.params, &mut rng);
        let ct = encrypt(&pk, 1, &coin);
        let proof = prove_encrypts_one_of(&pk, 1, &coin, &ct, &[1], b"sum-ctx", &mut rng);
        assert!(verify_encrypts_one_of(&pk, &ct, &proof, &[1], b"sum-ctx"));
        assert!(verify_encrypts_one_of_strict(&pk, &ct, &proof, &[1], b"sum-ctx"));
        // same proof against the wrong claimed set
        assert!(!verify_encrypts_one_of(&pk, &ct, &proof, &[0], b"sum-ctx"));
        assert!(!verify_encrypts_one_of(&pk, &ct, &proof, &[0, 1], b"sum-ctx"));
    }

    #[test]
    fn keygen_accepts_large_parameters() {
        // Contract check only: 2048-bit generation is exercised out of band.
        assert!(SecurityParameter::new(2048).is_ok());
    }
}
