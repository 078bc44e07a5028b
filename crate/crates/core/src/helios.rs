//! Helios-style homomorphic election scheme built from exponential ElGamal
//! and disjunctive proofs of correct ballot formation.
//!
//! Two variants share all code: the malleable one verifies ballots with the
//! lenient proof check, the hardened one with the strict check. Mauling a
//! ballot by adding q to one proof response produces a byte-distinct ballot
//! that still verifies leniently and encrypts the same vote.

use num_bigint::BigUint;
use rand::RngCore;

use crate::election::{
    decode_count_vector, encode_count_vector, Ballot, BulletinBoard, CandidateSet, ElectionError,
    ElectionScheme, Evidence, KeyPair, Outcome, SecurityParameter, Vote,
};
use crate::encoding::{CodecError, FieldReader, FieldWriter};
use crate::group::{
    add_ciphertexts, decrypt_exponent, elgamal_keygen, encrypt, gen_group, prove_bit,
    prove_encrypts_one_of, verify_encrypts_one_of, verify_encrypts_one_of_strict, Ciphertext,
    DisjunctiveProof, ElGamalKeyPair, ElGamalPublicKey, RandomCoin,
};

pub const HELIOS_TAG: &str = "helios";
pub const HELIOS_HARDENED_TAG: &str = "helios-hardened";

/// One ciphertext per candidate (a unit vector under decryption), a 0-or-1
/// proof per ciphertext and an overall proof that the homomorphic product
/// of the ciphertexts encrypts exactly 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeliosBallot {
    pub ciphertexts: Vec<Ciphertext>,
    pub individual_proofs: Vec<DisjunctiveProof>,
    pub overall_proof: DisjunctiveProof,
}

impl HeliosBallot {
    pub fn encode_payload(&self) -> Vec<u8> {
        let mut w = FieldWriter::new();
        w.push_u64(self.ciphertexts.len() as u64);
        for ct in &self.ciphertexts {
            w.push_uint(&ct.a);
            w.push_uint(&ct.b);
        }
        for proof in &self.individual_proofs {
            proof.write_fields(&mut w);
        }
        self.overall_proof.write_fields(&mut w);
        w.finish()
    }

    pub fn decode_payload(payload: &[u8]) -> Result<Self, CodecError> {
        let mut r = FieldReader::new(payload);
        let m = r.take_u64()? as usize;
        let mut ciphertexts = Vec::new();
        for _ in 0..m {
            ciphertexts.push(Ciphertext {
                a: r.take_uint()?,
                b: r.take_uint()?,
            });
        }
        let mut individual_proofs = Vec::new();
        for _ in 0..m {
            individual_proofs.push(DisjunctiveProof::read_fields(&mut r, 2)?);
        }
        let overall_proof = DisjunctiveProof::read_fields(&mut r, 1)?;
        r.finish()?;
        Ok(Self {
            ciphertexts,
            individual_proofs,
            overall_proof,
        })
    }

    pub fn into_ballot(self, tag: &str) -> Ballot {
        Ballot::new(tag, self.encode_payload())
    }

    pub fn from_ballot(ballot: &Ballot) -> Result<Self, CodecError> {
        Self::decode_payload(ballot.payload())
    }

    /// Homomorphic product of all candidate ciphertexts.
    pub fn combined_ciphertext(&self, p: &BigUint) -> Ciphertext {
        self.ciphertexts
            .iter()
            .fold(Ciphertext::identity(), |acc, ct| {
                add_ciphertexts(&acc, ct, p)
            })
    }
}

/// Decrypted per-candidate sums carried as tally evidence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeliosEvidence {
    pub aggregate: Vec<u64>,
}

/// Domain-separated hash context binding the proofs to the public key.
pub fn proof_context(pk: &ElGamalPublicKey) -> Vec<u8> {
    let mut w = FieldWriter::new();
    w.push_str("ballot-proof")
        .push_uint(pk.params.p())
        .push_uint(pk.params.q())
        .push_uint(pk.params.generator())
        .push_uint(&pk.h);
    w.finish()
}

/// Verifies a decoded ballot against an expected candidate count: all
/// individual proofs, plus the overall proof on the ciphertext product.
pub fn verify_helios_ballot(
    pk: &ElGamalPublicKey,
    ballot: &HeliosBallot,
    expected_candidates: usize,
    strict: bool,
) -> bool {
    if ballot.ciphertexts.len() != expected_candidates
        || ballot.individual_proofs.len() != expected_candidates
    {
        return false;
    }
    let context = proof_context(pk);
    let verify = if strict {
        verify_encrypts_one_of_strict
    } else {
        verify_encrypts_one_of
    };
    for (ct, proof) in ballot.ciphertexts.iter().zip(&ballot.individual_proofs) {
        if !verify(pk, ct, proof, &[0, 1], &context) {
            return false;
        }
    }
    let combined = ballot.combined_ciphertext(pk.params.p());
    verify(pk, &combined, &ballot.overall_proof, &[1], &context)
}

/// Replaces the response of one disjunct of the first individual proof by
/// response + q. The result still verifies leniently, is byte-distinct from
/// the input and decrypts to the same vote.
///
/// Fails when the input does not verify leniently or has no proofs.
pub fn maul_ballot(
    pk: &ElGamalPublicKey,
    ballot: &HeliosBallot,
    disjunct: usize,
) -> Result<HeliosBallot, ElectionError> {
    if !verify_helios_ballot(pk, ballot, ballot.ciphertexts.len(), false) {
        return Err(ElectionError::UnverifiableBallot);
    }
    let branch_count = ballot
        .individual_proofs
        .first()
        .map(|p| p.branches.len())
        .unwrap_or(0);
    if disjunct >= branch_count {
        return Err(ElectionError::UnverifiableBallot);
    }
    let mut mauled = ballot.clone();
    let response = &mut mauled.individual_proofs[0].branches[disjunct].response;
    *response = &*response + pk.params.q();
    Ok(mauled)
}

/// The assembled scheme. `strict` selects the hardened variant, which
/// applies the response range check at tally time.
#[derive(Debug, Clone)]
pub struct HeliosScheme {
    candidates: CandidateSet,
    strict: bool,
}

impl HeliosScheme {
    /// The deployed behavior: responses unreduced, verification lenient.
    pub fn malleable(candidates: CandidateSet) -> Self {
        Self {
            candidates,
            strict: false,
        }
    }

    /// Mitigation variant: responses must lie in [0, q).
    pub fn hardened(candidates: CandidateSet) -> Self {
        Self {
            candidates,
            strict: true,
        }
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    pub fn verify_ballot(&self, pk: &ElGamalPublicKey, ballot: &HeliosBallot) -> bool {
        verify_helios_ballot(pk, ballot, self.candidates.len(), self.strict)
    }
}

impl ElectionScheme for HeliosScheme {
    type PublicKey = ElGamalPublicKey;
    type SecretKey = ElGamalKeyPair;

    fn scheme_tag(&self) -> &'static str {
        if self.strict {
            HELIOS_HARDENED_TAG
        } else {
            HELIOS_TAG
        }
    }

    fn candidates(&self) -> &CandidateSet {
        &self.candidates
    }

    fn setup(
        &self,
        k: SecurityParameter,
        rng: &mut dyn RngCore,
    ) -> Result<KeyPair<ElGamalPublicKey, ElGamalKeyPair>, ElectionError> {
        let params = gen_group(k, rng);
        let keypair = elgamal_keygen(params, rng);
        Ok(KeyPair {
            public: keypair.public(),
            secret: keypair,
        })
    }

    fn vote(
        &self,
        pk: &ElGamalPublicKey,
        vote: Vote,
        _k: SecurityParameter,
        rng: &mut dyn RngCore,
    ) -> Option<Ballot> {
        if !self.candidates.contains(vote) {
            return None;
        }
        let m = self.candidates.len();
        let context = proof_context(pk);
        let p = pk.params.p();
        let q = pk.params.q();

        let mut ciphertexts = Vec::with_capacity(m);
        let mut individual_proofs = Vec::with_capacity(m);
        let mut coin_sum = BigUint::from(0u32);
        for j in 0..m {
            let bit = u64::from(j == vote.index());
            let coin = RandomCoin::random(&pk.params, rng);
            let ct = encrypt(pk, bit, &coin);
            let proof = prove_bit(pk, bit, &coin, &ct, &context, rng);
            coin_sum = (coin_sum + coin.value()) % q;
            ciphertexts.push(ct);
            individual_proofs.push(proof);
        }

        let ballot = HeliosBallot {
            ciphertexts,
            individual_proofs,
            overall_proof: DisjunctiveProof { branches: vec![] },
        };
        let combined = ballot.combined_ciphertext(p);
        let overall_proof = prove_encrypts_one_of(
            pk,
            1,
            &RandomCoin::from_value(coin_sum),
            &combined,
            &[1],
            &context,
            rng,
        );
        Some(
            HeliosBallot {
                overall_proof,
                ..ballot
            }
            .into_ballot(self.scheme_tag()),
        )
    }

    fn partial_tally(
        &self,
        sk: &ElGamalKeyPair,
        board: &BulletinBoard,
        _k: SecurityParameter,
    ) -> Evidence {
        let pk = sk.public();
        let m = self.candidates.len();
        let mut valid: Vec<HeliosBallot> = Vec::new();
        for ballot in board {
            if ballot.scheme_tag() != self.scheme_tag() {
                continue;
            }
            let Ok(decoded) = HeliosBallot::from_ballot(ballot) else {
                continue;
            };
            if self.verify_ballot(&pk, &decoded) {
                valid.push(decoded);
            }
        }

        let bound = valid.len() as u64;
        let mut aggregate = Vec::with_capacity(m);
        for j in 0..m {
            let product = valid.iter().fold(Ciphertext::identity(), |acc, b| {
                add_ciphertexts(&acc, &b.ciphertexts[j], sk.params.p())
            });
            let sum = decrypt_exponent(sk, &product, bound)
                .expect("verified ballots encrypt bits, so sums stay within the board size");
            aggregate.push(sum);
        }
        Evidence::new(self.scheme_tag(), encode_count_vector(&aggregate))
    }

    fn recover(
        &self,
        _board: &BulletinBoard,
        evidence: &Evidence,
        _pk: &ElGamalPublicKey,
    ) -> Result<Outcome, ElectionError> {
        if evidence.scheme_tag() != self.scheme_tag() {
            return Err(ElectionError::MalformedEvidence(format!(
                "expected tag `{}`, found `{}`",
                self.scheme_tag(),
                evidence.scheme_tag()
            )));
        }
        let aggregate = decode_count_vector(evidence.payload())
            .map_err(|e| ElectionError::MalformedEvidence(e.to_string()))?;
        if aggregate.len() != self.candidates.len() {
            return Err(ElectionError::MalformedEvidence(format!(
                "expected {} counts, found {}",
                self.candidates.len(),
                aggregate.len()
            )));
        }
        Ok(Outcome::from_counts(&aggregate))
    }
}
