//! Baseline scheme that provides no encryption: the vote sits in the ballot
//! payload in the clear, next to a random serial that keeps repeated votes
//! byte-distinct on the board.

use rand::{Rng, RngCore};

use crate::election::{
    decode_count_vector, encode_count_vector, Ballot, BulletinBoard, CandidateSet, ElectionError,
    ElectionScheme, Evidence, KeyPair, Outcome, SecurityParameter, Vote,
};
use crate::encoding::{CodecError, FieldReader, FieldWriter};

pub const DUMMY_TAG: &str = "dummy";

/// Keys are empty: there is nothing to hide and nothing to sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DummyPublicKey;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DummySecretKey;

#[derive(Debug, Clone)]
pub struct DummyScheme {
    candidates: CandidateSet,
}

impl DummyScheme {
    pub fn new(candidates: CandidateSet) -> Self {
        Self { candidates }
    }

    /// Reads (vote index, serial) out of a ballot payload.
    pub fn decode_payload(payload: &[u8]) -> Result<(Vote, u64), CodecError> {
        let mut r = FieldReader::new(payload);
        let index = r.take_u64()?;
        let serial = r.take_u64()?;
        r.finish()?;
        Ok((Vote(index as usize), serial))
    }
}

impl ElectionScheme for DummyScheme {
    type PublicKey = DummyPublicKey;
    type SecretKey = DummySecretKey;

    fn scheme_tag(&self) -> &'static str {
        DUMMY_TAG
    }

    fn candidates(&self) -> &CandidateSet {
        &self.candidates
    }

    fn setup(
        &self,
        _k: SecurityParameter,
        _rng: &mut dyn RngCore,
    ) -> Result<KeyPair<DummyPublicKey, DummySecretKey>, ElectionError> {
        Ok(KeyPair {
            public: DummyPublicKey,
            secret: DummySecretKey,
        })
    }

    fn vote(
        &self,
        _pk: &DummyPublicKey,
        vote: Vote,
        _k: SecurityParameter,
        rng: &mut dyn RngCore,
    ) -> Option<Ballot> {
        if !self.candidates.contains(vote) {
            return None;
        }
        let serial: u64 = rng.gen();
        let mut w = FieldWriter::new();
        w.push_u64(vote.index() as u64).push_u64(serial);
        Some(Ballot::new(DUMMY_TAG, w.finish()))
    }

    fn partial_tally(
        &self,
        _sk: &DummySecretKey,
        board: &BulletinBoard,
        _k: SecurityParameter,
    ) -> Evidence {
        let m = self.candidates.len();
        let mut counts = vec![0u64; m];
        for ballot in board {
            if ballot.scheme_tag() != DUMMY_TAG {
                continue;
            }
            match Self::decode_payload(ballot.payload()) {
                Ok((vote, _)) if vote.index() < m => counts[vote.index()] += 1,
                _ => {}
            }
        }
        Evidence::new(DUMMY_TAG, encode_count_vector(&counts))
    }

    fn recover(
        &self,
        _board: &BulletinBoard,
        evidence: &Evidence,
        _pk: &DummyPublicKey,
    ) -> Result<Outcome, ElectionError> {
        if evidence.scheme_tag() != DUMMY_TAG {
            return Err(ElectionError::MalformedEvidence(format!(
                "expected tag `{DUMMY_TAG}`, found `{}`",
                evidence.scheme_tag()
            )));
        }
        let counts = decode_count_vector(evidence.payload())
            .map_err(|e| ElectionError::MalformedEvidence(e.to_string()))?;
        if counts.len() != self.candidates.len() {
            return Err(ElectionError::MalformedEvidence(format!(
                "expected {} counts, found {}",
                self.candidates.len(),
                counts.len()
            )));
        }
        Ok(Outcome::from_counts(&counts))
    }
}
