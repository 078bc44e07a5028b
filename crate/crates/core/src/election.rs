//! Core election-scheme abstraction and the domain types shared by every
//! scheme: ballots with a canonical byte encoding, bulletin boards with set
//! semantics, tally evidence and recovered outcomes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::RngCore;
use thiserror::Error;

use crate::encoding::{CodecError, FieldReader, FieldWriter};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ElectionError {
    #[error("security parameter {k} outside supported range [{min}, {max}]")]
    UnsupportedParameter { k: u32, min: u32, max: u32 },
    #[error("candidate set needs at least 2 entries, got {0}")]
    TooFewCandidates(usize),
    #[error("duplicate candidate identifier `{0}`")]
    DuplicateCandidate(String),
    #[error("malformed evidence: {0}")]
    MalformedEvidence(String),
    #[error("invalid group parameters: {0}")]
    InvalidGroup(&'static str),
    #[error("ballot does not satisfy the lenient verification check")]
    UnverifiableBallot,
}

/// Bit length of the prime modulus used by cryptographic schemes.
///
/// The floor of 16 keeps group generation well-defined; the dummy scheme
/// ignores the value entirely.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SecurityParameter(u32);

impl SecurityParameter {
    pub const MIN: u32 = 16;
    pub const MAX: u32 = 2048;

    pub fn new(k: u32) -> Result<Self, ElectionError> {
        if (Self::MIN..=Self::MAX).contains(&k) {
            Ok(Self(k))
        } else {
            Err(ElectionError::UnsupportedParameter {
                k,
                min: Self::MIN,
                max: Self::MAX,
            })
        }
    }

    pub fn bits(self) -> u32 {
        self.0
    }
}

impl fmt::Display for SecurityParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Ordered list of distinct candidate identifiers. Index order is stable:
/// candidate i is the i-th entry of the list handed to [`CandidateSet::new`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateSet {
    names: Vec<String>,
}

impl CandidateSet {
    pub fn new<I, S>(names: I) -> Result<Self, ElectionError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() < 2 {
            return Err(ElectionError::TooFewCandidates(names.len()));
        }
        let mut seen = BTreeSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(ElectionError::DuplicateCandidate(name.clone()));
            }
        }
        Ok(Self { names })
    }

    /// `m` candidates named `candidate-0` .. `candidate-(m-1)`.
    pub fn numbered(m: usize) -> Result<Self, ElectionError> {
        Self::new((0..m).map(|i| format!("candidate-{i}")))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, index: usize) -> Option<&str> {
        self.names.get(index).map(String::as_str)
    }

    pub fn contains(&self, vote: Vote) -> bool {
        vote.0 < self.names.len()
    }
}

/// A vote is the index of a candidate in the [`CandidateSet`] in force.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Vote(pub usize);

impl Vote {
    pub fn index(self) -> usize {
        self.0
    }
}

/// A cast ballot. Equality (and board membership) is byte equality of the
/// pair (scheme tag, canonical payload).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ballot {
    scheme_tag: String,
    payload: Vec<u8>,
}

impl Ballot {
    pub fn new(scheme_tag: impl Into<String>, payload: Vec<u8>) -> Self {
        Self {
            scheme_tag: scheme_tag.into(),
            payload,
        }
    }

    pub fn scheme_tag(&self) -> &str {
        &self.scheme_tag
    }

    pub fn payload(&self) -> &[u8] {
        &self.payload
    }

    /// Canonical encoding: tag field first, payload field second.
    pub fn encode(&self) -> Vec<u8> {
        let mut w = FieldWriter::new();
        w.push_str(&self.scheme_tag).push_bytes(&self.payload);
        w.finish()
    }

    pub fn decode(bytes: &[u8]) -> Result<Self, CodecError> {
        let mut r = FieldReader::new(bytes);
        let tag = r.take_str()?.to_owned();
        let payload = r.take_bytes()?.to_vec();
        r.finish()?;
        Ok(Self {
            scheme_tag: tag,
            payload,
        })
    }
}

/// The set of cast ballots submitted for tallying. Inserting a byte-equal
/// ballot twice leaves the board unchanged.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BulletinBoard {
    ballots: BTreeSet<Ballot>,
}

impl BulletinBoard {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns true when the ballot was not already present.
    pub fn insert(&mut self, ballot: Ballot) -> bool {
        self.ballots.insert(ballot)
    }

    pub fn contains(&self, ballot: &Ballot) -> bool {
        self.ballots.contains(ballot)
    }

    pub fn len(&self) -> usize {
        self.ballots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ballots.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Ballot> {
        self.ballots.iter()
    }
}

impl FromIterator<Ballot> for BulletinBoard {
    fn from_iter<I: IntoIterator<Item = Ballot>>(iter: I) -> Self {
        Self {
            ballots: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a BulletinBoard {
    type Item = &'a Ballot;
    type IntoIter = std::collections::btree_set::Iter<'a, Ballot>;

    fn into_iter(self) -> Self::IntoIter {
        self.ballots.iter()
    }
}

/// Output of `partial_tally`: scheme-specific bytes from which `recover`
/// reconstructs the outcome. Opaque to the games.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evidence {
    scheme_tag: String,
    payload: Vec<u8>,
}

impl Evidence {
    pub fn new(scheme_tag: impl Into<String>, payload: Vec<u8>) -> Self {
        Self {
            scheme_tag: scheme_tag.into(),
            payload,
        }
    }

    pub fn scheme_tag(&self) -> &str {
        &self.scheme_tag
    }

    pub fn payload(&self) -> &[u8] {
        &self.payload
    }
}

/// Per-candidate tallies recovered from evidence. Every index of the
/// candidate set is present, zero counts included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    counts: BTreeMap<usize, u64>,
}

impl Outcome {
    /// Builds an outcome whose i-th count belongs to candidate i.
    pub fn from_counts(counts: &[u64]) -> Self {
        Self {
            counts: counts.iter().copied().enumerate().collect(),
        }
    }

    pub fn count(&self, index: usize) -> u64 {
        self.counts.get(&index).copied().unwrap_or(0)
    }

    pub fn arity(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn counts(&self) -> &BTreeMap<usize, u64> {
        &self.counts
    }

    /// Counts as a dense vector ordered by candidate index.
    pub fn to_vec(&self) -> Vec<u64> {
        (0..self.arity()).map(|i| self.count(i)).collect()
    }
}

/// Key material produced by `setup`. The concrete halves are scheme-specific.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyPair<P, S> {
    pub public: P,
    pub secret: S,
}

/// The four-algorithm election scheme every game can exercise.
///
/// `vote` returns `None` exactly when the vote is out of range for the
/// scheme's candidate set; that is an ordinary outcome, not a fault. All
/// randomness is drawn from the injected stream, so every operation is
/// deterministic for a fixed stream.
pub trait ElectionScheme {
    type PublicKey: Clone + PartialEq + fmt::Debug;
    type SecretKey: Clone + fmt::Debug;

    fn scheme_tag(&self) -> &'static str;

    fn candidates(&self) -> &CandidateSet;

    fn setup(
        &self,
        k: SecurityParameter,
        rng: &mut dyn RngCore,
    ) -> Result<KeyPair<Self::PublicKey, Self::SecretKey>, ElectionError>;

    fn vote(
        &self,
        pk: &Self::PublicKey,
        vote: Vote,
        k: SecurityParameter,
        rng: &mut dyn RngCore,
    ) -> Option<Ballot>;

    /// Verifies every board ballot and aggregates the valid ones; invalid
    /// ballots contribute nothing. A board of entirely invalid ballots
    /// yields evidence for the all-zero outcome.
    fn partial_tally(
        &self,
        sk: &Self::SecretKey,
        board: &BulletinBoard,
        k: SecurityParameter,
    ) -> Evidence;

    fn recover(
        &self,
        board: &BulletinBoard,
        evidence: &Evidence,
        pk: &Self::PublicKey,
    ) -> Result<Outcome, ElectionError>;
}

/// Shared evidence payload layout for count-vector schemes: the arity
/// followed by one count per candidate.
pub(crate) fn encode_count_vector(counts: &[u64]) -> Vec<u8> {
    let mut w = FieldWriter::new();
    w.push_u64(counts.len() as u64);
    for &c in counts {
        w.push_u64(c);
    }
    w.finish()
}

pub(crate) fn decode_count_vector(payload: &[u8]) -> Result<Vec<u64>, CodecError> {
    let mut r = FieldReader::new(payload);
    let len = r.take_u64()?;
    let mut counts = Vec::new();
    for _ in 0..len {
        counts.push(r.take_u64()?);
    }
    r.finish()?;
    Ok(counts)
}
