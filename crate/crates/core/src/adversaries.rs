//! Concrete adversaries: the strategy-free baseline, the mauling attacker
//! against the malleability game, and the wrapper that turns any
//! malleability-game adversary into a secrecy-game adversary.

use rand::Rng;
use rand_chacha::ChaCha20Rng;

use crate::election::{
    Ballot, BulletinBoard, ElectionScheme, Evidence, Outcome, SecurityParameter, Vote,
};
use crate::games::{
    ChallengeOracle, MalleabilityGameAdversary, SecrecyAdversary,
};
use crate::helios::{maul_ballot, HeliosBallot, HeliosScheme};

/// No strategy at all: empty board, fixed guess.
#[derive(Debug, Clone)]
pub struct NullAdversary {
    fixed_guess: bool,
}

impl NullAdversary {
    pub fn new(fixed_guess: bool) -> Self {
        Self { fixed_guess }
    }
}

impl Default for NullAdversary {
    /// The baseline always guesses 1.
    fn default() -> Self {
        Self { fixed_guess: true }
    }
}

impl<S: ElectionScheme> SecrecyAdversary<S> for NullAdversary {
    fn build_board(
        &mut self,
        _pk: &S::PublicKey,
        _k: SecurityParameter,
        _oracle: &mut ChallengeOracle<'_, S>,
        _rng: &mut ChaCha20Rng,
    ) -> BulletinBoard {
        BulletinBoard::new()
    }

    fn guess(&mut self, _board: &BulletinBoard, _evidence: &Evidence, _rng: &mut ChaCha20Rng) -> bool {
        self.fixed_guess
    }
}

impl<S: ElectionScheme> MalleabilityGameAdversary<S> for NullAdversary {
    fn choose_votes(
        &mut self,
        _pk: &S::PublicKey,
        _k: SecurityParameter,
        _rng: &mut ChaCha20Rng,
    ) -> (Vote, Vote) {
        (Vote(0), Vote(1))
    }

    fn build_board(&mut self, _challenge: &Ballot, _rng: &mut ChaCha20Rng) -> BulletinBoard {
        BulletinBoard::new()
    }

    fn guess(&mut self, _outcome: &Outcome, _rng: &mut ChaCha20Rng) -> bool {
        self.fixed_guess
    }
}

/// Exploits malleable ballots: mauls the challenge ballot into a
/// byte-distinct twin, casts it next to ballots whose votes it knows, and
/// reads the challenge vote off the outcome as outcome minus known counts.
#[derive(Debug, Clone)]
pub struct MalleabilityAdversary {
    scheme: HeliosScheme,
    known_ballot_count: usize,
    maul_disjunct: usize,
    pk: Option<<HeliosScheme as ElectionScheme>::PublicKey>,
    k: Option<SecurityParameter>,
    known_counts: Vec<u64>,
    challenge_seen: Option<Ballot>,
    mauled: Option<Ballot>,
}

impl MalleabilityAdversary {
    /// Two known adversarial ballots by default, alternating between the
    /// two chosen candidates.
    pub fn new(scheme: HeliosScheme) -> Self {
        Self::with_known_ballots(scheme, 2)
    }

    pub fn with_known_ballots(scheme: HeliosScheme, known_ballot_count: usize) -> Self {
        Self {
            scheme,
            known_ballot_count,
            maul_disjunct: 0,
            pk: None,
            k: None,
            known_counts: Vec::new(),
            challenge_seen: None,
            mauled: None,
        }
    }

    pub fn stored_public_key(&self) -> Option<&<HeliosScheme as ElectionScheme>::PublicKey> {
        self.pk.as_ref()
    }

    /// The mauled twin cast in the last game, if any.
    pub fn mauled_ballot(&self) -> Option<&Ballot> {
        self.mauled.as_ref()
    }

    pub fn challenge_ballot(&self) -> Option<&Ballot> {
        self.challenge_seen.as_ref()
    }
}

impl MalleabilityGameAdversary<HeliosScheme> for MalleabilityAdversary {
    fn choose_votes(
        &mut self,
        pk: &<HeliosScheme as ElectionScheme>::PublicKey,
        k: SecurityParameter,
        _rng: &mut ChaCha20Rng,
    ) -> (Vote, Vote) {
        self.pk = Some(pk.clone());
        self.k = Some(k);
        (Vote(0), Vote(1))
    }

    fn build_board(&mut self, challenge: &Ballot, rng: &mut ChaCha20Rng) -> BulletinBoard {
        let pk = self.pk.clone().expect("choose_votes runs first");
        let k = self.k.expect("choose_votes runs first");
        self.challenge_seen = Some(challenge.clone());

        let decoded = HeliosBallot::from_ballot(challenge)
            .expect("challenge ballot decodes under the scheme");
        let twin = maul_ballot(&pk, &decoded, self.maul_disjunct)
            .expect("challenge ballot verifies leniently")
            .into_ballot(challenge.scheme_tag());
        self.mauled = Some(twin.clone());

        let mut board = BulletinBoard::new();
        board.insert(twin);
        let m = self.scheme.candidates().len();
        self.known_counts = vec![0; m];
        for i in 0..self.known_ballot_count {
            let vote = Vote(i % 2);
            let ballot = self
                .scheme
                .vote(&pk, vote, k, rng)
                .expect("known votes are in range");
            self.known_counts[vote.index()] += 1;
            board.insert(ballot);
        }
        board
    }

    fn guess(&mut self, outcome: &Outcome, rng: &mut ChaCha20Rng) -> bool {
        let m = self.known_counts.len().max(outcome.arity());
        let residual: Vec<i64> = (0..m)
            .map(|i| {
                outcome.count(i) as i64
                    - self.known_counts.get(i).copied().unwrap_or(0) as i64
            })
            .collect();
        let unit_at = |target: usize| {
            residual
                .iter()
                .enumerate()
                .all(|(i, &r)| if i == target { r == 1 } else { r == 0 })
        };
        if unit_at(0) {
            false
        } else if unit_at(1) {
            true
        } else {
            // the mauled ballot was discarded (or the residual is garbage):
            // nothing to read, flip a coin
            rng.gen()
        }
    }
}

/// Secrecy-game adversary built from a malleability-game adversary: it
/// relays the inner vote pair through a single oracle query, hands the
/// resulting challenge ballot to the inner board stage, and answers the
/// guess stage by recovering the outcome itself.
pub struct ReductionAdversary<S: ElectionScheme, A> {
    scheme: S,
    inner: A,
    pk: Option<S::PublicKey>,
    oracle_queries: usize,
}

impl<S: ElectionScheme, A> ReductionAdversary<S, A> {
    pub fn inner(&self) -> &A {
        &self.inner
    }

    /// Oracle queries issued in the last board stage; the construction
    /// makes exactly one.
    pub fn oracle_queries(&self) -> usize {
        self.oracle_queries
    }
}

/// Wraps a malleability-game adversary for play in the secrecy game.
pub fn build_reduction<S, A>(inner: A, scheme: S) -> ReductionAdversary<S, A>
where
    S: ElectionScheme,
    A: MalleabilityGameAdversary<S>,
{
    ReductionAdversary {
        scheme,
        inner,
        pk: None,
        oracle_queries: 0,
    }
}

impl<S, A> SecrecyAdversary<S> for ReductionAdversary<S, A>
where
    S: ElectionScheme,
    A: MalleabilityGameAdversary<S>,
{
    fn build_board(
        &mut self,
        pk: &S::PublicKey,
        k: SecurityParameter,
        oracle: &mut ChallengeOracle<'_, S>,
        rng: &mut ChaCha20Rng,
    ) -> BulletinBoard {
        self.pk = Some(pk.clone());
        let (left, right) = self.inner.choose_votes(pk, k, rng);
        self.oracle_queries += 1;
        match oracle.query(left, right, rng) {
            Ok(challenge) => self.inner.build_board(&challenge, rng),
            // the game is already disqualified; nothing sensible to build
            Err(_) => BulletinBoard::new(),
        }
    }

    fn guess(&mut self, board: &BulletinBoard, evidence: &Evidence, rng: &mut ChaCha20Rng) -> bool {
        let pk = self.pk.as_ref().expect("build_board runs first");
        let outcome = self
            .scheme
            .recover(board, evidence, pk)
            .expect("challenger evidence recovers");
        self.inner.guess(&outcome, rng)
    }
}
