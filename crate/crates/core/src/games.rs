//! The two indistinguishability games, the challenge oracle with its
//! balanced-board predicate, and an empirical success-rate estimator.
//!
//! Both games draw from the injected stream in the same order: key setup
//! first, then the hidden bit, then the challenge vote, then adversary
//! randomness. Running the secrecy game with a reduction-wrapped adversary
//! therefore consumes the stream exactly like the malleability game with
//! the inner adversary, which is what makes per-trial win sequences
//! comparable under shared seeds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::election::{
    Ballot, BulletinBoard, CandidateSet, ElectionError, ElectionScheme, Evidence, Outcome,
    SecurityParameter, Vote,
};

/// Harness fault: a bug or environment failure, never an adversary loss.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("scheme setup failed: {0}")]
    Setup(ElectionError),
    #[error("challenger could not recover the outcome: {0}")]
    Recover(ElectionError),
}

/// Why a trial was lost independently of the guess.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Disqualification {
    /// Some candidate has unequal left- and right-challenge counts on the
    /// board.
    UnbalancedBoard,
    /// The challenge ballot itself appears on the board.
    ChallengeOnBoard,
    /// An adversary-supplied vote lies outside the candidate set.
    VoteOutsideCandidates,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GameResult {
    pub won: bool,
    pub disqualified: Option<Disqualification>,
}

impl GameResult {
    fn won() -> Self {
        Self {
            won: true,
            disqualified: None,
        }
    }

    fn lost() -> Self {
        Self {
            won: false,
            disqualified: None,
        }
    }

    fn disqualified(reason: Disqualification) -> Self {
        Self {
            won: false,
            disqualified: Some(reason),
        }
    }
}

/// One recorded challenge: the issued ballot and the two votes the
/// adversary asked about.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleEntry {
    pub ballot: Ballot,
    pub left: Vote,
    pub right: Vote,
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("oracle query with a vote outside the candidate set")]
pub struct InvalidQuery;

/// The challenge oracle of the secrecy game. Each query casts a ballot for
/// the hidden bit's vote and records the (ballot, left, right) triple.
pub struct ChallengeOracle<'a, S: ElectionScheme> {
    scheme: &'a S,
    pk: &'a S::PublicKey,
    k: SecurityParameter,
    hidden_bit: bool,
    entries: Vec<OracleEntry>,
    invalid_query: bool,
    query_count: usize,
}

impl<'a, S: ElectionScheme> ChallengeOracle<'a, S> {
    pub fn new(scheme: &'a S, pk: &'a S::PublicKey, k: SecurityParameter, hidden_bit: bool) -> Self {
        Self {
            scheme,
            pk,
            k,
            hidden_bit,
            entries: Vec::new(),
            invalid_query: false,
            query_count: 0,
        }
    }

    /// Returns Vote(pk, v_bit, k) and appends the triple to the log. A
    /// query with an out-of-range vote is recorded and disqualifies the
    /// game at the return line.
    pub fn query(
        &mut self,
        left: Vote,
        right: Vote,
        rng: &mut ChaCha20Rng,
    ) -> Result<Ballot, InvalidQuery> {
        self.query_count += 1;
        let candidates = self.scheme.candidates();
        if !candidates.contains(left) || !candidates.contains(right) {
            self.invalid_query = true;
            return Err(InvalidQuery);
        }
        let chosen = if self.hidden_bit { right } else { left };
        let ballot = self
            .scheme
            .vote(self.pk, chosen, self.k, rng)
            .expect("in-range challenge vote must produce a ballot");
        let entry = OracleEntry {
            ballot: ballot.clone(),
            left,
            right,
        };
        if !self.entries.contains(&entry) {
            self.entries.push(entry);
        }
        Ok(ballot)
    }

    pub fn entries(&self) -> &[OracleEntry] {
        &self.entries
    }

    pub fn query_count(&self) -> usize {
        self.query_count
    }

    pub fn saw_invalid_query(&self) -> bool {
        self.invalid_query
    }
}

/// Holds when, for every candidate, as many board ballots were issued with
/// that candidate as the left oracle input as with it as the right input.
pub fn balanced(board: &BulletinBoard, candidates: &CandidateSet, log: &[OracleEntry]) -> bool {
    (0..candidates.len()).all(|v| {
        let vote = Vote(v);
        let left = board
            .iter()
            .filter(|b| log.iter().any(|e| &e.ballot == *b && e.left == vote))
            .count();
        let right = board
            .iter()
            .filter(|b| log.iter().any(|e| &e.ballot == *b && e.right == vote))
            .count();
        left == right
    })
}

/// Adversary against the secrecy game: builds a board with oracle access,
/// then guesses the hidden bit from the board and the tally evidence.
/// Instances are stateful across the two stages.
pub trait SecrecyAdversary<S: ElectionScheme> {
    fn build_board(
        &mut self,
        pk: &S::PublicKey,
        k: SecurityParameter,
        oracle: &mut ChallengeOracle<'_, S>,
        rng: &mut ChaCha20Rng,
    ) -> BulletinBoard;

    fn guess(&mut self, board: &BulletinBoard, evidence: &Evidence, rng: &mut ChaCha20Rng)
        -> bool;
}

/// Adversary against the malleability game: picks the two candidate votes,
/// builds a board around the single challenge ballot, then guesses from
/// the recovered outcome alone.
pub trait MalleabilityGameAdversary<S: ElectionScheme> {
    fn choose_votes(
        &mut self,
        pk: &S::PublicKey,
        k: SecurityParameter,
        rng: &mut ChaCha20Rng,
    ) -> (Vote, Vote);

    fn build_board(&mut self, challenge: &Ballot, rng: &mut ChaCha20Rng) -> BulletinBoard;

    fn guess(&mut self, outcome: &Outcome, rng: &mut ChaCha20Rng) -> bool;
}

/// Plays one secrecy game: setup, hidden bit, adversary board with oracle
/// access, partial tally, guess. The adversary wins when the guess matches
/// the bit, the board is balanced and every oracle input was in range.
pub fn play_ballot_secrecy<S, A>(
    scheme: &S,
    adversary: &mut A,
    k: SecurityParameter,
    rng: &mut ChaCha20Rng,
) -> Result<GameResult, GameError>
where
    S: ElectionScheme,
    A: SecrecyAdversary<S>,
{
    let keys = scheme.setup(k, rng).map_err(GameError::Setup)?;
    let hidden_bit: bool = rng.gen();
    let mut oracle = ChallengeOracle::new(scheme, &keys.public, k, hidden_bit);
    let board = adversary.build_board(&keys.public, k, &mut oracle, rng);
    let evidence = scheme.partial_tally(&keys.secret, &board, k);
    let guess = adversary.guess(&board, &evidence, rng);

    if oracle.saw_invalid_query() {
        return Ok(GameResult::disqualified(
            Disqualification::VoteOutsideCandidates,
        ));
    }
    if !balanced(&board, scheme.candidates(), oracle.entries()) {
        return Ok(GameResult::disqualified(Disqualification::UnbalancedBoard));
    }
    Ok(if guess == hidden_bit {
        GameResult::won()
    } else {
        GameResult::lost()
    })
}

/// Plays one malleability game: setup, hidden bit, adversary vote pair,
/// challenge ballot, adversary board, tally, recover, guess. The adversary
/// wins when the guess matches the bit, the challenge ballot stays off the
/// board and both chosen votes are in range.
pub fn play_non_malleability<S, A>(
    scheme: &S,
    adversary: &mut A,
    k: SecurityParameter,
    rng: &mut ChaCha20Rng,
) -> Result<GameResult, GameError>
where
    S: ElectionScheme,
    A: MalleabilityGameAdversary<S>,
{
    let keys = scheme.setup(k, rng).map_err(GameError::Setup)?;
    let hidden_bit: bool = rng.gen();
    let (left, right) = adversary.choose_votes(&keys.public, k, rng);
    let candidates = scheme.candidates();
    if !candidates.contains(left) || !candidates.contains(right) {
        return Ok(GameResult::disqualified(
            Disqualification::VoteOutsideCandidates,
        ));
    }
    let chosen = if hidden_bit { right } else { left };
    let challenge = scheme
        .vote(&keys.public, chosen, k, rng)
        .expect("in-range challenge vote must produce a ballot");
    let board = adversary.build_board(&challenge, rng);
    let evidence = scheme.partial_tally(&keys.secret, &board, k);
    let outcome = scheme
        .recover(&board, &evidence, &keys.public)
        .map_err(GameError::Recover)?;
    let guess = adversary.guess(&outcome, rng);

    if board.contains(&challenge) {
        return Ok(GameResult::disqualified(Disqualification::ChallengeOnBoard));
    }
    Ok(if guess == hidden_bit {
        GameResult::won()
    } else {
        GameResult::lost()
    })
}

/// Empirical success estimate with a Wilson 95% interval.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialStats {
    pub trials: u32,
    pub wins: u32,
    pub rate: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
}

impl TrialStats {
    pub fn from_wins(wins: u32, trials: u32) -> Self {
        assert!(trials >= 1, "at least one trial required");
        assert!(wins <= trials);
        let (ci95_low, ci95_high) = wilson_interval(wins, trials);
        Self {
            trials,
            wins,
            rate: f64::from(wins) / f64::from(trials),
            ci95_low,
            ci95_high,
        }
    }
}

/// Wilson score interval for a binomial proportion at 95% confidence.
pub fn wilson_interval(wins: u32, trials: u32) -> (f64, f64) {
    let z = 1.959_963_984_540_054_f64;
    let n = f64::from(trials);
    let p = f64::from(wins) / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Everything a batch of trials produced: the aggregate stats and the
/// per-trial results, in trial order.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRun {
    pub stats: TrialStats,
    pub results: Vec<GameResult>,
}

/// Derives the isolated randomness stream for one trial of one experiment.
/// Streams for distinct (seed, trial) pairs are disjoint by construction.
pub fn derive_trial_rng(seed: u64, trial: u32) -> ChaCha20Rng {
    let mut hasher = Sha256::new();
    hasher.update(b"trial-stream");
    hasher.update(seed.to_be_bytes());
    hasher.update(trial.to_be_bytes());
    ChaCha20Rng::from_seed(hasher.finalize().into())
}

fn run_trials_with<F>(trials: u32, seed: u64, mut play_one: F) -> Result<TrialRun, GameError>
where
    F: FnMut(&mut ChaCha20Rng) -> Result<GameResult, GameError>,
{
    assert!(trials >= 1, "at least one trial required");
    let mut results = Vec::with_capacity(trials as usize);
    for trial in 0..trials {
        let mut rng = derive_trial_rng(seed, trial);
        results.push(play_one(&mut rng)?);
    }
    let wins = results.iter().filter(|r| r.won).count() as u32;
    Ok(TrialRun {
        stats: TrialStats::from_wins(wins, trials),
        results,
    })
}

/// Runs independent secrecy games with a fresh adversary per trial.
/// Disqualifications count as losses; faults abort the whole run.
pub fn run_secrecy_trials<S, A, F>(
    scheme: &S,
    k: SecurityParameter,
    trials: u32,
    seed: u64,
    mut new_adversary: F,
) -> Result<TrialRun, GameError>
where
    S: ElectionScheme,
    A: SecrecyAdversary<S>,
    F: FnMut() -> A,
{
    run_trials_with(trials, seed, |rng| {
        play_ballot_secrecy(scheme, &mut new_adversary(), k, rng)
    })
}

/// Runs independent malleability games with a fresh adversary per trial.
pub fn run_malleability_trials<S, A, F>(
    scheme: &S,
    k: SecurityParameter,
    trials: u32,
    seed: u64,
    mut new_adversary: F,
) -> Result<TrialRun, GameError>
where
    S: ElectionScheme,
    A: MalleabilityGameAdversary<S>,
    F: FnMut() -> A,
{
    run_trials_with(trials, seed, |rng| {
        play_non_malleability(scheme, &mut new_adversary(), k, rng)
    })
}
