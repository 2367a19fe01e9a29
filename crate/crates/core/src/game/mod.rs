//! Adaptive search games.
//!
//! A [`Searcher`] proposes queries (subspaces) or announces a point; an
//! [`Oracle`] answers YES/NO, and the adversary may volunteer an extra line
//! constraint on point queries. [`run_game`] referees the exchange, tracking
//! the set of points consistent with everything said so far.

mod oracles;
mod searchers;
mod transcript;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::gaussian_binomial_u64;
use crate::space::{Point, Space, Subspace};

pub use oracles::{Adversary, AdversaryBranch, BranchStats, FixedOracle};
pub use searchers::{InductiveSearcher, PlaneSearcher, RandomSearcher, TwoRoundSearcher};
pub use transcript::{build_oracle, build_searcher, replay, transcript_from_json, transcript_to_json, ReplayReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Yes,
    No,
}

/// Extra information an oracle may attach to a NO answer on a point query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Constraint {
    NotInLine(Subspace),
    InLine(Subspace),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Answer {
    pub verdict: Verdict,
    pub volunteered: Option<Constraint>,
}

impl Answer {
    pub fn yes() -> Self {
        Answer { verdict: Verdict::Yes, volunteered: None }
    }

    pub fn no() -> Self {
        Answer { verdict: Verdict::No, volunteered: None }
    }

    pub fn from_bool(b: bool) -> Self {
        if b {
            Self::yes()
        } else {
            Self::no()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub query: Subspace,
    pub answer: Answer,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Move {
    Ask(Subspace),
    Announce(Point),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Identified(Point),
    Aborted(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub n: usize,
    pub q: u64,
    pub searcher: String,
    pub oracle: String,
    pub entries: Vec<Entry>,
    pub outcome: Outcome,
}

impl Transcript {
    pub fn count(&self) -> usize {
        self.entries.len()
    }
}

pub trait Searcher {
    /// Name understood by [`build_searcher`].
    fn name(&self) -> String;
    fn next_move(&mut self, history: &[Entry]) -> Result<Move>;
}

pub trait Oracle {
    /// Name understood by [`build_oracle`].
    fn name(&self) -> String;
    fn answer(&mut self, history: &[Entry], query: &Subspace) -> Result<Answer>;
}

/// Points consistent with a history of answers.
#[derive(Clone, Debug)]
pub struct Knowledge {
    candidates: FixedBitSet,
    applied: usize,
}

impl Knowledge {
    pub fn new(space: &Space) -> Self {
        let mut candidates = FixedBitSet::with_capacity(space.num_points() as usize);
        candidates.insert_range(..);
        Knowledge { candidates, applied: 0 }
    }

    pub fn apply(&mut self, space: &Space, entry: &Entry) {
        space.restrict(&mut self.candidates, &entry.query, entry.answer.verdict == Verdict::Yes);
        match &entry.answer.volunteered {
            Some(Constraint::NotInLine(l)) => space.restrict(&mut self.candidates, l, false),
            Some(Constraint::InLine(l)) => space.restrict(&mut self.candidates, l, true),
            None => {}
        }
        self.applied += 1;
    }

    /// Applies the entries of `history` not seen yet.
    pub fn sync(&mut self, space: &Space, history: &[Entry]) {
        for e in &history[self.applied.min(history.len())..] {
            self.apply(space, e);
        }
    }

    pub fn candidates(&self) -> &FixedBitSet {
        &self.candidates
    }

    pub fn count(&self) -> usize {
        self.candidates.count_ones(..)
    }

    pub fn first(&self) -> Option<usize> {
        self.candidates.ones().next()
    }
}

/// Default query cap for a game: the number of points.
pub fn default_limit(n: usize, q: u64) -> usize {
    gaussian_binomial_u64(n as i64, 1, q).unwrap_or(u64::MAX).min(usize::MAX as u64) as usize
}

/// Plays `searcher` against `oracle` until an announcement or `limit`
/// queries.
pub fn run_game(
    space: &Space,
    searcher: &mut dyn Searcher,
    oracle: &mut dyn Oracle,
    limit: usize,
) -> Result<Transcript> {
    if limit == 0 {
        return Err(Error::InvalidArgument("query limit must be at least 1".into()));
    }
    let mut knowledge = Knowledge::new(space);
    let mut entries: Vec<Entry> = Vec::new();
    let outcome = loop {
        match searcher.next_move(&entries)? {
            Move::Ask(query) => {
                if entries.len() == limit {
                    break Outcome::Aborted(format!("query limit {limit} reached"));
                }
                if query.ambient() != space.n() || !query.is_proper_nontrivial() {
                    return Err(Error::InvalidArgument(format!("illegal query of dimension {}", query.dim())));
                }
                let answer = oracle.answer(&entries, &query)?;
                let entry = Entry { query, answer };
                knowledge.apply(space, &entry);
                entries.push(entry);
                if knowledge.count() == 0 {
                    return Err(Error::InconsistentOracle);
                }
            }
            Move::Announce(p) => {
                let idx = space.point_index(&p);
                let remaining = knowledge.count();
                if remaining != 1 || !knowledge.candidates().contains(idx) {
                    return Err(Error::BadAnnounce(p.to_string(), remaining));
                }
                break Outcome::Identified(p);
            }
        }
    };
    Ok(Transcript { n: space.n(), q: space.q(), searcher: searcher.name(), oracle: oracle.name(), entries, outcome })
}

/// Query counts of a searcher against the fixed oracle of every point, in
/// point order. Games run in parallel; the result order does not depend on
/// scheduling.
pub fn sweep_fixed<F>(space: &Space, make_searcher: F, limit: usize) -> Result<Vec<Transcript>>
where
    F: Fn() -> Result<Box<dyn Searcher>> + Sync,
{
    (0..space.num_points() as usize)
        .into_par_iter()
        .map(|i| {
            let target = space.point_at(i);
            let mut s = make_searcher()?;
            let mut o = FixedOracle::new(space.clone(), target.clone());
            let t = run_game(space, s.as_mut(), &mut o, limit)?;
            match &t.outcome {
                Outcome::Identified(p) if *p == target => Ok(t),
                other => Err(Error::InternalInconsistency(format!("sweep game for {target} ended with {other:?}"))),
            }
        })
        .collect()
}
