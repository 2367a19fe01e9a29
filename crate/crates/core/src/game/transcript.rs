//! Transcript serialization and replay.
//!
//! Transcripts are JSON documents naming the searcher and oracle, so a
//! transcript can be regenerated and compared byte for byte.

use serde::{Deserialize, Serialize};

use super::{
    default_limit, run_game, Adversary, Answer, Constraint, Entry, FixedOracle, InductiveSearcher, Knowledge, Oracle,
    Outcome, PlaneSearcher, RandomSearcher, Searcher, Transcript, TwoRoundSearcher, Verdict,
};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::literal::{format_subspace, parse_subspace};
use crate::plane::Plane;
use crate::space::Space;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TranscriptDoc {
    n: usize,
    q: u64,
    searcher: String,
    oracle: String,
    entries: Vec<EntryDoc>,
    outcome: OutcomeDoc,
    count: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryDoc {
    query: String,
    verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    volunteered: Option<ConstraintDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", deny_unknown_fields)]
enum ConstraintDoc {
    NotInLine { line: String },
    InLine { line: String },
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum OutcomeDoc {
    Identified(Vec<usize>),
    Aborted(String),
}

/// Pretty JSON with a trailing newline.
pub fn transcript_to_json(t: &Transcript) -> String {
    let doc = TranscriptDoc {
        n: t.n,
        q: t.q,
        searcher: t.searcher.clone(),
        oracle: t.oracle.clone(),
        entries: t
            .entries
            .iter()
            .map(|e| EntryDoc {
                query: format_subspace(t.q, &e.query),
                verdict: e.answer.verdict,
                volunteered: e.answer.volunteered.as_ref().map(|c| match c {
                    Constraint::NotInLine(l) => ConstraintDoc::NotInLine { line: format_subspace(t.q, l) },
                    Constraint::InLine(l) => ConstraintDoc::InLine { line: format_subspace(t.q, l) },
                }),
            })
            .collect(),
        outcome: match &t.outcome {
            Outcome::Identified(p) => OutcomeDoc::Identified(p.to_indices()),
            Outcome::Aborted(r) => OutcomeDoc::Aborted(r.clone()),
        },
        count: t.count(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("transcript serializes");
    s.push('\n');
    s
}

/// Parses a transcript, returning it with its ambient space.
pub fn transcript_from_json(text: &str) -> Result<(Space, Transcript)> {
    let doc: TranscriptDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let space = Space::new(Field::new(doc.q)?, doc.n)?;
    let mut entries = Vec::with_capacity(doc.entries.len());
    for e in &doc.entries {
        let volunteered = match &e.volunteered {
            None => None,
            Some(ConstraintDoc::NotInLine { line }) => Some(Constraint::NotInLine(parse_subspace(&space, line)?)),
            Some(ConstraintDoc::InLine { line }) => Some(Constraint::InLine(parse_subspace(&space, line)?)),
        };
        entries.push(Entry {
            query: parse_subspace(&space, &e.query)?,
            answer: Answer { verdict: e.verdict, volunteered },
        });
    }
    if doc.count != entries.len() {
        return Err(Error::Parse(format!("count {} but {} entries", doc.count, entries.len())));
    }
    let outcome = match doc.outcome {
        OutcomeDoc::Identified(coords) => {
            let v = coords
                .iter()
                .map(|&c| space.field().elem(c).ok_or_else(|| Error::Parse(format!("coordinate {c} out of range"))))
                .collect::<Result<Vec<_>>>()?;
            if v.len() != doc.n {
                return Err(Error::DimensionMismatch { expected: doc.n, found: v.len() });
            }
            Outcome::Identified(space.normalize(&v)?)
        }
        OutcomeDoc::Aborted(r) => Outcome::Aborted(r),
    };
    let t = Transcript { n: doc.n, q: doc.q, searcher: doc.searcher, oracle: doc.oracle, entries, outcome };
    Ok((space, t))
}

/// Searcher from its name: `plane`, `inductive`, `two-round`,
/// `random:<seed>` or `random-mixed:<seed>:<permille>`.
pub fn build_searcher(name: &str, space: &Space) -> Result<Box<dyn Searcher>> {
    let parts: Vec<&str> = name.split(':').collect();
    let num = |s: &str| s.parse::<u64>().map_err(|_| Error::InvalidArgument(format!("bad number `{s}` in `{name}`")));
    Ok(match parts.as_slice() {
        ["plane"] => Box::new(PlaneSearcher::new(space)?),
        ["inductive"] => Box::new(InductiveSearcher::new(space)?),
        ["two-round"] => Box::new(TwoRoundSearcher::new(space)?),
        ["random", seed] => Box::new(RandomSearcher::lines(space, num(seed)?)?),
        ["random-mixed", seed, rate] => {
            let rate =
                u32::try_from(num(rate)?).map_err(|_| Error::InvalidArgument(format!("bad rate in `{name}`")))?;
            Box::new(RandomSearcher::mixed(space, num(seed)?, rate)?)
        }
        _ => return Err(Error::InvalidArgument(format!("unknown searcher `{name}`"))),
    })
}

/// Oracle from its name: `adversary` (planes only) or `fixed:<c1,...,cn>`.
pub fn build_oracle(name: &str, space: &Space) -> Result<Box<dyn Oracle>> {
    if name == "adversary" {
        if space.n() != 3 {
            return Err(Error::WrongDimension { expected: 3, found: space.n() });
        }
        return Ok(Box::new(Adversary::new(Plane::from_space(space.clone())?)));
    }
    if let Some(coords) = name.strip_prefix("fixed:") {
        let v = coords
            .split(',')
            .map(|c| {
                c.trim()
                    .parse::<usize>()
                    .ok()
                    .and_then(|i| space.field().elem(i))
                    .ok_or_else(|| Error::InvalidArgument(format!("bad coordinate `{c}` in `{name}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        if v.len() != space.n() {
            return Err(Error::DimensionMismatch { expected: space.n(), found: v.len() });
        }
        return Ok(Box::new(FixedOracle::new(space.clone(), space.normalize(&v)?)));
    }
    Err(Error::InvalidArgument(format!("unknown oracle `{name}`")))
}

/// Result of checking a saved transcript.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReplayReport {
    /// Every answer is consistent and the announced point is the only
    /// remaining candidate.
    pub consistent: bool,
    /// Re-running the named searcher and oracle reproduces the document
    /// byte for byte.
    pub reproduced: bool,
    pub count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

pub fn replay(text: &str) -> Result<ReplayReport> {
    let (space, t) = transcript_from_json(text)?;
    let mut know = Knowledge::new(&space);
    let mut detail = None;
    let mut consistent = true;
    for (i, e) in t.entries.iter().enumerate() {
        know.apply(&space, e);
        if know.count() == 0 {
            consistent = false;
            detail = Some(format!("no candidate left after entry {i}"));
            break;
        }
    }
    if consistent {
        if let Outcome::Identified(p) = &t.outcome {
            if know.count() != 1 || !know.candidates().contains(space.point_index(p)) {
                consistent = false;
                detail = Some(format!("{} candidates remain, announced {p}", know.count()));
            }
        }
    }
    let mut searcher = build_searcher(&t.searcher, &space)?;
    let mut oracle = build_oracle(&t.oracle, &space)?;
    let limit = default_limit(space.n(), space.q()).max(t.count());
    let rerun = run_game(&space, searcher.as_mut(), oracle.as_mut(), limit)?;
    let reproduced = transcript_to_json(&rerun) == text;
    if !reproduced && detail.is_none() {
        detail = Some("re-run differs from the saved transcript".into());
    }
    Ok(ReplayReport { consistent, reproduced, count: t.count(), detail })
}
