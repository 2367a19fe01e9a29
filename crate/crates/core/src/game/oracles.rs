use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::{Answer, Constraint, Entry, Oracle, Verdict};
use crate::error::{Error, Result};
use crate::plane::Plane;
use crate::space::{Point, Space, Subspace};

/// Answers truthfully for a fixed target point.
pub struct FixedOracle {
    space: Space,
    target: Point,
}

impl FixedOracle {
    pub fn new(space: Space, target: Point) -> Self {
        FixedOracle { space, target }
    }

    pub fn target(&self) -> &Point {
        &self.target
    }
}

impl Oracle for FixedOracle {
    fn name(&self) -> String {
        let coords: Vec<String> = self.target.coords().iter().map(|c| c.to_string()).collect();
        format!("fixed:{}", coords.join(","))
    }

    fn answer(&mut self, _history: &[Entry], query: &Subspace) -> Result<Answer> {
        Ok(Answer::from_bool(self.space.contains(query, &self.target)?))
    }
}

/// How the adversary resolved a query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AdversaryBranch {
    /// Line query answered NO; the line joins the charged set.
    LineNo,
    /// Line query answered YES; the target is now confined to that line.
    LineYes,
    /// Point already excluded; NO, citing a charged line through it.
    PointKnown,
    /// Point answered NO with a line through it that joins the charged set.
    PointNotInLine,
    /// Point answered NO while committing to a line avoiding it.
    PointInLine,
    /// Query after commitment; the larger side of the candidates wins.
    Committed,
}

/// Count of each [`AdversaryBranch`] taken during a game.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BranchStats {
    pub line_no: usize,
    pub line_yes: usize,
    pub point_known: usize,
    pub point_not_in_line: usize,
    pub point_in_line: usize,
    pub committed: usize,
}

impl BranchStats {
    fn record(&mut self, b: AdversaryBranch) {
        match b {
            AdversaryBranch::LineNo => self.line_no += 1,
            AdversaryBranch::LineYes => self.line_yes += 1,
            AdversaryBranch::PointKnown => self.point_known += 1,
            AdversaryBranch::PointNotInLine => self.point_not_in_line += 1,
            AdversaryBranch::PointInLine => self.point_in_line += 1,
            AdversaryBranch::Committed => self.committed += 1,
        }
    }
}

enum Phase {
    /// No line known to contain the target. The charged lines never leave
    /// points coverable by a single further line.
    Open,
    Committed(FixedBitSet),
}

/// Adaptive adversary on the plane for line and point queries.
///
/// Before any commitment it keeps a set of charged lines (lines the target is
/// off) and answers NO whenever that leaves the uncovered points not
/// collinear. Point queries are answered NO together with a volunteered line,
/// so point queries are never cheaper than line queries. Once a line is
/// forced, it answers so that at least half of the remaining candidates
/// survive, ties going to NO.
pub struct Adversary {
    plane: Plane,
    charged: Vec<usize>,
    phase: Phase,
    stats: BranchStats,
    branches: Vec<AdversaryBranch>,
}

impl Adversary {
    pub fn new(plane: Plane) -> Self {
        Adversary {
            plane,
            charged: Vec::new(),
            phase: Phase::Open,
            stats: BranchStats::default(),
            branches: Vec::new(),
        }
    }

    pub fn stats(&self) -> &BranchStats {
        &self.stats
    }

    /// The branch taken for each answered query, in order.
    pub fn branches(&self) -> &[AdversaryBranch] {
        &self.branches
    }

    /// Points still consistent with every answer given.
    pub fn candidates(&self) -> FixedBitSet {
        match &self.phase {
            Phase::Open => self.plane.uncovered(&self.charged),
            Phase::Committed(c) => c.clone(),
        }
    }

    /// A point consistent with the whole transcript.
    pub fn witness(&self) -> Option<Point> {
        self.candidates().ones().next().map(|i| self.plane.point(i))
    }

    fn with(&self, l: usize) -> Vec<usize> {
        let mut v = self.charged.clone();
        v.push(l);
        v
    }

    fn charge(&mut self, l: usize) {
        if !self.charged.contains(&l) {
            self.charged.push(l);
        }
    }

    fn extendable(&self, l: usize) -> bool {
        self.plane.cover_extension(&self.with(l)).is_some()
    }

    fn open_line(&mut self, l: usize) -> (Answer, AdversaryBranch) {
        if self.extendable(l) {
            let mut c = self.plane.uncovered(&self.charged);
            c.intersect_with(self.plane.line_set(l));
            self.phase = Phase::Committed(c);
            (Answer::yes(), AdversaryBranch::LineYes)
        } else {
            self.charge(l);
            (Answer::no(), AdversaryBranch::LineNo)
        }
    }

    fn open_point(&mut self, p: usize) -> Result<(Answer, AdversaryBranch)> {
        let line_answer = |c: Constraint| Answer { verdict: Verdict::No, volunteered: Some(c) };
        let open = self.plane.uncovered(&self.charged);
        let through = self.plane.lines_through(p).to_vec();
        if !open.contains(p) {
            let l = *through
                .iter()
                .find(|l| self.charged.contains(l))
                .ok_or_else(|| Error::InternalInconsistency("covered point without a charged line".into()))?;
            return Ok((line_answer(Constraint::NotInLine(self.plane.line(l).clone())), AdversaryBranch::PointKnown));
        }
        if let Some(&l) = through.iter().find(|&&l| !self.extendable(l)) {
            self.charge(l);
            return Ok((
                line_answer(Constraint::NotInLine(self.plane.line(l).clone())),
                AdversaryBranch::PointNotInLine,
            ));
        }
        // Every line through p would leave a coverable remainder: commit to a
        // line that completes a cover together with some line through p but
        // avoids p itself.
        for &m in &through {
            let rest = self.plane.uncovered(&self.with(m));
            let pts: Vec<usize> = rest.ones().collect();
            let star = match pts.len() {
                0 => None,
                1 => self.plane.lines_through(pts[0]).iter().copied().find(|&l| !self.plane.incident(p, l)),
                _ => Some(self.plane.line_through(pts[0], pts[1])).filter(|&l| !self.plane.incident(p, l)),
            };
            if let Some(l) = star {
                let mut c = open.clone();
                c.intersect_with(self.plane.line_set(l));
                c.set(p, false);
                if c.count_ones(..) == 0 {
                    continue;
                }
                self.phase = Phase::Committed(c);
                return Ok((line_answer(Constraint::InLine(self.plane.line(l).clone())), AdversaryBranch::PointInLine));
            }
        }
        Err(Error::InternalInconsistency(format!("no consistent answer for point {}", self.plane.point(p))))
    }

    fn committed(c: &mut FixedBitSet, set: &FixedBitSet) -> Answer {
        let mut inside = c.clone();
        inside.intersect_with(set);
        let mut outside = c.clone();
        outside.difference_with(set);
        if outside.count_ones(..) >= inside.count_ones(..) && outside.count_ones(..) > 0 {
            *c = outside;
            Answer::no()
        } else {
            *c = inside;
            Answer::yes()
        }
    }
}

impl Oracle for Adversary {
    fn name(&self) -> String {
        "adversary".into()
    }

    fn answer(&mut self, _history: &[Entry], query: &Subspace) -> Result<Answer> {
        let space = self.plane.space();
        if query.ambient() != 3 {
            return Err(Error::DimensionMismatch { expected: 3, found: query.ambient() });
        }
        let (answer, branch) = match &mut self.phase {
            Phase::Committed(c) => {
                let set = space.point_set(query);
                (Self::committed(c, &set), AdversaryBranch::Committed)
            }
            Phase::Open => match query.dim() {
                2 => {
                    let l = self
                        .plane
                        .line_index(query)
                        .ok_or_else(|| Error::InternalInconsistency("unknown line".into()))?;
                    self.open_line(l)
                }
                1 => {
                    let p = space.point_index(&query.as_point().expect("1-subspace"));
                    self.open_point(p)?
                }
                d => return Err(Error::WrongDimension { expected: 2, found: d }),
            },
        };
        if let Phase::Open = self.phase {
            if self.plane.cover_extension(&self.charged).is_some() {
                return Err(Error::InternalInconsistency("charged lines became coverable".into()));
            }
        }
        self.stats.record(branch);
        self.branches.push(branch);
        Ok(answer)
    }
}
