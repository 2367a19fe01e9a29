use rand::seq::SliceRandom;
use rand::Rng;

use super::{Entry, Knowledge, Move, Searcher, Verdict};
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::rng::{seeded_rng, SeededRng};
use crate::space::{Point, Space, Subspace};

/// Line-pencil strategy for the plane.
///
/// Asks the first `q` lines through the first point `x`. On the first YES the
/// target is on that line; after `q` NOs it is on the last line through `x`
/// and not `x`. It then asks candidate points in index order until one
/// remains. At most `2q - 1` queries.
pub struct PlaneSearcher {
    space: Space,
    pencil: Vec<Subspace>,
    asked_lines: usize,
    in_pencil: bool,
    knowledge: Knowledge,
}

impl PlaneSearcher {
    pub fn new(space: &Space) -> Result<Self> {
        if space.n() != 3 {
            return Err(Error::WrongDimension { expected: 3, found: space.n() });
        }
        let x = Subspace::from_point(&space.point_at(0));
        Ok(PlaneSearcher {
            space: space.clone(),
            pencil: space.hyperplanes_through(&x)?,
            asked_lines: 0,
            in_pencil: true,
            knowledge: Knowledge::new(space),
        })
    }
}

impl Searcher for PlaneSearcher {
    fn name(&self) -> String {
        "plane".into()
    }

    fn next_move(&mut self, history: &[Entry]) -> Result<Move> {
        self.knowledge.sync(&self.space, history);
        if self.in_pencil {
            if let Some(last) = history.last() {
                if last.answer.verdict == Verdict::Yes && last.query.is_hyperplane() {
                    self.in_pencil = false;
                }
            }
            if self.asked_lines == self.space.q() as usize {
                self.in_pencil = false;
            }
        }
        if self.knowledge.count() == 1 {
            let p = self.knowledge.first().expect("one candidate");
            return Ok(Move::Announce(self.space.point_at(p)));
        }
        if self.in_pencil {
            self.asked_lines += 1;
            return Ok(Move::Ask(self.pencil[self.asked_lines - 1].clone()));
        }
        let p = self.knowledge.first().ok_or(Error::InconsistentOracle)?;
        Ok(Move::Ask(Subspace::from_point(&self.space.point_at(p))))
    }
}

/// Hyperplane-only strategy for any `n`, using at most `(q-1)(n-1) + 1`
/// queries.
///
/// Keeps a subspace `w` known to contain the target. When a hyperplane `e` of
/// `w` is also known to miss the target, it walks the pencil of `w` around an
/// axis inside `e` and needs only `q - 1` questions; otherwise it walks a full
/// pencil with `q` questions, spending one more only when the first YES comes
/// before any NO and so cannot tell the axis from the first member.
pub struct InductiveSearcher {
    space: Space,
    state: Stage,
}

enum Stage {
    Walk(Walk),
    Found(Point),
}

struct Walk {
    w: Subspace,
    axis: Subspace,
    /// Members that may be asked, in canonical order; the last one is never
    /// asked and is inferred from NO answers.
    members: Vec<Subspace>,
    /// Whether a hyperplane of `w` through `axis` is already excluded.
    excluded: bool,
    next: usize,
    saw_no: bool,
    /// Index of a YES given before any NO, pending disambiguation.
    first_yes: Option<usize>,
}

impl InductiveSearcher {
    pub fn new(space: &Space) -> Result<Self> {
        if space.n() < 2 {
            return Err(Error::WrongDimension { expected: 2, found: space.n() });
        }
        let state = start(space, space.full(), None)?;
        Ok(InductiveSearcher { space: space.clone(), state })
    }

    fn lift(&self, w: &Subspace, a: &Subspace) -> Result<Subspace> {
        if w.dim() == self.space.n() {
            Ok(a.clone())
        } else {
            self.space.lift_hyperplane(w, a)
        }
    }

    fn advance(&mut self, verdict: Verdict) -> Result<()> {
        let Stage::Walk(walk) = &mut self.state else {
            return Err(Error::InternalInconsistency("answer after identification".into()));
        };
        let i = walk.next - 1;
        let next = match verdict {
            Verdict::Yes => {
                if walk.excluded || walk.saw_no || walk.axis.dim() == 0 {
                    Some(start(&self.space, walk.members[i].clone(), Some(walk.axis.clone()))?)
                } else if let Some(j) = walk.first_yes {
                    // Two YES answers: the target lies on the axis.
                    debug_assert_eq!(j + 1, i);
                    Some(start(&self.space, walk.axis.clone(), None)?)
                } else {
                    walk.first_yes = Some(i);
                    None
                }
            }
            Verdict::No => {
                walk.saw_no = true;
                if let Some(j) = walk.first_yes {
                    Some(start(&self.space, walk.members[j].clone(), Some(walk.axis.clone()))?)
                } else if walk.next == walk.members.len() - 1 {
                    let last = walk.members.last().expect("nonempty pencil").clone();
                    Some(start(&self.space, last, Some(walk.axis.clone()))?)
                } else {
                    None
                }
            }
        };
        if let Some(s) = next {
            self.state = s;
        }
        Ok(())
    }
}

/// Walk state for a subspace `w` containing the target. `excluded` is a
/// hyperplane of `w` known to miss the target.
fn start(space: &Space, w: Subspace, excluded: Option<Subspace>) -> Result<Stage> {
    let d = w.dim();
    if d == 1 {
        return Ok(Stage::Found(w.as_point().expect("1-subspace")));
    }
    let (axis, members, has_excluded) = match excluded {
        None => {
            let axis = space.tail_subspace(&w, d - 2);
            let members = space.pencil(&w, &axis)?;
            (axis, members, false)
        }
        Some(e) => {
            let axis = space.tail_subspace(&e, d - 2);
            let members: Vec<Subspace> = space.pencil(&w, &axis)?.into_iter().filter(|m| *m != e).collect();
            (axis, members, true)
        }
    };
    Ok(Stage::Walk(Walk { w, axis, members, excluded: has_excluded, next: 0, saw_no: false, first_yes: None }))
}

impl Searcher for InductiveSearcher {
    fn name(&self) -> String {
        "inductive".into()
    }

    fn next_move(&mut self, history: &[Entry]) -> Result<Move> {
        if let Some(last) = history.last() {
            self.advance(last.answer.verdict)?;
        }
        let (w, member) = match &mut self.state {
            Stage::Found(p) => return Ok(Move::Announce(p.clone())),
            Stage::Walk(walk) => {
                walk.next += 1;
                (walk.w.clone(), walk.members[walk.next - 1].clone())
            }
        };
        Ok(Move::Ask(self.lift(&w, &member)?))
    }
}

/// Two-round strategy built from the explicit separating family.
///
/// Round one asks the coordinate hyperplanes `x_i = 0`, revealing the support
/// of the target. Round two fixes the first support coordinate `x` and, for
/// every other support coordinate `j`, asks `λ_k x_x = x_j` for the first
/// `q - 2` nonzero `λ_k`; the last nonzero element is inferred. Uses
/// `n + (|support| - 1)(q - 2)` queries.
pub struct TwoRoundSearcher {
    space: Space,
    lambdas: Vec<Elem>,
    plan: Vec<Subspace>,
    support: Vec<usize>,
}

impl TwoRoundSearcher {
    pub fn new(space: &Space) -> Result<Self> {
        let plan = (0..space.n()).map(|i| space.hyperplane_from_normal(&space.unit(i))).collect::<Result<Vec<_>>>()?;
        Ok(TwoRoundSearcher {
            space: space.clone(),
            lambdas: space.field().nonzero().collect(),
            plan,
            support: Vec::new(),
        })
    }

    fn round_two_query(&self, x: usize, j: usize, k: usize) -> Result<Subspace> {
        let f = self.space.field();
        let mut a = vec![Elem::ZERO; self.space.n()];
        a[x] = self.lambdas[k];
        a[j] = f.neg(Elem::ONE);
        self.space.hyperplane_from_normal(&a)
    }
}

impl Searcher for TwoRoundSearcher {
    fn name(&self) -> String {
        "two-round".into()
    }

    fn next_move(&mut self, history: &[Entry]) -> Result<Move> {
        let n = self.space.n();
        let m = self.lambdas.len() - 1;
        if history.len() == n && self.support.is_empty() {
            self.support = (0..n).filter(|&i| history[i].answer.verdict == Verdict::No).collect();
            let Some(&x) = self.support.first() else {
                return Err(Error::InconsistentOracle);
            };
            for &j in &self.support[1..] {
                for k in 0..m {
                    let s = self.round_two_query(x, j, k)?;
                    self.plan.push(s);
                }
            }
        }
        if history.len() < self.plan.len() {
            return Ok(Move::Ask(self.plan[history.len()].clone()));
        }
        let mut u = vec![Elem::ZERO; n];
        u[self.support[0]] = Elem::ONE;
        for (t, &j) in self.support[1..].iter().enumerate() {
            let answers = &history[n + t * m..n + (t + 1) * m];
            let k = answers.iter().position(|e| e.answer.verdict == Verdict::Yes).unwrap_or(m);
            u[j] = self.lambdas[k];
        }
        Ok(Move::Announce(self.space.normalize(&u)?))
    }
}

/// Seeded random strategy: hyperplanes in a random order, skipping those
/// that cannot split the current candidates, optionally mixed with point
/// queries on a random candidate.
pub struct RandomSearcher {
    space: Space,
    seed: u64,
    point_permille: u32,
    order: Vec<Subspace>,
    next: usize,
    rng: SeededRng,
    knowledge: Knowledge,
}

impl RandomSearcher {
    pub fn lines(space: &Space, seed: u64) -> Result<Self> {
        Self::mixed(space, seed, 0)
    }

    /// `point_permille` is the chance, in thousandths, of a point query at each
    /// step.
    pub fn mixed(space: &Space, seed: u64, point_permille: u32) -> Result<Self> {
        if point_permille > 1000 {
            return Err(Error::InvalidArgument(format!("point rate {point_permille} exceeds 1000")));
        }
        if space.n() < 2 {
            return Err(Error::WrongDimension { expected: 2, found: space.n() });
        }
        let mut rng = seeded_rng(seed);
        let mut order: Vec<Subspace> = space.subspaces(space.n() - 1).collect();
        order.shuffle(&mut rng);
        Ok(RandomSearcher {
            space: space.clone(),
            seed,
            point_permille,
            order,
            next: 0,
            rng,
            knowledge: Knowledge::new(space),
        })
    }
}

impl Searcher for RandomSearcher {
    fn name(&self) -> String {
        if self.point_permille == 0 {
            format!("random:{}", self.seed)
        } else {
            format!("random-mixed:{}:{}", self.seed, self.point_permille)
        }
    }

    fn next_move(&mut self, history: &[Entry]) -> Result<Move> {
        self.knowledge.sync(&self.space, history);
        let count = self.knowledge.count();
        match count {
            0 => return Err(Error::InconsistentOracle),
            1 => {
                let p = self.knowledge.first().expect("one candidate");
                return Ok(Move::Announce(self.space.point_at(p)));
            }
            _ => {}
        }
        let want_point = self.point_permille > 0 && self.rng.gen_range(0..1000) < self.point_permille;
        if !want_point {
            while self.next < self.order.len() {
                let h = &self.order[self.next];
                self.next += 1;
                let inside = self.space.count_inside(self.knowledge.candidates(), h);
                if inside > 0 && inside < count {
                    return Ok(Move::Ask(h.clone()));
                }
            }
        }
        let pick = self.rng.gen_range(0..count);
        let p = self.knowledge.candidates().ones().nth(pick).expect("pick below count");
        Ok(Move::Ask(Subspace::from_point(&self.space.point_at(p))))
    }
}
