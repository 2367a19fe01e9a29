//! Non-adaptive search: separating systems of subspaces.
//!
//! A family of subspaces separates the projective points when no two points
//! have the same membership pattern (signature) across the family.

mod claim;
mod explicit;
pub mod format;
mod lines;
mod minimum;
mod random;

use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{Point, Space, Subspace};

pub use claim::{claim_count_bruteforce, claim_count_formula, claim_counts_all_pairs, PairCount};
pub use explicit::explicit_construction;
pub use lines::{minimize, points_to_lines};
pub use minimum::{brute_force_minimum, CandidatePool, MinimumResult};
pub use random::{random_construction, RandomBundle, RandomConstruction, DEFAULT_MAX_RETRIES};

/// Where a query set came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Provenance {
    Explicit,
    Random { seed: u64, l: usize },
    User,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Explicit => write!(f, "explicit"),
            Provenance::Random { seed, l } => write!(f, "random(seed={seed}, l={l})"),
            Provenance::User => write!(f, "user"),
        }
    }
}

/// An ordered family of proper nontrivial subspaces of one ambient space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuerySet {
    n: usize,
    q: u64,
    queries: Vec<Subspace>,
    provenance: Provenance,
}

impl QuerySet {
    pub fn new(space: &Space, queries: Vec<Subspace>, provenance: Provenance) -> Result<Self> {
        for s in &queries {
            if s.ambient() != space.n() {
                return Err(Error::DimensionMismatch { expected: space.n(), found: s.ambient() });
            }
            if !s.is_proper_nontrivial() {
                return Err(Error::InvalidArgument(format!(
                    "query of dimension {} is not a proper nontrivial subspace",
                    s.dim()
                )));
            }
        }
        Ok(QuerySet { n: space.n(), q: space.q(), queries, provenance })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.queries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.queries.is_empty()
    }

    pub fn queries(&self) -> &[Subspace] {
        &self.queries
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn into_queries(self) -> Vec<Subspace> {
        self.queries
    }

    fn check_space(&self, space: &Space) -> Result<()> {
        if space.n() != self.n || space.q() != self.q {
            return Err(Error::DimensionMismatch { expected: self.n, found: space.n() });
        }
        Ok(())
    }
}

/// Per-point membership bit vectors, indexed by point index; bit `j` is set
/// iff the point lies in query `j`.
#[derive(Clone, Debug)]
pub struct SignatureTable {
    signatures: Vec<FixedBitSet>,
}

impl SignatureTable {
    pub fn get(&self, point: usize) -> &FixedBitSet {
        &self.signatures[point]
    }

    pub fn len(&self) -> usize {
        self.signatures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signatures.is_empty()
    }

    pub fn distinct(&self) -> usize {
        let mut sigs: Vec<&FixedBitSet> = self.signatures.iter().collect();
        sigs.sort();
        sigs.dedup();
        sigs.len()
    }
}

pub fn signatures(space: &Space, set: &QuerySet, cap: u64) -> Result<SignatureTable> {
    set.check_space(space)?;
    let np = space.check_cap(cap)?;
    let mut signatures = vec![FixedBitSet::with_capacity(set.len()); np];
    for (j, s) in set.queries.iter().enumerate() {
        for p in space.point_indices(s) {
            signatures[p].insert(j);
        }
    }
    Ok(SignatureTable { signatures })
}

/// Outcome of a separation check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Separation {
    Separating,
    /// The lexicographically first pair of points with equal signatures.
    Collision(Point, Point),
}

impl Separation {
    pub fn is_separating(&self) -> bool {
        matches!(self, Separation::Separating)
    }
}

/// Lexicographically first pair of point indices sharing a signature.
fn first_collision(table: &SignatureTable) -> Option<(usize, usize)> {
    let mut order: Vec<usize> = (0..table.len()).collect();
    order.sort_by(|&a, &b| table.signatures[a].cmp(&table.signatures[b]).then(a.cmp(&b)));
    let mut best: Option<(usize, usize)> = None;
    for w in order.windows(2) {
        if table.signatures[w[0]] == table.signatures[w[1]] {
            // Within a group indices ascend, so the first adjacent pair of a
            // group is (smallest, second smallest).
            let cand = (w[0], w[1]);
            if best.is_none_or(|b| cand < b) {
                best = Some(cand);
            }
        }
    }
    best
}

pub fn is_separating(space: &Space, set: &QuerySet, cap: u64) -> Result<Separation> {
    let table = signatures(space, set, cap)?;
    Ok(match first_collision(&table) {
        None => Separation::Separating,
        Some((a, b)) => Separation::Collision(space.point_at(a), space.point_at(b)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::plane::Plane;
    use crate::DEFAULT_POINT_CAP;

    fn fano() -> Plane {
        Plane::new(Field::new(2).unwrap()).unwrap()
    }

    fn triangle(p: &Plane) -> Vec<Subspace> {
        let s = p.space();
        let e: Vec<usize> = (0..3).map(|i| s.point_index(&s.normalize(&s.unit(i)).unwrap())).collect();
        vec![
            p.line(p.line_through(e[0], e[1])).clone(),
            p.line(p.line_through(e[1], e[2])).clone(),
            p.line(p.line_through(e[0], e[2])).clone(),
        ]
    }

    #[test]
    fn fano_triangle_signatures() {
        let p = fano();
        let qs = QuerySet::new(p.space(), triangle(&p), Provenance::User).unwrap();
        let t = signatures(p.space(), &qs, DEFAULT_POINT_CAP).unwrap();
        assert_eq!(t.distinct(), 7);
        // Vertices lie on two sides, one point on none.
        let weights: Vec<usize> = (0..7).map(|i| t.get(i).count_ones(..)).collect();
        assert_eq!(weights.iter().filter(|&&w| w == 2).count(), 3);
        assert_eq!(weights.iter().filter(|&&w| w == 0).count(), 1);
        assert!(is_separating(p.space(), &qs, DEFAULT_POINT_CAP).unwrap().is_separating());
    }

    #[test]
    fn single_and_empty_sets() {
        let p = fano();
        let one = QuerySet::new(p.space(), vec![p.line(0).clone()], Provenance::User).unwrap();
        assert_eq!(signatures(p.space(), &one, DEFAULT_POINT_CAP).unwrap().distinct(), 2);
        let none = QuerySet::new(p.space(), vec![], Provenance::User).unwrap();
        assert_eq!(signatures(p.space(), &none, DEFAULT_POINT_CAP).unwrap().distinct(), 1);
        assert_eq!(
            is_separating(p.space(), &none, DEFAULT_POINT_CAP).unwrap(),
            Separation::Collision(p.point(0), p.point(1))
        );
    }

    #[test]
    fn two_lines_never_separate_fano() {
        let p = fano();
        for a in 0..7 {
            for b in a + 1..7 {
                let qs =
                    QuerySet::new(p.space(), vec![p.line(a).clone(), p.line(b).clone()], Provenance::User).unwrap();
                match is_separating(p.space(), &qs, DEFAULT_POINT_CAP).unwrap() {
                    Separation::Collision(u, v) => {
                        assert!(u < v);
                        for l in qs.queries() {
                            assert_eq!(p.space().contains(l, &u).unwrap(), p.space().contains(l, &v).unwrap());
                        }
                    }
                    Separation::Separating => panic!("two lines cannot separate 7 points"),
                }
            }
        }
    }

    #[test]
    fn collision_is_lexicographically_first() {
        let p = Plane::new(Field::new(3).unwrap()).unwrap();
        let qs = QuerySet::new(p.space(), vec![p.line(5).clone(), p.line(9).clone()], Provenance::User).unwrap();
        let Separation::Collision(u, v) = is_separating(p.space(), &qs, DEFAULT_POINT_CAP).unwrap() else { panic!() };
        let sig = |x: &Point| -> Vec<bool> { qs.queries().iter().map(|l| p.space().contains(l, x).unwrap()).collect() };
        let pts: Vec<Point> = p.space().points().collect();
        let mut expect = None;
        'outer: for (i, a) in pts.iter().enumerate() {
            for b in &pts[i + 1..] {
                if sig(a) == sig(b) {
                    expect = Some((a.clone(), b.clone()));
                    break 'outer;
                }
            }
        }
        assert_eq!(Some((u, v)), expect);
    }

    #[test]
    fn rejects_bad_queries() {
        let p = fano();
        assert!(QuerySet::new(p.space(), vec![p.space().full()], Provenance::User).is_err());
        assert!(QuerySet::new(p.space(), vec![Subspace::zero(3)], Provenance::User).is_err());
        let qs = QuerySet::new(p.space(), vec![], Provenance::User).unwrap();
        assert!(matches!(signatures(p.space(), &qs, 3), Err(Error::TooLarge { .. })));
    }
}
