//! Incidence structure of the projective plane PG(2, q).
//!
//! Points and lines are addressed by index: points in lexicographic order,
//! lines in canonical subspace order.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::space::{Point, Space, Subspace};

#[derive(Clone, Debug)]
pub struct Plane {
    space: Space,
    lines: Vec<Subspace>,
    line_sets: Vec<FixedBitSet>,
    line_points: Vec<Vec<usize>>,
    lines_through: Vec<Vec<usize>>,
    line_index: HashMap<Subspace, usize>,
}

impl Plane {
    pub fn new(field: Field) -> Result<Self> {
        Self::from_space(Space::new(field, 3)?)
    }

    pub fn from_space(space: Space) -> Result<Self> {
        if space.n() != 3 {
            return Err(Error::DimensionMismatch { expected: 3, found: space.n() });
        }
        let mut lines: Vec<Subspace> = space.subspaces(2).collect();
        lines.sort();
        let np = space.num_points() as usize;
        let mut line_sets = Vec::with_capacity(lines.len());
        let mut line_points = Vec::with_capacity(lines.len());
        let mut lines_through = vec![Vec::new(); np];
        for (li, l) in lines.iter().enumerate() {
            let pts = space.point_indices(l);
            let mut bits = FixedBitSet::with_capacity(np);
            for &p in &pts {
                bits.insert(p);
                lines_through[p].push(li);
            }
            line_sets.push(bits);
            line_points.push(pts);
        }
        let line_index = lines.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        Ok(Plane { space, lines, line_sets, line_points, lines_through, line_index })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn q(&self) -> u64 {
        self.space.q()
    }

    pub fn num_points(&self) -> usize {
        self.space.num_points() as usize
    }

    pub fn num_lines(&self) -> usize {
        self.lines.len()
    }

    pub fn line(&self, i: usize) -> &Subspace {
        &self.lines[i]
    }

    pub fn lines(&self) -> &[Subspace] {
        &self.lines
    }

    pub fn line_set(&self, i: usize) -> &FixedBitSet {
        &self.line_sets[i]
    }

    pub fn line_points(&self, i: usize) -> &[usize] {
        &self.line_points[i]
    }

    /// Lines through point `p`, in canonical order.
    pub fn lines_through(&self, p: usize) -> &[usize] {
        &self.lines_through[p]
    }

    pub fn line_index(&self, l: &Subspace) -> Option<usize> {
        self.line_index.get(l).copied()
    }

    pub fn point(&self, i: usize) -> Point {
        self.space.point_at(i)
    }

    pub fn point_index(&self, p: &Point) -> usize {
        self.space.point_index(p)
    }

    pub fn incident(&self, p: usize, l: usize) -> bool {
        self.line_sets[l].contains(p)
    }

    /// The unique line through two distinct points.
    pub fn line_through(&self, a: usize, b: usize) -> usize {
        debug_assert_ne!(a, b);
        *self.lines_through[a].iter().find(|&&l| self.line_sets[l].contains(b)).expect("two points span a line")
    }

    /// Points not on any of the given lines.
    pub fn uncovered(&self, lines: &[usize]) -> FixedBitSet {
        let mut covered = FixedBitSet::with_capacity(self.num_points());
        for &l in lines {
            covered.union_with(&self.line_sets[l]);
        }
        covered.toggle_range(..);
        covered
    }

    /// A line `l` such that `lines ∪ {l}` covers the plane, if one exists;
    /// the first such line in canonical order.
    pub fn cover_extension(&self, lines: &[usize]) -> Option<usize> {
        let open = self.uncovered(lines);
        let mut it = open.ones();
        let Some(a) = it.next() else {
            return Some(0);
        };
        let Some(b) = it.next() else {
            return Some(self.lines_through[a][0]);
        };
        let l = self.line_through(a, b);
        open.is_subset(&self.line_sets[l]).then_some(l)
    }
}

/// Whether the points missed by `lines` all lie on one line; returns the first
/// completing line in canonical order.
pub fn cover_extension_check(plane: &Plane, lines: &[Subspace]) -> Result<Option<Subspace>> {
    let idx = lines
        .iter()
        .map(|l| plane.line_index(l).ok_or(Error::WrongDimension { expected: 2, found: l.dim() }))
        .collect::<Result<Vec<_>>>()?;
    Ok(plane.cover_extension(&idx).map(|l| plane.line(l).clone()))
}
