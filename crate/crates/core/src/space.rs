//! Vectors, projective points and canonical subspaces of GF(q)^n.
//!
//! Every subspace is stored as its reduced row echelon basis, so equal
//! subspaces compare equal element by element. Points are indexed by their
//! position in the lexicographic order of normalized coordinate vectors.

use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, Field};

pub type Vector = Vec<Elem>;

/// Canonical representative of a 1-subspace: first nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<Elem>);

impl Point {
    pub fn coords(&self) -> &[Elem] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Coordinate indices, handy for printing and JSON.
    pub fn to_indices(&self) -> Vec<usize> {
        self.0.iter().map(|e| e.idx()).collect()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A subspace given by its `k x n` reduced row echelon basis, row-major.
///
/// The derived ordering compares `(n, k)` first and then the flattened basis,
/// which is the canonical order used for tie-breaking throughout.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subspace {
    n: usize,
    k: usize,
    basis: Vec<Elem>,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Subspace { n, k: 0, basis: Vec::new() }
    }

    /// The 1-subspace spanned by `p`. A normalized point is already in RREF.
    pub fn from_point(p: &Point) -> Self {
        Subspace { n: p.dim(), k: 1, basis: p.0.clone() }
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn basis(&self) -> &[Elem] {
        &self.basis
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.basis[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Elem]> {
        self.basis.chunks(self.n.max(1)).take(self.k)
    }

    /// Pivot column of each row.
    pub fn pivots(&self) -> Vec<usize> {
        self.rows().map(|r| r.iter().position(|e| !e.is_zero()).expect("RREF rows are nonzero")).collect()
    }

    /// The point this subspace is, when it has dimension 1.
    pub fn as_point(&self) -> Option<Point> {
        (self.k == 1).then(|| Point(self.basis.clone()))
    }

    pub fn is_hyperplane(&self) -> bool {
        self.n >= 1 && self.k + 1 == self.n
    }

    pub fn is_proper_nontrivial(&self) -> bool {
        self.k >= 1 && self.k < self.n
    }
}

/// Brings `rows` (each of length `n`) to reduced row echelon form in place and
/// returns the rank. Rows past the rank are left zero.
fn rref_in_place(f: &Field, rows: &mut [Vector], n: usize) -> usize {
    let mut rank = 0;
    for col in 0..n {
        let Some(pr) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pr);
        let inv = f.inv(rows[rank][col]).expect("pivot is nonzero");
        for x in rows[rank].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = f.sub(*x, f.mul(factor, y));
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// GF(q)^n together with point indexing.
#[derive(Clone, Debug)]
pub struct Space {
    field: Field,
    n: usize,
    /// q^i for i in 0..=n.
    qpow: Vec<u64>,
    num_points: u64,
}

impl Space {
    pub fn new(field: Field, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("ambient dimension must be at least 1".into()));
        }
        let q = field.q() as u64;
        let mut qpow = vec![1u64];
        for i in 0..n {
            let next = qpow[i].checked_mul(q).ok_or(Error::TooLarge { count: u64::MAX, cap: u64::MAX })?;
            qpow.push(next);
        }
        let num_points = (qpow[n] - 1) / (q - 1);
        Ok(Space { field, n, qpow, num_points })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.field.q() as u64
    }

    pub fn num_points(&self) -> u64 {
        self.num_points
    }

    /// Fails with [`Error::TooLarge`] when the point count exceeds `cap`.
    pub fn check_cap(&self, cap: u64) -> Result<usize> {
        if self.num_points > cap {
            return Err(Error::TooLarge { count: self.num_points, cap });
        }
        Ok(self.num_points as usize)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: len });
        }
        Ok(())
    }

    fn check_sub(&self, s: &Subspace) -> Result<()> {
        self.check_len(s.n)
    }

    /// Standard basis vector e_i (0-based).
    pub fn unit(&self, i: usize) -> Vector {
        let mut v = vec![Elem::ZERO; self.n];
        v[i] = Elem::ONE;
        v
    }

    /// Scales `v` so that its first nonzero coordinate is 1.
    pub fn normalize(&self, v: &[Elem]) -> Result<Point> {
        self.check_len(v.len())?;
        let lead = v.iter().find(|e| !e.is_zero()).ok_or(Error::ZeroVector)?;
        let inv = self.field.inv(*lead)?;
        Ok(Point(v.iter().map(|&x| self.field.mul(x, inv)).collect()))
    }

    /// Canonical subspace spanned by `rows`.
    pub fn rref_span<R: AsRef<[Elem]>>(&self, rows: &[R]) -> Result<Subspace> {
        let mut m: Vec<Vector> = Vec::with_capacity(rows.len());
        for r in rows {
            self.check_len(r.as_ref().len())?;
            m.push(r.as_ref().to_vec());
        }
        let rank = rref_in_place(&self.field, &mut m, self.n);
        m.truncate(rank);
        Ok(Subspace { n: self.n, k: rank, basis: m.concat() })
    }

    /// Reduces `v` against the basis of `s`; zero iff `v` lies in `s`.
    fn reduce(&self, s: &Subspace, v: &mut [Elem]) {
        for (row, piv) in s.rows().zip(s.pivots()) {
            let c = v[piv];
            if c.is_zero() {
                continue;
            }
            for (x, &y) in v.iter_mut().zip(row) {
                *x = self.field.sub(*x, self.field.mul(c, y));
            }
        }
    }

    pub fn contains_vector(&self, s: &Subspace, v: &[Elem]) -> Result<bool> {
        self.check_sub(s)?;
        self.check_len(v.len())?;
        let mut w = v.to_vec();
        self.reduce(s, &mut w);
        Ok(w.iter().all(|e| e.is_zero()))
    }

    pub fn contains(&self, s: &Subspace, p: &Point) -> Result<bool> {
        self.contains_vector(s, p.coords())
    }

    /// Whether `a` is a subspace of `b`.
    pub fn is_subspace(&self, a: &Subspace, b: &Subspace) -> Result<bool> {
        for r in a.rows() {
            if !self.contains_vector(b, r)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, a: &Subspace, b: &Subspace) -> Result<Subspace> {
        self.check_sub(a)?;
        self.check_sub(b)?;
        let rows: Vec<&[Elem]> = a.rows().chain(b.rows()).collect();
        self.rref_span(&rows)
    }

    /// Orthogonal complement under the standard bilinear form.
    pub fn dual(&self, s: &Subspace) -> Result<Subspace> {
        self.check_sub(s)?;
        let pivots = s.pivots();
        let mut rows = Vec::with_capacity(self.n - s.k);
        for free in (0..self.n).filter(|c| !pivots.contains(c)) {
            let mut x = vec![Elem::ZERO; self.n];
            x[free] = Elem::ONE;
            for (row, &piv) in s.rows().zip(&pivots) {
                x[piv] = self.field.neg(row[free]);
            }
            rows.push(x);
        }
        self.rref_span(&rows)
    }

    pub fn intersect(&self, a: &Subspace, b: &Subspace) -> Result<Subspace> {
        let da = self.dual(a)?;
        let db = self.dual(b)?;
        self.dual(&self.sum(&da, &db)?)
    }

    /// Span of a collection of points.
    pub fn join(&self, points: &[&Point]) -> Result<Subspace> {
        let rows: Vec<&[Elem]> = points.iter().map(|p| p.coords()).collect();
        if rows.is_empty() {
            return Ok(Subspace::zero(self.n));
        }
        self.rref_span(&rows)
    }

    /// Hyperplane `{v : a . v = 0}` for a nonzero normal vector `a`.
    pub fn hyperplane_from_normal(&self, a: &[Elem]) -> Result<Subspace> {
        let normal = self.normalize(a)?;
        self.dual(&Subspace::from_point(&normal))
    }

    /// Position of `p` in the lexicographic order of all points.
    pub fn point_index(&self, p: &Point) -> usize {
        let c = p.coords();
        let lead = c.iter().position(|e| !e.is_zero()).expect("points are nonzero");
        let q = self.q();
        let before = (self.qpow[self.n - 1 - lead] - 1) / (q - 1);
        let tail = c[lead + 1..].iter().fold(0u64, |acc, e| acc * q + e.idx() as u64);
        (before + tail) as usize
    }

    /// Inverse of [`Space::point_index`].
    pub fn point_at(&self, mut idx: usize) -> Point {
        assert!((idx as u64) < self.num_points, "point index out of range");
        let q = self.q() as usize;
        let mut lead = self.n - 1;
        loop {
            let block = self.qpow[self.n - 1 - lead] as usize;
            if idx < block {
                break;
            }
            idx -= block;
            lead -= 1;
        }
        let mut c = vec![Elem::ZERO; self.n];
        c[lead] = Elem::ONE;
        for pos in (lead + 1..self.n).rev() {
            c[pos] = Elem::from_idx((idx % q) as u16);
            idx /= q;
        }
        Point(c)
    }

    /// All points in lexicographic order, generated lazily.
    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.num_points as usize).map(|i| self.point_at(i))
    }

    /// Indices of the points lying in `s`.
    pub fn point_indices(&self, s: &Subspace) -> Vec<usize> {
        let k = s.k;
        let q = self.q() as usize;
        let mut out = Vec::new();
        if k == 0 {
            return out;
        }
        let rows: Vec<&[Elem]> = s.rows().collect();
        // Coefficient vectors with leading coefficient 1 give each point once,
        // and the resulting vector is already normalized.
        for lead in 0..k {
            let free = k - 1 - lead;
            let total = q.pow(free as u32);
            for t in 0..total {
                let mut v = rows[lead].to_vec();
                let mut rest = t;
                for j in (lead + 1..k).rev() {
                    let c = Elem::from_idx((rest % q) as u16);
                    rest /= q;
                    if c.is_zero() {
                        continue;
                    }
                    for (x, &y) in v.iter_mut().zip(rows[j]) {
                        *x = self.field.add(*x, self.field.mul(c, y));
                    }
                }
                out.push(self.point_index(&Point(v)));
            }
        }
        out.sort_unstable();
        out
    }

    /// Membership bitset of `s` over all point indices.
    pub fn point_set(&self, s: &Subspace) -> FixedBitSet {
        let mut bits = FixedBitSet::with_capacity(self.num_points as usize);
        for i in self.point_indices(s) {
            bits.insert(i);
        }
        bits
    }

    /// Number of points in a `k`-dimensional subspace.
    fn points_in_dim(&self, k: usize) -> u64 {
        (self.qpow[k] - 1) / (self.q() - 1)
    }

    /// Keeps the points of `bits` that lie in `s` (`inside = true`) or outside
    /// it. Cost follows the smaller of `|bits|` and the size of `s`.
    pub fn restrict(&self, bits: &mut FixedBitSet, s: &Subspace, inside: bool) {
        let live = bits.count_ones(..) as u64;
        if self.points_in_dim(s.k) * s.k as u64 <= live * (self.n - s.k) as u64 {
            let set = self.point_set(s);
            if inside {
                bits.intersect_with(&set);
            } else {
                bits.difference_with(&set);
            }
            return;
        }
        let normals = self.dual(s).expect("same ambient space");
        let drop: Vec<usize> = bits
            .ones()
            .filter(|&i| {
                let p = self.point_at(i);
                let member = normals.rows().all(|a| {
                    a.iter()
                        .zip(p.coords())
                        .fold(Elem::ZERO, |acc, (&x, &y)| self.field.add(acc, self.field.mul(x, y)))
                        .is_zero()
                });
                member != inside
            })
            .collect();
        for i in drop {
            bits.set(i, false);
        }
    }

    /// Number of points of `bits` lying in `s`.
    pub fn count_inside(&self, bits: &FixedBitSet, s: &Subspace) -> usize {
        let mut b = bits.clone();
        self.restrict(&mut b, s, true);
        b.count_ones(..)
    }

    /// All `k`-dimensional subspaces, generated lazily in a fixed order.
    pub fn subspaces(&self, k: usize) -> SubspaceIter<'_> {
        SubspaceIter::new(self, k)
    }

    /// Standard basis vectors completing `w` to the whole space.
    pub fn complement(&self, w: &Subspace) -> Vec<Vector> {
        let pivots = w.pivots();
        (0..self.n).filter(|c| !pivots.contains(c)).map(|c| self.unit(c)).collect()
    }

    /// The `q + 1` subspaces `H` with `u < H < w` and `dim H = dim w - 1`,
    /// where `dim u = dim w - 2`. Sorted in canonical order.
    pub fn pencil(&self, w: &Subspace, u: &Subspace) -> Result<Vec<Subspace>> {
        self.check_sub(w)?;
        self.check_sub(u)?;
        if w.k < 2 || u.k + 2 != w.k {
            return Err(Error::WrongDimension { expected: w.k.saturating_sub(2), found: u.k });
        }
        if !self.is_subspace(u, w)? {
            return Err(Error::InvalidArgument("pencil axis is not contained in the ambient subspace".into()));
        }
        // Two rows of w independent modulo u.
        let mut acc = u.clone();
        let mut extra: Vec<Vector> = Vec::with_capacity(2);
        for r in w.rows() {
            if extra.len() == 2 {
                break;
            }
            if !self.contains_vector(&acc, r)? {
                extra.push(r.to_vec());
                let rows: Vec<&[Elem]> = acc.rows().chain(std::iter::once(r)).collect();
                acc = self.rref_span(&rows)?;
            }
        }
        let (a, b) = (&extra[0], &extra[1]);
        let mut directions: Vec<Vector> = vec![b.clone()];
        for lam in self.field.elements() {
            directions.push(a.iter().zip(b).map(|(&x, &y)| self.field.add(x, self.field.mul(lam, y))).collect());
        }
        let mut out = Vec::with_capacity(directions.len());
        for d in directions {
            let rows: Vec<&[Elem]> = u.rows().chain(std::iter::once(d.as_slice())).collect();
            out.push(self.rref_span(&rows)?);
        }
        out.sort();
        Ok(out)
    }

    /// The `q + 1` hyperplanes through an `(n-2)`-subspace.
    pub fn hyperplanes_through(&self, u: &Subspace) -> Result<Vec<Subspace>> {
        self.check_sub(u)?;
        if self.n < 2 || u.k + 2 != self.n {
            return Err(Error::WrongDimension { expected: self.n.saturating_sub(2), found: u.k });
        }
        self.pencil(&self.full(), u)
    }

    pub fn full(&self) -> Subspace {
        let rows: Vec<Vector> = (0..self.n).map(|i| self.unit(i)).collect();
        Subspace { n: self.n, k: self.n, basis: rows.concat() }
    }

    /// Extends a hyperplane `a` of `w` to a hyperplane `a'` of the whole space
    /// with `a' ∩ w = a`.
    pub fn lift_hyperplane(&self, w: &Subspace, a: &Subspace) -> Result<Subspace> {
        if a.k + 1 != w.k {
            return Err(Error::WrongDimension { expected: w.k - 1, found: a.k });
        }
        let comp = self.complement(w);
        let rows: Vec<&[Elem]> = a.rows().chain(comp.iter().map(|v| v.as_slice())).collect();
        self.rref_span(&rows)
    }

    /// Subspace spanned by the last `d` basis rows of `w`.
    pub fn tail_subspace(&self, w: &Subspace, d: usize) -> Subspace {
        let rows: Vec<&[Elem]> = w.rows().skip(w.k - d).collect();
        // Trailing rows of an RREF basis are themselves in RREF.
        Subspace { n: self.n, k: d, basis: rows.concat() }
    }
}

/// Streaming enumeration of the `k`-subspaces of a [`Space`]: pivot sets in
/// lexicographic order, then free entries as an odometer.
pub struct SubspaceIter<'a> {
    space: &'a Space,
    k: usize,
    pivots: Option<Vec<usize>>,
    free: Vec<(usize, usize)>,
    digits: Vec<u16>,
    started: bool,
}

impl<'a> SubspaceIter<'a> {
    fn new(space: &'a Space, k: usize) -> Self {
        let pivots = (k <= space.n).then(|| (0..k).collect());
        let mut it = SubspaceIter { space, k, pivots, free: Vec::new(), digits: Vec::new(), started: false };
        it.reset_free();
        it
    }

    fn reset_free(&mut self) {
        self.free.clear();
        if let Some(p) = &self.pivots {
            for (r, &pc) in p.iter().enumerate() {
                for c in pc + 1..self.space.n {
                    if !p.contains(&c) {
                        self.free.push((r, c));
                    }
                }
            }
        }
        self.digits = vec![0; self.free.len()];
    }

    fn next_pivots(&mut self) {
        let n = self.space.n;
        let k = self.k;
        let Some(p) = self.pivots.as_mut() else { return };
        let mut i = k;
        while i > 0 {
            i -= 1;
            if p[i] < n - k + i {
                p[i] += 1;
                for j in i + 1..k {
                    p[j] = p[j - 1] + 1;
                }
                self.reset_free();
                return;
            }
        }
        self.pivots = None;
    }

    fn advance(&mut self) {
        let q = self.space.q() as u16;
        for d in self.digits.iter_mut().rev() {
            *d += 1;
            if *d < q {
                return;
            }
            *d = 0;
        }
        self.next_pivots();
    }

    fn current(&self) -> Option<Subspace> {
        let p = self.pivots.as_ref()?;
        let n = self.space.n;
        let mut basis = vec![Elem::ZERO; self.k * n];
        for (r, &c) in p.iter().enumerate() {
            basis[r * n + c] = Elem::ONE;
        }
        for (&(r, c), &d) in self.free.iter().zip(&self.digits) {
            basis[r * n + c] = Elem::from_idx(d);
        }
        Some(Subspace { n, k: self.k, basis })
    }
}

impl Iterator for SubspaceIter<'_> {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        if self.started {
            self.advance();
        }
        self.started = true;
        self.current()
    }
}
