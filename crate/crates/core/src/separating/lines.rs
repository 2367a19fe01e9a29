use crate::error::{Error, Result};
use crate::space::{Space, Subspace};

use super::{is_separating, signatures, QuerySet};

/// Drops redundant queries, scanning from the last inserted to the first, so
/// that the result is a minimal separating subfamily.
pub fn minimize(space: &Space, set: &QuerySet, cap: u64) -> Result<QuerySet> {
    if !is_separating(space, set, cap)?.is_separating() {
        return Err(Error::NotSeparating);
    }
    let mut keep: Vec<Subspace> = set.queries().to_vec();
    for i in (0..keep.len()).rev() {
        let mut trial = keep.clone();
        trial.remove(i);
        let cand = QuerySet::new(space, trial, set.provenance().clone())?;
        if is_separating(space, &cand, cap)?.is_separating() {
            keep = cand.into_queries();
        }
    }
    QuerySet::new(space, keep, set.provenance().clone())
}

/// Turns a separating family of points and lines of a projective plane into
/// one made of lines only.
///
/// The family is first reduced to a minimal one. Each point query `P` is then
/// replaced by the first line through `P` that misses the unique point `Q`
/// which the other queries fail to distinguish from `P`.
pub fn points_to_lines(space: &Space, set: &QuerySet, cap: u64) -> Result<QuerySet> {
    if space.n() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: space.n() });
    }
    let mut queries = minimize(space, set, cap)?.into_queries();
    while let Some(pos) = queries.iter().position(|s| s.dim() == 1) {
        let p = queries[pos].as_point().expect("dimension 1");
        let pi = space.point_index(&p);
        let mut rest = queries.clone();
        rest.remove(pos);
        let table = signatures(space, &QuerySet::new(space, rest, set.provenance().clone())?, cap)?;
        let partners: Vec<usize> = (0..table.len()).filter(|&j| j != pi && table.get(j) == table.get(pi)).collect();
        if partners.len() > 1 {
            return Err(Error::UniquenessViolation(partners.len()));
        }
        let through = space.hyperplanes_through(&Subspace::from_point(&p))?;
        let line = match partners.first() {
            // The point is redundant after earlier replacements; any line
            // through it keeps the family separating.
            None => through[0].clone(),
            Some(&qi) => {
                let q = space.point_at(qi);
                through
                    .into_iter()
                    .find(|l| !space.contains(l, &q).unwrap_or(true))
                    .ok_or_else(|| Error::InternalInconsistency("every line through P contains Q".into()))?
            }
        };
        queries[pos] = line;
    }
    let out = QuerySet::new(space, queries, set.provenance().clone())?;
    if !is_separating(space, &out, cap)?.is_separating() {
        return Err(Error::InternalInconsistency("line replacement broke separation".into()));
    }
    Ok(out)
}
