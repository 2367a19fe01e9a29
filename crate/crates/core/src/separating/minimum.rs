use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{Space, Subspace};

use super::{Provenance, QuerySet};

/// Which subspaces the exact search may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidatePool {
    Hyperplanes,
    AllProper,
}

#[derive(Clone, Debug)]
pub struct MinimumResult {
    pub size: usize,
    pub witness: QuerySet,
    /// Search nodes visited across all sizes.
    pub nodes: u64,
}

/// Largest point count the bitmask search supports.
pub const MAX_POINTS: u64 = 128;

struct Search<'a> {
    masks: &'a [u128],
    points: u32,
}

impl Search<'_> {
    /// Depth-first over increasing candidate indices. `open` holds the classes
    /// of the current partition that still have two or more points.
    fn dfs(
        &self,
        start: usize,
        open: &[u128],
        classes: u32,
        remaining: usize,
        chosen: &mut Vec<usize>,
        nodes: &mut u64,
    ) -> bool {
        *nodes += 1;
        if open.is_empty() {
            return true;
        }
        if remaining == 0 {
            return false;
        }
        let cap = 1u128 << remaining.min(127);
        if (classes as u128) * cap < self.points as u128 {
            return false;
        }
        if open.iter().any(|c| c.count_ones() as u128 > cap) {
            return false;
        }
        let m = self.masks.len();
        for c in start..m.saturating_sub(remaining - 1) {
            let mask = self.masks[c];
            let mut next = Vec::with_capacity(open.len() + 1);
            let mut gained = 0;
            for &cls in open {
                let (a, b) = (cls & mask, cls & !mask);
                if a != 0 && b != 0 {
                    gained += 1;
                }
                for part in [a, b] {
                    if part.count_ones() >= 2 {
                        next.push(part);
                    }
                }
            }
            // A query that splits nothing would be redundant in the final
            // family, and smaller sizes were already ruled out.
            if gained == 0 {
                continue;
            }
            chosen.push(c);
            if self.dfs(c + 1, &next, classes + gained, remaining - 1, chosen, nodes) {
                return true;
            }
            chosen.pop();
        }
        false
    }
}

/// Exact minimum size of a separating family drawn from `pool`, searched in
/// order of increasing size; the witness is the lexicographically first
/// family of that size in canonical candidate order.
pub fn brute_force_minimum(space: &Space, max_size: usize, pool: CandidatePool) -> Result<MinimumResult> {
    let np = space.check_cap(MAX_POINTS)?;
    let n = space.n();
    let mut cands: Vec<Subspace> = match pool {
        CandidatePool::Hyperplanes => space.subspaces(n - 1).collect(),
        CandidatePool::AllProper => (1..n).flat_map(|k| space.subspaces(k).collect::<Vec<_>>()).collect(),
    };
    cands.sort();
    let masks: Vec<u128> =
        cands.iter().map(|s| space.point_indices(s).iter().fold(0u128, |acc, &i| acc | (1u128 << i))).collect();
    let all: u128 = if np == 128 { u128::MAX } else { (1u128 << np) - 1 };
    let search = Search { masks: &masks, points: np as u32 };
    let lower = (np as f64).log2().ceil() as usize;
    let mut nodes = 0u64;
    if np <= 1 {
        let witness = QuerySet::new(space, vec![], Provenance::User)?;
        return Ok(MinimumResult { size: 0, witness, nodes });
    }
    for size in lower.max(1)..=max_size.min(cands.len()) {
        let found = (0..cands.len()).into_par_iter().map(|first| {
            let mut chosen = vec![first];
            let mut local = 0u64;
            let mask = masks[first];
            let open: Vec<u128> = [all & mask, all & !mask].into_iter().filter(|c| c.count_ones() >= 2).collect();
            let classes = [all & mask, all & !mask].iter().filter(|c| **c != 0).count() as u32;
            let ok = classes == 2 && search.dfs(first + 1, &open, classes, size - 1, &mut chosen, &mut local);
            (ok.then_some(chosen), local)
        });
        // Collect in index order so the witness and node count do not depend
        // on scheduling.
        let results: Vec<(Option<Vec<usize>>, u64)> = found.collect();
        let mut witness = None;
        for (hit, local) in results {
            nodes += local;
            if witness.is_none() {
                witness = hit;
            }
        }
        if let Some(idx) = witness {
            let qs = idx.into_iter().map(|i| cands[i].clone()).collect();
            return Ok(MinimumResult { size, witness: QuerySet::new(space, qs, Provenance::User)?, nodes });
        }
    }
    Err(Error::Exhausted(max_size))
}
