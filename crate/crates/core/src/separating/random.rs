use rand::Rng;

use crate::error::{Error, Result};
use crate::field::Elem;
use crate::rng::{seeded_rng, SeededRng};
use crate::space::{Space, Subspace};

use super::{is_separating, Provenance, QuerySet};

pub const DEFAULT_MAX_RETRIES: usize = 64;

/// One sampled `(n-2)`-subspace and the `q` hyperplanes kept from its pencil.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomBundle {
    pub axis: Subspace,
    pub hyperplanes: Vec<Subspace>,
}

#[derive(Clone, Debug)]
pub struct RandomConstruction {
    pub set: QuerySet,
    pub bundles: Vec<RandomBundle>,
    /// Number of full samples drawn, including the successful one.
    pub attempts: usize,
}

/// Uniform `d`-subspace: uniform `d x n` matrices, redrawn until full rank.
pub(crate) fn sample_subspace(space: &Space, d: usize, rng: &mut SeededRng) -> Result<Subspace> {
    let q = space.q() as u16;
    loop {
        let rows: Vec<Vec<Elem>> =
            (0..d).map(|_| (0..space.n()).map(|_| Elem::from_idx(rng.gen_range(0..q))).collect()).collect();
        let s = space.rref_span(&rows)?;
        if s.dim() == d {
            return Ok(s);
        }
    }
}

fn sample_bundles(space: &Space, l: usize, rng: &mut SeededRng) -> Result<Vec<RandomBundle>> {
    let n = space.n();
    (0..l)
        .map(|_| {
            let axis = sample_subspace(space, n - 2, rng)?;
            let mut hyperplanes = space.hyperplanes_through(&axis)?;
            hyperplanes.pop();
            Ok(RandomBundle { axis, hyperplanes })
        })
        .collect()
}

/// Samples `2n` uniform `(n-2)`-subspaces, queries `q` hyperplanes through
/// each and resamples until the family separates, at most `max_retries` times.
pub fn random_construction(space: &Space, seed: u64, max_retries: usize, cap: u64) -> Result<RandomConstruction> {
    let n = space.n();
    if n < 3 {
        return Err(Error::InvalidArgument("random construction needs n >= 3".into()));
    }
    space.check_cap(cap)?;
    let l = 2 * n;
    let mut rng = seeded_rng(seed);
    for attempt in 1..=max_retries {
        let bundles = sample_bundles(space, l, &mut rng)?;
        let mut queries: Vec<Subspace> = Vec::with_capacity(l * space.q() as usize);
        for h in bundles.iter().flat_map(|b| &b.hyperplanes) {
            if !queries.contains(h) {
                queries.push(h.clone());
            }
        }
        let set = QuerySet::new(space, queries, Provenance::Random { seed, l })?;
        if is_separating(space, &set, cap)?.is_separating() {
            return Ok(RandomConstruction { set, bundles, attempts: attempt });
        }
        log::debug!("random construction seed {seed}: attempt {attempt} not separating");
    }
    Err(Error::RetriesExhausted(max_retries))
}
