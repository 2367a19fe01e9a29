use num_bigint::{BigInt, BigUint};

use crate::error::{Error, Result};
use crate::gaussian::gaussian_binomial;
use crate::space::{Point, Space};

/// Number of `(n-2)`-subspaces whose pencil of hyperplanes fails to separate
/// a fixed pair of distinct points:
/// `(q-1)[n-1, n-3]_q - (q-2)[n-2, n-4]_q`.
pub fn claim_count_formula(n: usize, q: u64) -> Result<BigUint> {
    if n < 3 {
        return Err(Error::InvalidArgument("pair count needs n >= 3".into()));
    }
    let n = n as i64;
    let a = BigInt::from(q - 1) * BigInt::from(gaussian_binomial(n - 1, n - 3, q));
    let b = BigInt::from(q as i64 - 2) * BigInt::from(gaussian_binomial(n - 2, n - 4, q));
    (a - b).to_biguint().ok_or_else(|| Error::InternalInconsistency("negative subspace count".into()))
}

/// Counts, by enumerating every `(n-2)`-subspace, those whose pencil leaves
/// `u` and `v` unseparated.
pub fn claim_count_bruteforce(space: &Space, u: &Point, v: &Point, cap: u64) -> Result<u64> {
    let n = space.n();
    if n < 3 {
        return Err(Error::InvalidArgument("pair count needs n >= 3".into()));
    }
    if u == v {
        return Err(Error::InvalidArgument("points must differ".into()));
    }
    space.check_cap(cap)?;
    let mut count = 0;
    for axis in space.subspaces(n - 2) {
        let mut separated = false;
        for h in space.hyperplanes_through(&axis)? {
            if space.contains(&h, u)? != space.contains(&h, v)? {
                separated = true;
                break;
            }
        }
        if !separated {
            count += 1;
        }
    }
    Ok(count)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairCount {
    pub u: usize,
    pub v: usize,
    pub count: u64,
}

/// Brute-force count for every pair of point indices `u < v`, one pencil
/// evaluation per `(n-2)`-subspace.
pub fn claim_counts_all_pairs(space: &Space, cap: u64) -> Result<Vec<PairCount>> {
    let n = space.n();
    if n < 3 {
        return Err(Error::InvalidArgument("pair count needs n >= 3".into()));
    }
    let np = space.check_cap(cap)?;
    if np > 5_000 {
        return Err(Error::TooLarge { count: np as u64, cap: 5_000 });
    }
    let pair_slot = |u: usize, v: usize| u * np - u * (u + 1) / 2 + (v - u - 1);
    let mut counts = vec![0u64; np * (np - 1) / 2];
    const INSIDE: usize = usize::MAX;
    let mut label = vec![0usize; np];
    for axis in space.subspaces(n - 2) {
        // Pencil members cover every point; points of the axis lie in all of them.
        for (h_idx, h) in space.hyperplanes_through(&axis)?.iter().enumerate() {
            for i in space.point_indices(h) {
                label[i] = h_idx;
            }
        }
        for i in space.point_indices(&axis) {
            label[i] = INSIDE;
        }
        for u in 0..np {
            for v in u + 1..np {
                if label[u] == label[v] {
                    counts[pair_slot(u, v)] += 1;
                }
            }
        }
    }
    let mut out = Vec::with_capacity(counts.len());
    for u in 0..np {
        for v in u + 1..np {
            out.push(PairCount { u, v, count: counts[pair_slot(u, v)] });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::DEFAULT_POINT_CAP;

    fn space(n: usize, q: u64) -> Space {
        Space::new(Field::new(q).unwrap(), n).unwrap()
    }

    #[test]
    fn formula_values() {
        assert_eq!(claim_count_formula(4, 2).unwrap(), BigUint::from(7u32));
        assert_eq!(claim_count_formula(4, 3).unwrap(), BigUint::from(25u32));
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            assert_eq!(claim_count_formula(3, q).unwrap(), BigUint::from(q - 1));
        }
        assert!(claim_count_formula(2, 3).is_err());
    }

    #[test]
    fn bruteforce_examples() {
        let s = space(4, 2);
        let e1 = s.normalize(&s.unit(0)).unwrap();
        let e2 = s.normalize(&s.unit(1)).unwrap();
        assert_eq!(claim_count_bruteforce(&s, &e1, &e2, DEFAULT_POINT_CAP).unwrap(), 7);

        let s = space(3, 3);
        assert_eq!(claim_count_bruteforce(&s, &s.point_at(0), &s.point_at(7), DEFAULT_POINT_CAP).unwrap(), 2);

        let s = space(4, 3);
        let e1 = s.normalize(&s.unit(0)).unwrap();
        let mut w = s.unit(0);
        w[1] = crate::Elem::ONE;
        let e12 = s.normalize(&w).unwrap();
        assert_eq!(claim_count_bruteforce(&s, &e1, &e12, DEFAULT_POINT_CAP).unwrap(), 25);
        assert!(claim_count_bruteforce(&s, &e1, &e1, DEFAULT_POINT_CAP).is_err());
    }

    #[test]
    fn all_pairs_agrees_with_single_pair() {
        let s = space(4, 2);
        let all = claim_counts_all_pairs(&s, DEFAULT_POINT_CAP).unwrap();
        for pc in all.iter().step_by(11) {
            let single = claim_count_bruteforce(&s, &s.point_at(pc.u), &s.point_at(pc.v), DEFAULT_POINT_CAP).unwrap();
            assert_eq!(pc.count, single);
        }
    }
}
