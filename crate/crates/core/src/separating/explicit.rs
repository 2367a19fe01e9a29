use crate::error::{Error, Result};
use crate::field::Elem;
use crate::space::Space;

use super::{Provenance, QuerySet};

/// The coordinate hyperplanes `{v_i = 0}` followed by, for each pair `i < j`,
/// the hyperplanes `{v_j = λ v_i}` for the first `q - 2` nonzero `λ` in index
/// order. Size `n + C(n,2)(q-2)`.
pub fn explicit_construction(space: &Space) -> Result<QuerySet> {
    let n = space.n();
    if n < 2 {
        return Err(Error::InvalidArgument("explicit construction needs n >= 2".into()));
    }
    let f = space.field();
    let mut queries = Vec::new();
    for i in 0..n {
        queries.push(space.hyperplane_from_normal(&space.unit(i))?);
    }
    let lambdas: Vec<Elem> = f.nonzero().take(f.order().saturating_sub(2)).collect();
    for i in 0..n {
        for j in i + 1..n {
            for &lam in &lambdas {
                let mut normal = vec![Elem::ZERO; n];
                normal[i] = lam;
                normal[j] = f.neg(Elem::ONE);
                queries.push(space.hyperplane_from_normal(&normal)?);
            }
        }
    }
    QuerySet::new(space, queries, Provenance::Explicit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::separating::is_separating;
    use crate::DEFAULT_POINT_CAP;

    fn build(n: usize, q: u64) -> (Space, QuerySet) {
        let s = Space::new(Field::new(q).unwrap(), n).unwrap();
        let qs = explicit_construction(&s).unwrap();
        (s, qs)
    }

    #[test]
    fn binary_case_is_coordinate_hyperplanes() {
        for n in 2..=6 {
            let (s, qs) = build(n, 2);
            assert_eq!(qs.len(), n);
            assert!(is_separating(&s, &qs, DEFAULT_POINT_CAP).unwrap().is_separating());
        }
    }

    #[test]
    fn sizes_and_separation() {
        let (s, qs) = build(3, 3);
        assert_eq!(qs.len(), 6);
        assert_eq!(s.num_points(), 13);
        assert!(is_separating(&s, &qs, DEFAULT_POINT_CAP).unwrap().is_separating());
        let (_, qs) = build(4, 5);
        assert_eq!(qs.len(), 22);
    }

    #[test]
    fn separating_over_grid() {
        for n in 2..=5usize {
            for q in [2u64, 3, 4, 5, 7, 8, 9] {
                let (s, qs) = build(n, q);
                if s.num_points() > 20_000 {
                    continue;
                }
                let nn = n as u64;
                assert_eq!(qs.len() as u64, nn + nn * (nn - 1) / 2 * (q - 2));
                assert!(qs.queries().iter().all(|h| h.is_hyperplane()));
                assert!(is_separating(&s, &qs, DEFAULT_POINT_CAP).unwrap().is_separating(), "n={n} q={q}");
            }
        }
    }

    #[test]
    fn pair_hyperplanes_have_the_stated_trace() {
        // {v_1 = λ v_0} meets <e_0, e_1> in span(e_0 + λ e_1).
        let (s, qs) = build(3, 5);
        let f = s.field();
        for (k, h) in qs.queries()[3..6].iter().enumerate() {
            let lam = f.elem(k + 1).unwrap();
            let mut v = s.unit(0);
            v[1] = lam;
            assert!(s.contains_vector(h, &v).unwrap());
            assert!(!s.contains_vector(h, &s.unit(0)).unwrap());
        }
    }
}
