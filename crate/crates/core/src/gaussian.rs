use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// Number of `k`-dimensional subspaces of GF(q)^n.
///
/// Evaluated exactly. Returns 0 when `k < 0` or `k > n`.
pub fn gaussian_binomial(n: i64, k: i64, q: u64) -> BigUint {
    if k < 0 || n < 0 || k > n {
        return BigUint::zero();
    }
    let q = BigUint::from(q);
    let mut acc = BigUint::one();
    // [n, j] = [n, j-1] * (q^(n-j+1) - 1) / (q^j - 1), exact at every step.
    for j in 1..=k {
        let num = q.pow((n - j + 1) as u32) - 1u32;
        let den = q.pow(j as u32) - 1u32;
        acc = acc * num / den;
    }
    acc
}

/// [`gaussian_binomial`] narrowed to `u64`, or `None` on overflow.
pub fn gaussian_binomial_u64(n: i64, k: i64, q: u64) -> Option<u64> {
    gaussian_binomial(n, k, q).to_u64()
}

/// `(q^n - 1) / (q - 1)`: the number of projective points of GF(q)^n.
pub fn point_count(n: usize, q: u64) -> BigUint {
    gaussian_binomial(n as i64, 1, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(n: i64, k: i64, q: u64) -> u64 {
        gaussian_binomial_u64(n, k, q).unwrap()
    }

    /// Direct product formula with all factors multiplied before dividing.
    fn product_formula(n: u32, k: u32, q: u64) -> BigUint {
        let q = BigUint::from(q);
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for i in 0..k {
            num *= q.pow(n - i) - 1u32;
            den *= q.pow(i + 1) - 1u32;
        }
        num / den
    }

    #[test]
    fn examples() {
        assert_eq!(g(5, 0, 7), 1);
        assert_eq!(g(4, 2, 2), 35);
        assert_eq!(g(3, 1, 3), 13);
        assert_eq!(g(3, 2, 2), 7);
        assert_eq!(g(2, 0, 3), 1);
        assert_eq!(g(1, -1, 3), 0);
        assert_eq!(g(2, 3, 3), 0);
    }

    #[test]
    fn large_values_are_exact() {
        let v = gaussian_binomial(40, 20, 1024);
        assert_eq!(v, product_formula(40, 20, 1024));
        assert!(v.bits() > 2000);
    }

    proptest! {
        #[test]
        fn duality(n in 0i64..12, k in 0i64..12, q in prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9, 16])) {
            prop_assume!(k <= n);
            prop_assert_eq!(gaussian_binomial(n, k, q), gaussian_binomial(n, n - k, q));
            prop_assert_eq!(gaussian_binomial(n, k, q), product_formula(n as u32, k as u32, q));
        }

        #[test]
        fn pascal_rule(n in 1i64..10, k in 1i64..10, q in 2u64..10) {
            // [n, k] = [n-1, k-1] + q^k [n-1, k]
            prop_assume!(k <= n);
            let lhs = gaussian_binomial(n, k, q);
            let rhs = gaussian_binomial(n - 1, k - 1, q)
                + BigUint::from(q).pow(k as u32) * gaussian_binomial(n - 1, k, q);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
