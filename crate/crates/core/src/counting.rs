//! Closed-form and recurrence counts for the enumerated spaces.
//!
//! Every function is generic over the integer type so the same code runs on
//! machine words (fast, for cross-checks against enumeration) and on
//! [`crate::Count`] when values outgrow 64 bits.

use num_integer::Integer;
use num_traits::FromPrimitive;

/// Integer types usable as counters.
pub trait CountInt: Integer + Clone + FromPrimitive {}

impl<T: Integer + Clone + FromPrimitive> CountInt for T {}

fn lift<T: CountInt>(v: usize) -> T {
    T::from_usize(v).expect("counter type cannot represent a usize operand")
}

pub fn binomial<T: CountInt>(n: usize, k: usize) -> T {
    if k > n {
        return T::zero();
    }
    num_integer::binomial(lift::<T>(n), lift::<T>(k.min(n - k)))
}

/// Number of partitions of a `j`-set into exactly `n` blocks, each of size at
/// least two (associated Stirling numbers of the second kind).
///
/// Uses `b(j, n) = n * b(j-1, n) + (j-1) * b(j-2, n-1)` with `b(0, 0) = 1`.
pub fn assoc_stirling<T: CountInt>(j: usize, n: usize) -> T {
    // table[i][t] = b(i, t)
    let mut table: Vec<Vec<T>> = vec![vec![T::zero(); n + 1]; j + 1];
    table[0][0] = T::one();
    for i in 1..=j {
        for t in 0..=n {
            let mut v = lift::<T>(t) * table[i - 1][t].clone();
            if i >= 2 && t >= 1 {
                v = v + lift::<T>(i - 1) * table[i - 2][t - 1].clone();
            }
            table[i][t] = v;
        }
    }
    table[j][n].clone()
}

/// `|B_n(A)|` for `|A| = a`: choose the elements covered by non-singleton
/// blocks, then partition them.
pub fn count_b_n<T: CountInt>(a: usize, n: usize) -> T {
    (2 * n..=a).fold(T::zero(), |acc, j| {
        acc + binomial::<T>(a, j) * assoc_stirling::<T>(j, n)
    })
}

/// `|O_m(A)|`: the multinomial `a! / ((a - sum m)! * prod m_i!)`, zero when
/// the profile does not fit.
pub fn count_disjoint_tuples<T: CountInt>(a: usize, sizes: &[usize]) -> T {
    let mut remaining = a;
    let mut acc = T::one();
    for &m in sizes {
        if m > remaining {
            return T::zero();
        }
        acc = acc * binomial::<T>(remaining, m);
        remaining -= m;
    }
    acc
}

/// `|O_n(A)| = (n + 1)^a`.
pub fn count_o_n<T: CountInt>(a: usize, n: usize) -> T {
    num_traits::pow::pow(lift::<T>(n + 1), a)
}

/// `|fin(A)| = 2^a`.
pub fn count_fin<T: CountInt>(a: usize) -> T {
    num_traits::pow::pow(lift::<T>(2), a)
}

pub fn factorial<T: CountInt>(n: usize) -> T {
    (1..=n).fold(T::one(), |acc, i| acc * lift::<T>(i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Count;

    #[test]
    fn assoc_stirling_small_values() {
        assert_eq!(assoc_stirling::<u64>(4, 2), 3);
        assert_eq!(assoc_stirling::<u64>(3, 2), 0);
        assert_eq!(assoc_stirling::<u64>(5, 2), 10);
        assert_eq!(assoc_stirling::<u64>(0, 0), 1);
        assert_eq!(assoc_stirling::<u64>(3, 0), 0);
        // a single block of size >= 2
        for j in 2..10 {
            assert_eq!(assoc_stirling::<u64>(j, 1), 1);
        }
    }

    #[test]
    fn count_b_n_examples() {
        assert_eq!(count_b_n::<u64>(4, 2), 3);
        assert_eq!(count_b_n::<u64>(3, 1), 4);
        for a in 0..8 {
            assert_eq!(count_b_n::<u64>(a, 0), 1);
        }
    }

    #[test]
    fn disjoint_tuple_counts() {
        assert_eq!(count_disjoint_tuples::<u64>(4, &[1, 2]), 12);
        assert_eq!(count_disjoint_tuples::<u64>(3, &[2, 2]), 0);
        assert_eq!(count_disjoint_tuples::<u64>(7, &[]), 1);
    }

    #[test]
    fn wide_and_narrow_types_agree() {
        for a in 0..20 {
            for n in 0..4 {
                let narrow: u64 = count_b_n(a, n);
                let wide: Count = count_b_n(a, n);
                assert_eq!(Count::from(narrow), wide);
            }
        }
    }

    #[test]
    fn big_counts_do_not_overflow() {
        let c: Count = count_b_n(200, 3);
        assert!(c > Count::from(u64::MAX));
    }
}
