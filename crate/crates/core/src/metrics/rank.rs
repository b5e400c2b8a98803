//! Exact rank of small integer matrices by fraction-free (Bareiss) elimination.

// Elimination loops read clearer with explicit row/column indices.
#![allow(clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Rank over the rationals of the matrix with the given rows.
///
/// Duplicate and zero rows are dropped first since they cannot change the
/// rank. Elimination runs in `i128` and restarts with big integers if an
/// intermediate minor overflows.
pub fn rational_rank(rows: &[Vec<i64>]) -> usize {
    let mut distinct: Vec<&Vec<i64>> = rows.iter().filter(|r| r.iter().any(|&x| x != 0)).collect();
    distinct.sort();
    distinct.dedup();
    if distinct.is_empty() {
        return 0;
    }
    let width = distinct[0].len();
    // Fewer rows than columns keeps the elimination short, and rank is
    // invariant under transposition.
    let matrix: Vec<Vec<i64>> = if distinct.len() > width {
        (0..width)
            .map(|c| distinct.iter().map(|r| r[c]).collect())
            .collect()
    } else {
        distinct.into_iter().cloned().collect()
    };
    let small: Vec<Vec<i128>> = matrix
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    match bareiss_i128(small) {
        Some(rank) => rank,
        None => bareiss_big(
            matrix
                .iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        ),
    }
}

fn bareiss_i128(mut a: Vec<Vec<i128>>) -> Option<usize> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut prev: i128 = 1;
    let mut rank = 0;
    for col in 0..n {
        if rank == m {
            break;
        }
        let Some(p) = (rank..m).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(p, rank);
        let pivot = a[rank][col];
        for i in rank + 1..m {
            let factor = a[i][col];
            for j in col + 1..n {
                let lhs = pivot.checked_mul(a[i][j])?;
                let rhs = factor.checked_mul(a[rank][j])?;
                a[i][j] = lhs.checked_sub(rhs)? / prev;
            }
            a[i][col] = 0;
        }
        prev = pivot;
        rank += 1;
    }
    Some(rank)
}

fn bareiss_big(mut a: Vec<Vec<BigInt>>) -> usize {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..n {
        if rank == m {
            break;
        }
        let Some(p) = (rank..m).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(p, rank);
        let pivot = a[rank][col].clone();
        for i in rank + 1..m {
            let factor = std::mem::take(&mut a[i][col]);
            for j in col + 1..n {
                let v = (&pivot * &a[i][j] - &factor * &a[rank][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        assert_eq!(rational_rank(&[]), 0);
        assert_eq!(rational_rank(&[vec![0, 0, 0]]), 0);
        assert_eq!(rational_rank(&[vec![1, 0, 0], vec![0, 0, 1]]), 2);
        assert_eq!(
            rational_rank(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, -1]]),
            2
        );
        assert_eq!(
            rational_rank(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]),
            3
        );
        // Dependent only over GF(2).
        assert_eq!(
            rational_rank(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 1]]),
            3
        );
    }

    #[test]
    fn overflow_falls_back_to_big_integers() {
        let mut rng = crate::rng::Xoshiro256StarStar::seed_from_u64(3);
        let mut rows: Vec<Vec<i64>> = (0..24)
            .map(|_| {
                (0..24)
                    .map(|_| rng.range_inclusive(-1_000_000, 1_000_000) as i64)
                    .collect()
            })
            .collect();
        // Force a dependency so the expected rank is 23.
        let dependent: Vec<i64> = rows[0]
            .iter()
            .zip(&rows[1])
            .map(|(a, b)| 3 * a - 2 * b)
            .collect();
        rows[23] = dependent;
        let small: Vec<Vec<i128>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| x as i128).collect())
            .collect();
        let big = bareiss_big(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        );
        assert!(bareiss_i128(small).is_none());
        assert_eq!(big, 23);
        assert_eq!(rational_rank(&rows), 23);
    }
}
