//! Reference implementations kept independent of the production paths,
//! for use as test oracles only.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Rank by textbook Gaussian elimination over exact rationals, without any
/// row deduplication or overflow fast path.
pub fn rational_rank_gauss(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect()
        })
        .collect();
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..m).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(p, rank);
        let inv = BigRational::one() / a[rank][col].clone();
        let pivot_row: Vec<BigRational> = a[rank].iter().map(|x| x * &inv).collect();
        for (i, row) in a.iter_mut().enumerate() {
            if i == rank || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= &f * p;
            }
        }
        a[rank] = pivot_row;
        rank += 1;
        if rank == m {
            break;
        }
    }
    rank
}

/// Rank of a binary spike window, via [`rational_rank_gauss`].
pub fn raster_rank_gauss(raster: &crate::raster::SpikeRaster, window: usize) -> usize {
    let rows: Vec<Vec<i64>> = raster
        .tail(window)
        .iter_rows()
        .map(|r| r.iter().map(|&s| i64::from(s)).collect())
        .collect();
    rational_rank_gauss(&rows)
}
