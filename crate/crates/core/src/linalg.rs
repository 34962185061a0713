//! Small dense exact linear algebra helpers (Gaussian elimination).

use crate::rational::{RVec, Rational};

/// Solves the square system `A x = b` exactly. Returns `None` when `A` is
/// singular.
pub fn solve_square(a: &[RVec], b: &[Rational]) -> Option<RVec> {
    let n = a.len();
    debug_assert!(a.iter().all(|row| row.dim() == n));
    debug_assert_eq!(b.len(), n);

    // Augmented matrix.
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r: Vec<Rational> = row.entries().to_vec();
            r.push(rhs.clone());
            r
        })
        .collect();

    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let inv = m[col][col].recip().expect("nonzero pivot");
        for j in col..=n {
            m[col][j] = &m[col][j] * &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for j in col..=n {
                    m[r][j] = &m[r][j] - &(&factor * &m[col][j]);
                }
            }
        }
    }
    Some(RVec::new(m.into_iter().map(|row| row[n].clone()).collect()))
}

/// Rank of a (not necessarily square) rational matrix given as rows.
pub fn rank(rows: &[RVec]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].dim();
    let mut m: Vec<Vec<Rational>> = rows.iter().map(|r| r.entries().to_vec()).collect();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = m[rank][col].recip().expect("nonzero pivot");
        for j in col..ncols {
            m[rank][j] = &m[rank][j] * &inv;
        }
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for j in col..ncols {
                    m[r][j] = &m[r][j] - &(&factor * &m[rank][j]);
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_2x2() {
        let a = vec![RVec::from_ints(&[2, 1]), RVec::from_ints(&[1, -1])];
        let b = vec![Rational::from_int(3), Rational::from_int(0)];
        let x = solve_square(&a, &b).unwrap();
        assert_eq!(x, RVec::new(vec![Rational::new(1, 1).unwrap(), Rational::new(1, 1).unwrap()]));
    }

    #[test]
    fn singular_detected() {
        let a = vec![RVec::from_ints(&[1, 2]), RVec::from_ints(&[2, 4])];
        let b = vec![Rational::from_int(1), Rational::from_int(2)];
        assert!(solve_square(&a, &b).is_none());
    }

    #[test]
    fn rank_counts_independent_rows() {
        let rows = vec![
            RVec::from_ints(&[1, 0, 0]),
            RVec::from_ints(&[0, 1, 0]),
            RVec::from_ints(&[1, 1, 0]),
        ];
        assert_eq!(rank(&rows), 2);
        assert_eq!(rank(&[]), 0);
    }
}
