//! Exact Gauss–Jordan elimination over `Q`.

use num_traits::{One, Zero};

use crate::gq::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSolution {
    /// Particular solution with every free variable set to zero, when the
    /// system is consistent.
    pub x: Option<Vec<Rational>>,
    pub rank: usize,
    pub pivots: Vec<usize>,
    pub free: Vec<usize>,
}

impl LinearSolution {
    pub fn is_consistent(&self) -> bool {
        self.x.is_some()
    }
}

/// Solves `A x = b` by reduction to row echelon form.
///
/// Columns are scanned left to right, so the free variables are the
/// right-most columns of each dependent group; the returned particular
/// solution sets all of them to zero.
pub fn solve(a: &[Vec<Rational>], b: &[Rational], ncols: usize) -> LinearSolution {
    let nrows = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.resize(ncols, Rational::zero());
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == nrows {
            break;
        }
        let Some(p) = (row..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = Rational::one() / &m[row][col];
        for v in m[row].iter_mut().skip(col) {
            *v *= &inv;
        }
        let pivot_row = m[row].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let f = other[col].clone();
            for (c, pv) in pivot_row.iter().enumerate().skip(col) {
                if !pv.is_zero() {
                    other[c] -= &f * pv;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let rank = pivots.len();
    let consistent = m[rank..].iter().all(|r| r[ncols].is_zero());
    let free = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let x = consistent.then(|| {
        let mut x = vec![Rational::zero(); ncols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = m[r][ncols].clone();
        }
        x
    });
    LinearSolution {
        x,
        rank,
        pivots,
        free,
    }
}

/// Rank of a matrix.
pub fn rank(a: &[Vec<Rational>], ncols: usize) -> usize {
    let zeros = vec![Rational::zero(); a.len()];
    solve(a, &zeros, ncols).rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gq::rat_int;

    fn row(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat_int(x)).collect()
    }

    #[test]
    fn unique_solution() {
        let a = vec![row(&[2, 1]), row(&[1, 3])];
        let s = solve(&a, &row(&[3, 5]), 2);
        assert_eq!(s.x.unwrap(), vec![rat_int(4) / rat_int(5), rat_int(7) / rat_int(5)]);
        assert_eq!(s.rank, 2);
    }

    #[test]
    fn free_variables_are_zero() {
        let a = vec![row(&[1, 1, 1])];
        let s = solve(&a, &row(&[2]), 3);
        assert_eq!(s.x.unwrap(), row(&[2, 0, 0]));
        assert_eq!(s.free, vec![1, 2]);
    }

    #[test]
    fn inconsistent_system() {
        let a = vec![row(&[1, 1]), row(&[2, 2])];
        let s = solve(&a, &row(&[1, 3]), 2);
        assert!(!s.is_consistent());
        assert_eq!(s.rank, 1);
    }
}
