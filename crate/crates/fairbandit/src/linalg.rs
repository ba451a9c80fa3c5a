//! Small dense exact linear algebra: rational Gaussian elimination and
//! integer determinants. Everything here targets desk-scale systems
//! (a dozen rows), so clarity beats asymptotics.

// Pivot loops read clearest with explicit indices.
#![allow(clippy::needless_range_loop)]

use num::bigint::BigInt;
use num::{One, Zero};

use crate::rational::Rational;

/// Solves `A x = b` exactly. Returns `None` when `A` is singular.
pub fn solve_unique(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    debug_assert!(a.iter().all(|row| row.len() == n));
    debug_assert_eq!(b.len(), n);
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();

    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let inv = m[col][col].clone();
        for c in col..=n {
            m[col][c] = &m[col][c] / &inv;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for c in col..=n {
                let sub = &factor * &m[col][c];
                m[r][c] -= sub;
            }
        }
    }
    Some((0..n).map(|i| m[i][n].clone()).collect())
}

/// Solves `A x = b` where `A` may be rectangular or rank-deficient.
/// Returns any particular solution (free variables pinned to zero), or
/// `None` when the system is inconsistent.
pub fn solve_any(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    debug_assert_eq!(b.len(), rows);
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();

    let mut pivot_col_of_row = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].clone();
        for c in col..=cols {
            m[row][c] = &m[row][c] / &inv;
        }
        for r in 0..rows {
            if r == row || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for c in col..=cols {
                let sub = &factor * &m[row][c];
                m[r][c] -= sub;
            }
        }
        pivot_col_of_row.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    // Inconsistent iff a zero row has nonzero rhs.
    for r in row..rows {
        if !m[r][cols].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rational::zero(); cols];
    for (r, &c) in pivot_col_of_row.iter().enumerate() {
        x[c] = m[r][cols].clone();
    }
    Some(x)
}

/// Exact integer determinant via fraction-free (Bareiss) elimination.
pub fn det_bareiss(matrix: &[Vec<BigInt>]) -> BigInt {
    let n = matrix.len();
    if n == 0 {
        return BigInt::one();
    }
    debug_assert!(matrix.iter().all(|row| row.len() == n));
    let mut m: Vec<Vec<BigInt>> = matrix.to_vec();
    let mut sign = 1i8;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                // Exact division by the previous pivot is the Bareiss invariant.
                m[i][j] = num / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Cofactor-expansion determinant; the slow independent cross-check for
/// [`det_bareiss`] in tests.
pub fn det_cofactor(matrix: &[Vec<BigInt>]) -> BigInt {
    let n = matrix.len();
    match n {
        0 => BigInt::one(),
        1 => matrix[0][0].clone(),
        _ => {
            let mut acc = BigInt::zero();
            for col in 0..n {
                if matrix[0][col].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<BigInt>> = matrix[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != col)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let term = &matrix[0][col] * det_cofactor(&minor);
                if col % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn bi(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    #[test]
    fn solves_small_system() {
        // x + y = 1, x - y = 1/2  =>  x = 3/4, y = 1/4
        let a = vec![vec![rat(1, 1), rat(1, 1)], vec![rat(1, 1), rat(-1, 1)]];
        let b = vec![rat(1, 1), rat(1, 2)];
        let x = solve_unique(&a, &b).unwrap();
        assert_eq!(x, vec![rat(3, 4), rat(1, 4)]);
    }

    #[test]
    fn singular_system_is_none() {
        let a = vec![vec![rat(1, 1), rat(1, 1)], vec![rat(2, 1), rat(2, 1)]];
        let b = vec![rat(1, 1), rat(2, 1)];
        assert!(solve_unique(&a, &b).is_none());
    }

    #[test]
    fn solve_any_handles_rank_deficiency() {
        // One equation, two unknowns: x + y = 1 -> particular solution.
        let a = vec![vec![rat(1, 1), rat(1, 1)]];
        let b = vec![rat(1, 1)];
        let x = solve_any(&a, &b).unwrap();
        assert_eq!(&x[0] + &x[1], rat(1, 1));
        // Inconsistent: 0 = 1.
        let a = vec![vec![rat(0, 1)]];
        let b = vec![rat(1, 1)];
        assert!(solve_any(&a, &b).is_none());
    }

    #[test]
    fn determinant_matches_cofactor() {
        let m = bi(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]);
        assert_eq!(det_bareiss(&m), BigInt::from(4));
        assert_eq!(det_cofactor(&m), BigInt::from(4));

        let m = bi(&[&[1, 1], &[-1, 1]]);
        assert_eq!(det_bareiss(&m), BigInt::from(2));
        assert_eq!(det_cofactor(&m), BigInt::from(2));

        let m = bi(&[&[0, 1], &[1, 0]]);
        assert_eq!(det_bareiss(&m), BigInt::from(-1));
        assert_eq!(det_cofactor(&m), BigInt::from(-1));
    }
}
