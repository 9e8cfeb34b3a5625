#![allow(clippy::needless_range_loop)]

use super::scalar::Scalar;

/// Determinant by Gaussian elimination with largest-magnitude pivoting.
///
/// Exact for `BigRational`. An empty matrix has determinant `1`.
pub fn determinant<T: Scalar>(matrix: &[Vec<T>]) -> T {
    let n = matrix.len();
    let mut a: Vec<Vec<T>> = matrix.to_vec();
    let mut det = T::one();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| {
                a[i][col]
                    .magnitude()
                    .partial_cmp(&a[j][col].magnitude())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("nonempty range");
        if a[pivot][col].is_zero() {
            return T::zero();
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det = det * p.clone();
        for row in col + 1..n {
            if a[row][col].is_zero() {
                continue;
            }
            let factor = a[row][col].clone() / p.clone();
            for k in col + 1..n {
                let v = a[row][k].clone() - factor.clone() * a[col][k].clone();
                a[row][k] = v;
            }
        }
    }
    det
}

/// `a^{-1} b` for square `a`, or `None` when `a` is singular.
pub fn solve<T: Scalar>(a: &[Vec<T>], b: &[Vec<T>]) -> Option<Vec<Vec<T>>> {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<T>> = a
        .iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().chain(rb).cloned().collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            aug[i][col]
                .magnitude()
                .partial_cmp(&aug[j][col].magnitude())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if aug[pivot][col].is_zero() {
            return None;
        }
        aug.swap(pivot, col);
        let p = aug[col][col].clone();
        for k in col..n + m {
            let v = aug[col][k].clone() / p.clone();
            aug[col][k] = v;
        }
        for row in 0..n {
            if row == col || aug[row][col].is_zero() {
                continue;
            }
            let factor = aug[row][col].clone();
            for k in col..n + m {
                let v = aug[row][k].clone() - factor.clone() * aug[col][k].clone();
                aug[row][k] = v;
            }
        }
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Columns `cols` (0-based) of `matrix`, as a square submatrix when `cols.len()` equals the row count.
pub fn select_columns<T: Clone>(matrix: &[Vec<T>], cols: &[usize]) -> Vec<Vec<T>> {
    matrix
        .iter()
        .map(|row| cols.iter().map(|&c| row[c].clone()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational;
    use num_complex::Complex64;

    #[test]
    fn small_determinants() {
        let m = vec![
            vec![rational(0, 1), rational(1, 1)],
            vec![rational(1, 1), rational(0, 1)],
        ];
        assert_eq!(determinant(&m), rational(-1, 1));
        let v = vec![
            vec![rational(1, 1), rational(2, 1), rational(4, 1)],
            vec![rational(1, 1), rational(3, 1), rational(9, 1)],
            vec![rational(1, 1), rational(5, 1), rational(25, 1)],
        ];
        // Vandermonde: (3-2)(5-2)(5-3)
        assert_eq!(determinant(&v), rational(6, 1));
        assert_eq!(determinant::<Complex64>(&[]), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn solve_inverts() {
        let a = vec![
            vec![rational(2, 1), rational(1, 1)],
            vec![rational(1, 1), rational(3, 1)],
        ];
        let b = vec![vec![rational(3, 1)], vec![rational(5, 1)]];
        let x = solve(&a, &b).unwrap();
        assert_eq!(x, vec![vec![rational(4, 5)], vec![rational(7, 5)]]);
        let singular = vec![vec![rational(1, 1); 2]; 2];
        assert!(solve(&singular, &b).is_none());
    }
}
