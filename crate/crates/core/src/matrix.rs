//! Dense matrices over exact rings: fraction-free determinant and rank.

use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::{Ring, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch {
                    expected: c,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Self {
            rows: r,
            cols: c,
            data,
        })
    }

    /// Builds the matrix whose `j`-th column is `cols[j]`.
    pub fn from_columns(cols: &[Vec<T>]) -> Result<Self> {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        if let Some(bad) = cols.iter().find(|col| col.len() != r) {
            return Err(Error::DimensionMismatch {
                expected: r,
                found: bad.len(),
            });
        }
        let mut data = Vec::with_capacity(r * c);
        for i in 0..r {
            for col in cols {
                data.push(col[i].clone());
            }
        }
        Ok(Self {
            rows: r,
            cols: c,
            data,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<S>(&self, f: impl Fn(&T) -> S) -> Matrix<S> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// Determinant by Bareiss elimination; every division is exact in `R`.
pub fn det<R: Ring>(m: &Matrix<R>) -> Result<R> {
    if m.rows != m.cols {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(R::one());
    }
    let mut a = m.clone();
    let mut prev = R::one();
    let mut negate = false;
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(p) => {
                    a.swap_rows(k, p);
                    negate = !negate;
                }
                None => return Ok(R::zero()),
            }
        }
        let pivot = a[(k, k)].clone();
        for i in k + 1..n {
            let lead = a[(i, k)].clone();
            for j in k + 1..n {
                let t = a[(i, j)].clone() * &pivot - lead.clone() * &a[(k, j)];
                a[(i, j)] = t.div_exact(&prev).ok_or(Error::NotDivisible)?;
            }
            a[(i, k)] = R::zero();
        }
        prev = pivot;
    }
    let d = a[(n - 1, n - 1)].clone();
    Ok(if negate { -d } else { d })
}

/// Rank over the fraction field of `R`, by fraction-free elimination.
pub fn rank<R: Ring>(m: &Matrix<R>) -> usize {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut prev = R::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        a.swap_rows(r, p);
        let pivot = a[(r, c)].clone();
        for i in r + 1..rows {
            let lead = a[(i, c)].clone();
            for j in c + 1..cols {
                let t = a[(i, j)].clone() * &pivot - lead.clone() * &a[(r, j)];
                a[(i, j)] = t
                    .div_exact(&prev)
                    .expect("Bareiss division is exact in an integral domain");
            }
            a[(i, c)] = R::zero();
        }
        prev = pivot;
        r += 1;
    }
    r
}

/// Solves `m · x = b` over a field by Gauss–Jordan elimination. Returns
/// `None` when the system is inconsistent; free variables are set to zero.
pub fn solve<T: Scalar>(m: &Matrix<T>, b: &[T]) -> Result<Option<Vec<T>>> {
    if b.len() != m.rows {
        return Err(Error::DimensionMismatch {
            expected: m.rows,
            found: b.len(),
        });
    }
    let (rows, cols) = (m.rows, m.cols);
    let mut a = Matrix::from_fn(rows, cols + 1, |i, j| {
        if j < cols {
            m[(i, j)].clone()
        } else {
            b[i].clone()
        }
    });
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        a.swap_rows(r, p);
        let inv = T::one() / a[(r, c)].clone();
        for j in c..=cols {
            a[(r, j)] = a[(r, j)].clone() * &inv;
        }
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in c..=cols {
                let t = a[(r, j)].clone() * &f;
                a[(i, j)] -= t;
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if (r..rows).any(|i| !a[(i, cols)].is_zero()) {
        return Ok(None);
    }
    let mut x = alloc::vec![T::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = a[(i, cols)].clone();
    }
    Ok(Some(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;
    use crate::scalar::{int, Rational};
    use alloc::vec;
    use num_bigint::BigInt;

    #[test]
    fn identity_det_and_rank() {
        let id = Matrix::from_fn(3, 3, |i, j| int(i64::from(i == j)));
        assert_eq!(det(&id).unwrap(), int(1));
        assert_eq!(rank(&id), 3);
    }

    #[test]
    fn vandermonde_2x2() {
        let one = Poly::<BigInt>::constant(2, BigInt::from(1));
        let m = Matrix::from_rows(vec![
            vec![one.clone(), one],
            vec![Poly::var(2, 0), Poly::var(2, 1)],
        ])
        .unwrap();
        let expected = Poly::var(2, 1) - Poly::var(2, 0);
        assert_eq!(det(&m).unwrap(), expected);
    }

    #[test]
    fn pivot_swap_sign() {
        let m = Matrix::from_rows(vec![vec![int(0), int(1)], vec![int(1), int(0)]]).unwrap();
        assert_eq!(det(&m).unwrap(), int(-1));
    }

    #[test]
    fn non_square() {
        let m = Matrix::from_rows(vec![vec![int(1), int(2)]]).unwrap();
        assert_eq!(det(&m), Err(Error::NotSquare { rows: 1, cols: 2 }));
    }

    #[test]
    fn rank_deficient() {
        let m: Matrix<Rational> = Matrix::from_rows(vec![
            vec![int(1), int(2), int(3)],
            vec![int(2), int(4), int(6)],
            vec![int(0), int(1), int(1)],
        ])
        .unwrap();
        assert_eq!(rank(&m), 2);
        assert_eq!(det(&m).unwrap(), int(0));
    }

    #[test]
    fn solve_square_and_inconsistent() {
        let m: Matrix<Rational> =
            Matrix::from_rows(vec![vec![int(2), int(1)], vec![int(1), int(3)]]).unwrap();
        assert_eq!(
            solve(&m, &[int(3), int(4)]).unwrap(),
            Some(vec![int(1), int(1)])
        );
        let s: Matrix<Rational> =
            Matrix::from_rows(vec![vec![int(1), int(1)], vec![int(2), int(2)]]).unwrap();
        assert_eq!(solve(&s, &[int(1), int(3)]).unwrap(), None);
        assert_eq!(
            solve(&s, &[int(1), int(2)]).unwrap(),
            Some(vec![int(1), int(0)])
        );
    }
}
