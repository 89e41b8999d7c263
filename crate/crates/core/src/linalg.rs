//! Exact rational arithmetic and linear algebra.
//!
//! Everything here works over arbitrary-precision rationals. Elimination is
//! fraction-free (Bareiss): rows are first scaled to integers, after which
//! every intermediate entry is itself a minor of the scaled matrix and the
//! divisions are exact.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational number, always in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

/// Builds `num/den` in lowest terms. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exact division, reporting a zero divisor instead of panicking.
pub fn checked_div(a: &Rational, b: &Rational) -> Result<Rational, LinalgError> {
    if b.is_zero() {
        Err(LinalgError::DivisionByZero)
    } else {
        Ok(a / b)
    }
}

/// Returns the value as `i64` if it is an integer that fits.
pub fn to_i64(r: &Rational) -> Option<i64> {
    if r.is_integer() {
        i64::try_from(r.numer().clone()).ok()
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: matrix has {expected} rows but vector has length {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("division by zero")]
    DivisionByZero,
}

/// Dense row-major matrix of rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    /// Builds a matrix from integer rows. Panics on ragged input.
    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(n_rows, n_cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n_cols, "ragged matrix rows");
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, int(x));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        assert!(i < self.rows && j < self.cols, "matrix index out of bounds");
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        assert!(i < self.rows && j < self.cols, "matrix index out of bounds");
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// The top-left `k`×`k` submatrix.
    pub fn leading_minor(&self, k: usize) -> RationalMatrix {
        assert!(k <= self.rows && k <= self.cols);
        let mut out = Self::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
        if x.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Scales a rational row to integers. Returns the integer row and the scale.
fn integer_row(row: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let scale = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints = row
        .iter()
        .map(|x| x.numer() * (&scale / x.denom()))
        .collect();
    (ints, scale)
}

/// In-place Bareiss forward elimination on the first `pivot_cols` columns.
///
/// Returns `(sign, rank_deficient)`: `sign` is the parity of row swaps and
/// `rank_deficient` is true when some pivot column had no nonzero entry.
fn bareiss_forward(a: &mut [Vec<BigInt>], pivot_cols: usize) -> (i32, bool) {
    let n = a.len();
    let width = a.first().map_or(0, Vec::len);
    let mut sign = 1;
    let mut prev = BigInt::one();
    for k in 0..pivot_cols.min(n) {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return (sign, true);
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..width {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    (sign, false)
}

pub fn determinant(m: &RationalMatrix) -> Result<Rational, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(Rational::one());
    }
    let mut scale_product = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let (row, scale) = integer_row(m.row(i));
            scale_product *= scale;
            row
        })
        .collect();
    let (sign, deficient) = bareiss_forward(&mut a, n);
    if deficient {
        return Ok(Rational::zero());
    }
    let det = &a[n - 1][n - 1] * BigInt::from(sign);
    Ok(Rational::new(det, scale_product))
}

/// Solves `m · x = b` exactly.
pub fn solve_linear(m: &RationalMatrix, b: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    if b.len() != n {
        return Err(LinalgError::DimensionMismatch {
            expected: n,
            found: b.len(),
        });
    }
    let mut a: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut augmented: Vec<Rational> = m.row(i).to_vec();
            augmented.push(b[i].clone());
            integer_row(&augmented).0
        })
        .collect();
    let (_, deficient) = bareiss_forward(&mut a, n);
    if deficient {
        return Err(LinalgError::SingularMatrix);
    }
    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = Rational::from_integer(a[i][n].clone());
        for j in i + 1..n {
            acc -= Rational::from_integer(a[i][j].clone()) * &x[j];
        }
        x[i] = acc / Rational::from_integer(a[i][i].clone());
    }
    Ok(x)
}

/// Leading-principal-minor test: `(-1)^k det(M_k) > 0` for every `k`.
pub fn is_negative_definite(m: &RationalMatrix) -> Result<bool, LinalgError> {
    if !m.is_symmetric() {
        return Err(LinalgError::NotSymmetric);
    }
    for k in 1..=m.rows {
        let d = determinant(&m.leading_minor(k))?;
        let signed = if k % 2 == 0 { d } else { -d };
        if !signed.is_positive() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    fn e8() -> RationalMatrix {
        // chain v0..v6, v7 attached at v4
        let mut rows = vec![vec![0i64; 8]; 8];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = -2;
        }
        for (a, b) in [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)] {
            rows[a][b] = 1;
            rows[b][a] = 1;
        }
        RationalMatrix::from_i64_rows(&rows)
    }

    #[test]
    fn solve_small_examples() {
        let m = RationalMatrix::from_i64_rows(&[vec![-2, 1], vec![1, -2]]);
        assert_eq!(solve_linear(&m, &ints(&[-1, -1])).unwrap(), ints(&[1, 1]));
        let m = RationalMatrix::from_i64_rows(&[vec![-1]]);
        assert_eq!(solve_linear(&m, &ints(&[1])).unwrap(), ints(&[-1]));
    }

    #[test]
    fn solve_e8_multiplicities() {
        let b = ints(&[-1, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(
            solve_linear(&e8(), &b).unwrap(),
            ints(&[2, 3, 4, 5, 6, 4, 2, 3])
        );
    }

    #[test]
    fn solve_needs_pivoting_and_fractions() {
        let mut m = RationalMatrix::from_i64_rows(&[vec![0, 1], vec![3, 0]]);
        m.set(0, 1, rat(1, 2));
        let x = solve_linear(&m, &[int(1), int(1)]).unwrap();
        assert_eq!(x, vec![rat(1, 3), int(2)]);
    }

    #[test]
    fn singular_and_shape_errors() {
        let m = RationalMatrix::from_i64_rows(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(
            solve_linear(&m, &ints(&[1, 1])),
            Err(LinalgError::SingularMatrix)
        );
        assert_eq!(
            solve_linear(&m, &ints(&[1])),
            Err(LinalgError::DimensionMismatch {
                expected: 2,
                found: 1
            })
        );
        let r = RationalMatrix::zeros(2, 3);
        assert!(matches!(
            determinant(&r),
            Err(LinalgError::NotSquare { .. })
        ));
    }

    #[test]
    fn determinants() {
        let m = RationalMatrix::from_i64_rows(&[vec![-2, 1], vec![1, -2]]);
        assert_eq!(determinant(&m).unwrap(), int(3));
        assert_eq!(
            determinant(&RationalMatrix::from_i64_rows(&[vec![-1]])).unwrap(),
            int(-1)
        );
        assert_eq!(determinant(&e8()).unwrap(), int(1));
        let mut h = RationalMatrix::zeros(2, 2);
        h.set(0, 0, rat(1, 2));
        h.set(0, 1, rat(1, 3));
        h.set(1, 0, rat(1, 3));
        h.set(1, 1, rat(1, 4));
        assert_eq!(determinant(&h).unwrap(), rat(1, 72));
    }

    #[test]
    fn definiteness() {
        let m = RationalMatrix::from_i64_rows(&[vec![-2, 1], vec![1, -2]]);
        assert!(is_negative_definite(&m).unwrap());
        let m = RationalMatrix::from_i64_rows(&[vec![-1, 2], vec![2, -1]]);
        assert!(!is_negative_definite(&m).unwrap());
        assert!(is_negative_definite(&e8()).unwrap());
        let m = RationalMatrix::from_i64_rows(&[vec![-1, 2], vec![0, -1]]);
        assert_eq!(is_negative_definite(&m), Err(LinalgError::NotSymmetric));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(
            checked_div(&int(1), &int(0)),
            Err(LinalgError::DivisionByZero)
        );
        assert_eq!(checked_div(&int(1), &int(4)).unwrap(), rat(1, 4));
    }

    #[test]
    fn display_lowest_terms() {
        assert_eq!(rat(6, -4).to_string(), "-3/2");
        assert_eq!(rat(8, 4).to_string(), "2");
    }
}
