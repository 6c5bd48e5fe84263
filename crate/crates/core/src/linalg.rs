//! Dense complex matrices and the structured builders used by the rest of the
//! crate: unit-modulus DFT matrices, Sylvester/Walsh matrices and Kronecker
//! products.
//!
//! Matrices here are small (at most a few hundred entries per side), so they
//! are stored row-major in a flat `Vec` with no attempt at blocking.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Absolute tolerance for floating-point equality checks.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Tolerance(f64);

impl Tolerance {
    pub fn new(eps: f64) -> Result<Self> {
        if eps > 0.0 && eps.is_finite() {
            Ok(Tolerance(eps))
        } else {
            Err(Error::InvalidTolerance(eps))
        }
    }

    pub fn eps(self) -> f64 {
        self.0
    }

    pub fn accepts(self, deviation: f64) -> bool {
        deviation < self.0
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance(DEFAULT_TOLERANCE)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            entries: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        ComplexMatrix {
            rows,
            cols,
            entries,
        }
    }

    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(ComplexMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::from_row_major(
            rows,
            cols,
            entries.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&z| z * factor).collect(),
        }
    }

    pub fn matmul(&self, rhs: &ComplexMatrix) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Largest entrywise modulus of `self - other`; `f64::INFINITY` on shape mismatch.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |(M†M - I)_ij|`, or infinity for a non-square matrix.
    pub fn unitarity_residual(&self) -> f64 {
        if self.rows != self.cols {
            return f64::INFINITY;
        }
        let gram = self.adjoint().matmul(self).expect("square");
        gram.max_abs_diff(&Self::identity(self.rows))
    }

    pub fn is_unitary(&self, tol: Tolerance) -> bool {
        tol.accepts(self.unitarity_residual())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i}, {j}) out of bounds"
        );
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i}, {j}) out of bounds"
        );
        &mut self.entries[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self
                .row(i)
                .iter()
                .map(|z| format!("{:+.4}{:+.4}i", z.re, z.im))
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// `exp(2πi·k/n)`, with the exact values used for k/n at multiples of 1/4 so
/// that real and imaginary axes carry no round-off.
pub fn root_of_unity(k: usize, n: usize) -> Complex64 {
    let k = k % n;
    if (4 * k).is_multiple_of(n) {
        match 4 * k / n {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    } else {
        Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)
    }
}

/// Unnormalized `n × n` DFT matrix with entries `exp(2πi·j·p/n)`.
pub fn dft_matrix(n: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::InvalidDimension("DFT size must be >= 1".into()));
    }
    Ok(ComplexMatrix::from_fn(n, n, |j, p| root_of_unity(j * p, n)))
}

/// Exact ±1 entries of the Sylvester-ordered Walsh matrix of the given size,
/// built by the recursion `H(2^m) = H(2) ⊗ H(2^(m-1))`.
pub fn walsh_signs(size: usize) -> Result<Vec<Vec<i8>>> {
    if !size.is_power_of_two() {
        return Err(Error::InvalidDimension(format!(
            "Walsh matrix size {size} is not a power of two"
        )));
    }
    let mut h: Vec<Vec<i8>> = vec![vec![1]];
    while h.len() < size {
        let half = h.len();
        let mut next = vec![vec![0i8; 2 * half]; 2 * half];
        // H(2) = [[1, 1], [1, -1]] on the leading index
        for (top_i, top_j, sign) in [(0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, -1)] {
            for i in 0..half {
                for j in 0..half {
                    next[top_i * half + i][top_j * half + j] = sign * h[i][j];
                }
            }
        }
        h = next;
    }
    Ok(h)
}

pub fn walsh_matrix(size: usize) -> Result<ComplexMatrix> {
    let signs = walsh_signs(size)?;
    Ok(ComplexMatrix::from_fn(size, size, |i, j| {
        Complex64::new(f64::from(signs[i][j]), 0.0)
    }))
}

/// Kronecker product; entry `(i·rb + k, j·cb + l) = a[i, j]·b[k, l]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (rb, cb) = (b.rows(), b.cols());
    ComplexMatrix::from_fn(a.rows() * rb, a.cols() * cb, |r, c| {
        a[(r / rb, c / cb)] * b[(r % rb, c % cb)]
    })
}

/// Determinant of a real square matrix by Gaussian elimination with partial
/// pivoting.
#[allow(clippy::needless_range_loop)]
pub fn real_determinant(matrix: &[Vec<f64>]) -> Result<f64> {
    let n = matrix.len();
    if let Some(row) = matrix.iter().find(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: row.len(),
        });
    }
    let mut a: Vec<Vec<f64>> = matrix.to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .expect("non-empty range");
        if a[pivot][col] == 0.0 {
            return Ok(0.0);
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
        }
    }
    Ok(det)
}

pub fn inner_product(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn dft_four_matches_display() {
        let m = dft_matrix(4).unwrap();
        let expected = [
            [c(1., 0.), c(1., 0.), c(1., 0.), c(1., 0.)],
            [c(1., 0.), c(0., 1.), c(-1., 0.), c(0., -1.)],
            [c(1., 0.), c(-1., 0.), c(1., 0.), c(-1., 0.)],
            [c(1., 0.), c(0., -1.), c(-1., 0.), c(0., 1.)],
        ];
        for (i, row) in expected.iter().enumerate() {
            for (j, z) in row.iter().enumerate() {
                assert_eq!(m[(i, j)], *z, "entry ({i}, {j})");
            }
        }
    }

    #[test]
    fn dft_trivial_and_errors() {
        assert_eq!(dft_matrix(1).unwrap(), ComplexMatrix::identity(1));
        assert!(matches!(dft_matrix(0), Err(Error::InvalidDimension(_))));
    }

    #[test]
    fn dft_three_columns_orthogonal() {
        let m = dft_matrix(3).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                let ip: Complex64 = (0..3).map(|r| m[(r, a)].conj() * m[(r, b)]).sum();
                let want = if a == b { 3.0 } else { 0.0 };
                assert!((ip - c(want, 0.0)).norm() < 1e-12);
            }
            for r in 0..3 {
                let angle = 2.0 * PI * (r * a) as f64 / 3.0;
                assert!((m[(r, a)] - Complex64::from_polar(1.0, angle)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn walsh_four_matches_display() {
        let h = walsh_signs(4).unwrap();
        assert_eq!(
            h,
            vec![
                vec![1, 1, 1, 1],
                vec![1, -1, 1, -1],
                vec![1, 1, -1, -1],
                vec![1, -1, -1, 1],
            ]
        );
        assert_eq!(walsh_signs(1).unwrap(), vec![vec![1]]);
    }

    #[test]
    fn walsh_rejects_non_power_of_two() {
        for size in [0, 3, 6, 12] {
            assert!(matches!(
                walsh_matrix(size),
                Err(Error::InvalidDimension(_))
            ));
        }
    }

    #[test]
    fn walsh_eight_is_kron_of_two_and_four() {
        let h2 = walsh_matrix(2).unwrap();
        let h4 = walsh_matrix(4).unwrap();
        let h8 = walsh_matrix(8).unwrap();
        // independent index-formula oracle for the Kronecker product
        for i in 0..8 {
            for j in 0..8 {
                let want = h2[(i / 4, j / 4)] * h4[(i % 4, j % 4)];
                assert_eq!(h8[(i, j)], want);
            }
        }
        assert_eq!(kron(&h2, &h4), h8);
        assert_eq!(kron(&h2, &h2), h4);
    }

    #[test]
    fn kron_identity_and_index_formula() {
        let m = dft_matrix(3).unwrap();
        assert_eq!(kron(&ComplexMatrix::identity(1), &m), m);

        let a = ComplexMatrix::from_fn(2, 2, |i, j| c(i as f64 + 1.0, j as f64));
        let b = ComplexMatrix::from_fn(3, 3, |k, l| c(k as f64 - l as f64, 0.5 * k as f64));
        let p = kron(&a, &b);
        assert_eq!((p.rows(), p.cols()), (6, 6));
        for (i, j, k, l) in [(0, 0, 0, 0), (1, 0, 2, 1), (0, 1, 1, 2), (1, 1, 2, 2)] {
            assert_eq!(p[(i * 3 + k, j * 3 + l)], a[(i, j)] * b[(k, l)]);
        }
    }

    #[test]
    fn determinant_known_values() {
        assert_eq!(real_determinant(&[]).unwrap(), 1.0);
        assert_eq!(
            real_determinant(&[vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap(),
            1.0
        );
        let m = vec![
            vec![2.0, 0.0, 1.0],
            vec![1.0, 3.0, 2.0],
            vec![1.0, 1.0, 1.0],
        ];
        // 2(3-2) - 0 + 1(1-3) = 0
        assert!(real_determinant(&m).unwrap().abs() < 1e-14);
        let m = vec![vec![4.0, 3.0], vec![6.0, 3.0]];
        assert!((real_determinant(&m).unwrap() + 6.0).abs() < 1e-14);
    }

    #[test]
    fn tolerance_validation() {
        assert!(Tolerance::new(0.0).is_err());
        assert!(Tolerance::new(-1.0).is_err());
        assert!(Tolerance::new(f64::NAN).is_err());
        assert_eq!(Tolerance::default().eps(), 1e-10);
    }

    #[test]
    fn unitarity_residual_detects_non_unitary() {
        let h = walsh_matrix(2)
            .unwrap()
            .scale(c(std::f64::consts::FRAC_1_SQRT_2, 0.0));
        assert!(h.is_unitary(Tolerance::default()));
        assert!(!walsh_matrix(2).unwrap().is_unitary(Tolerance::default()));
        assert_eq!(
            ComplexMatrix::zeros(2, 3).unitarity_residual(),
            f64::INFINITY
        );
    }
}
