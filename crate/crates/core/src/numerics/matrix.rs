//! Dense complex matrices and an LU solver with partial pivoting.
//!
//! Row-major storage, double-precision complex entries. Sized for the
//! workloads in this crate: mode-correlation matrices up to a few tens of
//! rows and the Fisher-tensor systems up to a few thousand rows.

use num_complex::Complex64;
use std::fmt;

use super::NumericsError;

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
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

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Complex64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        for z in &mut out.data {
            *z *= s;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let orow = other.row(k).to_vec();
                let out_row = out.row_mut(i);
                for (o, b) in out_row.iter_mut().zip(orow.iter()) {
                    *o += aik * b;
                }
            }
        }
        out
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, x.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .map(|(a, b)| a * b)
                    .sum::<Complex64>()
            })
            .collect()
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// max |A - A†| over entries.
    pub fn hermiticity_defect(&self) -> f64 {
        assert!(self.is_square());
        let mut d = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                d = d.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        d
    }

    /// max |A - Aᵀ| over entries.
    pub fn symmetry_defect(&self) -> f64 {
        assert!(self.is_square());
        let mut d = 0.0f64;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                d = d.max((self[(i, j)] - self[(j, i)]).norm());
            }
        }
        d
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4e}{:+.4e}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// LU factorization with partial pivoting of a square complex matrix.
///
/// Factors PA = LU in place. Reusable for several right-hand sides.
pub struct LuFactors {
    n: usize,
    lu: ComplexMatrix,
    perm: Vec<usize>,
}

/// Relative pivot threshold: a pivot below `threshold * max|A|` is singular.
const PIVOT_RELATIVE_THRESHOLD: f64 = 1e-14;

impl LuFactors {
    pub fn factor(a: &ComplexMatrix) -> Result<Self, NumericsError> {
        if !a.is_square() {
            return Err(NumericsError::NotSquare {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        if !a.all_finite() {
            return Err(NumericsError::NonFiniteInput);
        }
        let n = a.rows();
        let scale = a.max_abs();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();

        for k in 0..n {
            // pivot search in column k
            let mut p = k;
            let mut best = lu[(k, k)].norm();
            for i in (k + 1)..n {
                let v = lu[(i, k)].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best <= PIVOT_RELATIVE_THRESHOLD * scale {
                return Err(NumericsError::SingularMatrix { pivot: k });
            }
            if p != k {
                perm.swap(k, p);
                let (lo, hi) = (k.min(p), k.max(p));
                // split_at_mut to swap two full rows
                let cols = lu.cols;
                let (a_split, b_split) = lu.data.split_at_mut(hi * cols);
                a_split[lo * cols..lo * cols + cols].swap_with_slice(&mut b_split[..cols]);
            }
            let pivot = lu[(k, k)];
            let inv_pivot = Complex64::new(1.0, 0.0) / pivot;
            for i in (k + 1)..n {
                let factor = lu[(i, k)] * inv_pivot;
                lu[(i, k)] = factor;
                if factor == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let cols = lu.cols;
                let (upper, lower) = lu.data.split_at_mut(i * cols);
                let krow = &upper[k * cols + k + 1..k * cols + cols];
                let irow = &mut lower[k + 1..cols];
                for (x, y) in irow.iter_mut().zip(krow) {
                    *x -= factor * y;
                }
            }
        }
        Ok(Self { n, lu, perm })
    }

    pub fn solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>, NumericsError> {
        if b.len() != self.n {
            return Err(NumericsError::DimensionMismatch {
                expected: self.n,
                got: b.len(),
            });
        }
        let n = self.n;
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        // forward substitution (L has unit diagonal)
        for i in 1..n {
            let row = self.lu.row(i);
            let mut acc = x[i];
            for (j, xj) in x.iter().enumerate().take(i) {
                acc -= row[j] * xj;
            }
            x[i] = acc;
        }
        // back substitution
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let mut acc = x[i];
            for (j, xj) in x.iter().enumerate().take(n).skip(i + 1) {
                acc -= row[j] * xj;
            }
            x[i] = acc / row[i];
        }
        Ok(x)
    }
}

/// Solve A x = b for a single right-hand side.
pub fn solve_linear(a: &ComplexMatrix, b: &[Complex64]) -> Result<Vec<Complex64>, NumericsError> {
    LuFactors::factor(a)?.solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn solve_identity_returns_rhs() {
        let a = ComplexMatrix::identity(4);
        let b = vec![c(1.0, 2.0), c(-0.5, 0.0), c(3.0, -1.0), c(0.0, 0.25)];
        let x = solve_linear(&a, &b).unwrap();
        for (xi, bi) in x.iter().zip(&b) {
            assert!((xi - bi).norm() < 1e-15);
        }
    }

    #[test]
    fn solve_scaled_identity_halves() {
        let a = ComplexMatrix::identity(3).scale(c(2.0, 0.0));
        let b = vec![c(2.0, 4.0), c(-1.0, 0.0), c(0.0, 6.0)];
        let x = solve_linear(&a, &b).unwrap();
        for (xi, bi) in x.iter().zip(&b) {
            assert!((xi - bi / 2.0).norm() < 1e-15);
        }
    }

    #[test]
    fn solve_random_100x100_recovers_known_solution() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 100;
        // diagonally dominated so the system is well conditioned
        let a = ComplexMatrix::from_fn(n, n, |i, j| {
            let z = c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
            if i == j {
                z + c(n as f64, 0.0)
            } else {
                z
            }
        });
        let x_true: Vec<Complex64> = (0..n)
            .map(|_| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let b = a.matvec(&x_true);
        let x = solve_linear(&a, &b).unwrap();

        let bnorm = b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let resid = a
            .matvec(&x)
            .iter()
            .zip(&b)
            .map(|(ax, bi)| (ax - bi).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(
            resid <= 1e-9 * bnorm,
            "residual {resid:e} exceeds 1e-9 * |b| = {:e}",
            1e-9 * bnorm
        );
        let err = x
            .iter()
            .zip(&x_true)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-10, "max solution error {err:e}");
    }

    #[test]
    fn singular_matrix_reports_pivot_index() {
        // third row is a linear combination of the first two
        let mut a = ComplexMatrix::zeros(3, 3);
        a[(0, 0)] = c(1.0, 0.0);
        a[(0, 1)] = c(2.0, 0.0);
        a[(0, 2)] = c(3.0, 0.0);
        a[(1, 0)] = c(0.0, 1.0);
        a[(1, 1)] = c(1.0, 0.0);
        a[(1, 2)] = c(0.0, 0.0);
        for j in 0..3 {
            a[(2, j)] = a[(0, j)] + a[(1, j)].scale(2.0);
        }
        match LuFactors::factor(&a) {
            Err(NumericsError::SingularMatrix { pivot }) => assert_eq!(pivot, 2),
            other => panic!("expected SingularMatrix, got {other:?}"),
        }
    }

    #[test]
    fn dagger_and_matmul_agree_with_manual() {
        let a = ComplexMatrix::from_fn(2, 2, |i, j| c((i + 1) as f64, j as f64));
        let ad = a.dagger();
        assert_eq!(ad[(0, 1)], a[(1, 0)].conj());
        let prod = a.matmul(&ComplexMatrix::identity(2));
        assert_eq!(prod, a);
    }
}

trait ScaleExt {
    fn scale(self, s: f64) -> Complex64;
}
impl ScaleExt for Complex64 {
    fn scale(self, s: f64) -> Complex64 {
        Complex64::new(self.re * s, self.im * s)
    }
}
