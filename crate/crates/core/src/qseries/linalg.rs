use std::fmt;

use crate::error::{Error, Result};
use num_traits::Zero;

use crate::numeric::{rat, QuadExt, Rational, Scalar};

use super::Poly;

/// Dense row-major matrix over an exact field.
#[derive(Clone, PartialEq)]
pub struct Matrix<T: Scalar = Rational> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type RatMatrix = Matrix<Rational>;

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(T::zero(), |acc, k| {
                acc + self[(i, k)].clone() * other[(k, j)].clone()
            })
        })
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() + other[(i, j)].clone()
        })
    }

    pub fn scale(&self, c: &T) -> Self {
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            c.clone() * self[(i, j)].clone()
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(T::is_zero)
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m[(r, j)].clone() * inv.clone();
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    let v = m[(i, j)].clone() - f.clone() * m[(r, j)].clone();
                    m[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : M v = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<T>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![T::zero(); self.cols];
                v[f] = T::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r[(row, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Monic characteristic polynomial `det(xI - M)` by Faddeev-LeVerrier.
    pub fn char_poly(&self) -> Result<Poly<T>> {
        if !self.is_square() {
            return Err(Error::invalid(format!(
                "characteristic polynomial of a non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut coeffs = vec![T::zero(); n + 1];
        coeffs[n] = T::one();
        let mut aux = Matrix::zeros(n, n);
        for k in 1..=n {
            aux = self
                .mul(&aux)
                .add(&Matrix::identity(n).scale(&coeffs[n - k + 1]));
            let tr = self.mul(&aux).trace();
            let kk = T::from_rational(rat(k as i64)).inv().unwrap();
            coeffs[n - k] = -(tr * kk);
        }
        Ok(Poly::new(coeffs))
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

/// Eigenpairs of a rational matrix of size at most 2 with distinct real
/// eigenvalues, larger eigenvalue first. Each eigenvector is scaled so its
/// first nonzero entry is 1.
pub fn quadratic_eigensystem(m: &RatMatrix) -> Result<Vec<(QuadExt, Vec<QuadExt>)>> {
    let n = m.rows();
    let chi = m.char_poly()?;
    let eigenvalues = match n {
        0 => return Ok(Vec::new()),
        1 => vec![QuadExt::rational(m[(0, 0)].clone())],
        2 => {
            let (a, b) = chi
                .quadratic_real_roots()
                .ok_or_else(|| Error::Inconsistent("non-real Hecke eigenvalues".into()))?;
            if a == b {
                return Err(Error::Inconsistent("repeated Hecke eigenvalue".into()));
            }
            vec![a, b]
        }
        _ => {
            return Err(Error::UnsupportedField {
                degree: chi.degree(),
            })
        }
    };
    let mq = Matrix::from_fn(n, n, |i, j| QuadExt::rational(m[(i, j)].clone()));
    eigenvalues
        .into_iter()
        .map(|lambda| {
            let shifted = mq.add(&Matrix::identity(n).scale(&-lambda.clone()));
            let ker = shifted.kernel();
            let [v] = ker.as_slice() else {
                return Err(Error::Inconsistent("eigenspace is not a line".into()));
            };
            let lead = v
                .iter()
                .find(|x| !Zero::is_zero(*x))
                .and_then(Scalar::inv)
                .expect("nonzero kernel vector");
            let v = v.iter().map(|x| x.clone() * lead.clone()).collect();
            Ok((lambda, v))
        })
        .collect()
}

impl<T: Scalar> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T: Scalar> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Scalar> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[T]> = (0..self.rows).map(|i| self.row(i)).collect();
        f.debug_list().entries(rows).finish()
    }
}
