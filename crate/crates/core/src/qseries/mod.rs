//! Truncated q-expansions and the exact linear algebra used on their
//! coefficient vectors.

mod linalg;
mod poly;

pub use linalg::{quadratic_eigensystem, Matrix, RatMatrix};
pub use poly::Poly;

use std::fmt;

use num_traits::Zero;

use crate::numeric::{Rational, Scalar};

/// Power series `sum c_n q^n` known exactly for `0 <= n <= truncation`.
#[derive(Clone, Debug, PartialEq)]
pub struct QSeries<T: Scalar = Rational> {
    coeffs: Vec<T>,
}

impl<T: Scalar> QSeries<T> {
    /// Series whose truncation bound is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<T>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a series needs at least its constant term"
        );
        QSeries { coeffs }
    }

    pub fn from_fn(truncation: usize, f: impl FnMut(usize) -> T) -> Self {
        QSeries::new((0..=truncation).map(f).collect())
    }

    pub fn zero(truncation: usize) -> Self {
        QSeries::from_fn(truncation, |_| T::zero())
    }

    pub fn one(truncation: usize) -> Self {
        QSeries::from_fn(truncation, |n| if n == 0 { T::one() } else { T::zero() })
    }

    /// Largest exponent whose coefficient is known.
    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `q^n`, or `None` beyond the truncation bound.
    pub fn get(&self, n: usize) -> Option<&T> {
        self.coeffs.get(n)
    }

    /// Coefficient of `q^n`; panics beyond the truncation bound.
    pub fn coeff(&self, n: usize) -> &T {
        self.coeffs.get(n).unwrap_or_else(|| {
            panic!(
                "coefficient q^{n} requested from a series truncated at {}",
                self.truncation()
            )
        })
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn truncate(&self, truncation: usize) -> Self {
        let n = truncation.min(self.truncation());
        QSeries::new(self.coeffs[..=n].to_vec())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.truncation().min(other.truncation());
        QSeries::from_fn(n, |i| self.coeffs[i].clone() + other.coeffs[i].clone())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.truncation().min(other.truncation());
        QSeries::from_fn(n, |i| self.coeffs[i].clone() - other.coeffs[i].clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        QSeries::new(self.coeffs.iter().map(|x| c.clone() * x.clone()).collect())
    }

    /// Cauchy product valid to the smaller of the two truncations.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.truncation().min(other.truncation());
        QSeries::new(T::convolve(&self.coeffs[..=n], &other.coeffs[..=n], n + 1))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = QSeries::one(self.truncation());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Linear combination `sum c_i s_i`, truncated to the shortest input.
    pub fn linear_combination(terms: &[(T, &QSeries<T>)]) -> Option<Self> {
        let n = terms.iter().map(|(_, s)| s.truncation()).min()?;
        Some(QSeries::from_fn(n, |i| {
            terms.iter().fold(T::zero(), |acc, (c, s)| {
                acc + c.clone() * s.coeffs[i].clone()
            })
        }))
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> QSeries<U> {
        QSeries::new(self.coeffs.iter().map(f).collect())
    }
}

/// Row-reduces the coefficient vectors of `series` (over their common
/// truncation) into a reduced echelon basis of their span.
///
/// Returns the nonzero echelon rows together with their pivot exponents;
/// each basis series is 1 at its own pivot and 0 at every other pivot.
pub fn echelon_basis<T: Scalar>(series: &[QSeries<T>]) -> (Vec<QSeries<T>>, Vec<usize>) {
    let Some(n) = series.iter().map(QSeries::truncation).min() else {
        return (Vec::new(), Vec::new());
    };
    let m = Matrix::from_fn(series.len(), n + 1, |i, j| series[i].coeffs[j].clone());
    let (r, pivots) = m.rref();
    let basis = (0..pivots.len())
        .map(|i| QSeries::new(r.row(i).to_vec()))
        .collect();
    (basis, pivots)
}

/// Coordinates of `f` in an echelon basis, read off at the pivots and then
/// verified on every coefficient the inputs share. `None` if `f` is not in
/// the span there.
pub fn coordinates<T: Scalar>(
    f: &QSeries<T>,
    basis: &[QSeries<T>],
    pivots: &[usize],
) -> Option<Vec<T>> {
    let coords: Vec<T> = pivots
        .iter()
        .map(|&p| f.get(p).cloned())
        .collect::<Option<_>>()?;
    let terms: Vec<(T, &QSeries<T>)> = coords.iter().cloned().zip(basis.iter()).collect();
    let recon = match QSeries::linear_combination(&terms) {
        Some(s) => s,
        None => QSeries::zero(f.truncation()),
    };
    let n = recon.truncation().min(f.truncation());
    (recon.truncate(n) == f.truncate(n)).then_some(coords)
}

impl<T: Scalar + fmt::Display> fmt::Display for QSeries<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match n {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})q")?,
                _ => write!(f, "({c})q^{n}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.truncation() + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{rat, rat_frac, QuadExt};
    use proptest::prelude::*;

    fn series(cs: &[i64]) -> QSeries {
        QSeries::new(cs.iter().map(|&c| rat(c)).collect())
    }

    #[test]
    fn difference_of_squares() {
        let a = series(&[1, 1, 0, 0]);
        let b = series(&[1, -1, 0, 0]);
        assert_eq!(a.mul(&b), series(&[1, 0, -1, 0]));
    }

    #[test]
    fn identity_and_truncation() {
        let a = series(&[3, 1, 4, 1, 5]);
        assert_eq!(a.mul(&QSeries::one(4)), a);
        let short = series(&[1, 1]);
        assert_eq!(a.mul(&short).truncation(), 1);
        assert_eq!(a.get(5), None);
        assert_eq!(a.valuation(), Some(0));
    }

    #[test]
    fn rational_and_generic_convolution_agree() {
        let a = QSeries::new(vec![
            rat_frac(1, 2),
            rat_frac(-3, 7),
            rat(5),
            rat_frac(2, 9),
        ]);
        let b = QSeries::new(vec![rat_frac(4, 3), rat(0), rat_frac(1, 5), rat(-1)]);
        let fast = a.mul(&b);
        let qa = a.map(|x| QuadExt::rational(x.clone()));
        let qb = b.map(|x| QuadExt::rational(x.clone()));
        let slow = qa.mul(&qb);
        assert_eq!(slow, fast.map(|x| QuadExt::rational(x.clone())));
    }

    #[test]
    fn echelon_and_coordinates() {
        let a = series(&[0, 1, 2, 3, 4]);
        let b = series(&[0, 2, 5, 7, 9]);
        let (basis, pivots) = echelon_basis(&[a.clone(), b.clone()]);
        assert_eq!(pivots, vec![1, 2]);
        let c = a.scale(&rat(3)).sub(&b.scale(&rat(2)));
        let coords = coordinates(&c, &basis, &pivots).unwrap();
        assert_eq!(
            QSeries::linear_combination(&[
                (coords[0].clone(), &basis[0]),
                (coords[1].clone(), &basis[1])
            ])
            .unwrap(),
            c
        );
        assert!(coordinates(&series(&[0, 0, 0, 0, 1]), &basis, &pivots).is_none());
    }

    #[test]
    fn power_matches_repeated_product() {
        let a = series(&[1, 2, -1, 0, 3, 1]);
        assert_eq!(a.pow(3), a.mul(&a).mul(&a));
        assert_eq!(a.pow(0), QSeries::one(5));
    }

    fn arb_series() -> impl Strategy<Value = QSeries> {
        prop::collection::vec((-20i64..20, 1i64..5), 2..10)
            .prop_map(|v| QSeries::new(v.into_iter().map(|(n, d)| rat_frac(n, d)).collect()))
    }

    proptest! {
        #[test]
        fn mul_commutative_associative(a in arb_series(), b in arb_series(), c in arb_series()) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }
    }
}
