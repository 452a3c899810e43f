use std::fmt;

use num_traits::Zero;

use crate::numeric::arith::rational_sqrt;
use crate::numeric::{format_rational, rat, QuadExt, Rational, Scalar};

use super::Matrix;

/// Univariate polynomial with coefficients in ascending degree order.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<T: Scalar = Rational> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(T::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn eval_matrix(&self, m: &Matrix<T>) -> Matrix<T> {
        let n = m.rows();
        self.coeffs
            .iter()
            .rev()
            .fold(Matrix::zeros(n, n), |acc, c| {
                acc.mul(m).add(&Matrix::identity(n).scale(c))
            })
    }
}

impl Poly<Rational> {
    /// Discriminant of a quadratic `a x^2 + b x + c`.
    pub fn quadratic_discriminant(&self) -> Option<Rational> {
        (self.degree() == 2).then(|| {
            let [c, b, a] = [&self.coeffs[0], &self.coeffs[1], &self.coeffs[2]];
            b * b - rat(4) * a * c
        })
    }

    /// True for a quadratic with no rational root.
    pub fn is_irreducible_quadratic(&self) -> bool {
        self.quadratic_discriminant()
            .is_some_and(|d| rational_sqrt(&d).is_none())
    }

    /// Both roots of a quadratic with nonnegative discriminant, larger first.
    pub fn quadratic_real_roots(&self) -> Option<(QuadExt, QuadExt)> {
        let disc = self.quadratic_discriminant()?;
        let root = QuadExt::sqrt_of(&disc)?;
        let a2 = QuadExt::rational(rat(2) * &self.coeffs[2]);
        let minus_b = QuadExt::rational(-self.coeffs[1].clone());
        let inv = a2.inv()?;
        let r1 = (minus_b.clone() + root.clone()) * inv.clone();
        let r2 = (minus_b - root) * inv;
        if r1 >= r2 {
            Some((r1, r2))
        } else {
            Some((r2, r1))
        }
    }
}

impl fmt::Display for Poly<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() && self.coeffs.len() > 1 {
                continue;
            }
            let c = format_rational(c);
            terms.push(match i {
                0 => c,
                1 => format!("({c})x"),
                _ => format!("({c})x^{i}"),
            });
        }
        write!(f, "{}", terms.join(" + "))
    }
}
