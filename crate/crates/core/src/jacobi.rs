//! Index-one cuspidal Jacobi forms, stored through `c(n, r) = c(4n - r^2)`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::kohnen::PlusSpaceForm;
use crate::numeric::Rational;

/// Jacobi cusp form of weight `k` and index 1, kept as its table of
/// coefficients by discriminant `D = 4n - r^2` for `0 <= D <= max_discriminant`.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiForm {
    weight: u32,
    by_discriminant: Vec<Rational>,
}

impl JacobiForm {
    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn index(&self) -> u32 {
        1
    }

    pub fn max_discriminant(&self) -> u64 {
        (self.by_discriminant.len() - 1) as u64
    }

    /// `c(D)`, the common value of `c(n, r)` with `4n - r^2 = D`.
    pub fn coeff_by_discriminant(&self, d: i64) -> Result<Rational> {
        if d <= 0 {
            return Ok(Rational::zero());
        }
        self.by_discriminant
            .get(d as usize)
            .cloned()
            .ok_or_else(|| {
                Error::truncation("Jacobi coefficient", self.max_discriminant(), d as u64)
            })
    }

    /// `c(n, r)`; zero off the cusp, an error when `4n - r^2` is beyond the table.
    pub fn coeff(&self, n: i64, r: i64) -> Result<Rational> {
        self.coeff_by_discriminant(4 * n - r * r)
    }
}

/// Eichler-Zagier map: `c(n, r) = c_g(4n - r^2)`.
pub fn ez_lift(g: &PlusSpaceForm) -> JacobiForm {
    JacobiForm {
        weight: g.k(),
        by_discriminant: g.expansion().coeffs().to_vec(),
    }
}
