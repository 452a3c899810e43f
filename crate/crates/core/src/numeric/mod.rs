//! Exact arithmetic: big rationals, real quadratic numbers, half-integral
//! prime powers and the number-theoretic helpers the modular-forms code needs.

pub mod arith;
mod halfpower;
mod quad;

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub use arith::{is_prime, kronecker_symbol};
pub use halfpower::{cmp_halfpower, HalfPower};
pub use quad::QuadExt;

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

/// Field elements that can serve as series coefficients and matrix entries.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_rational(r: Rational) -> Self;

    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    /// First `len` coefficients of the product of two coefficient slices.
    fn convolve(a: &[Self], b: &[Self], len: usize) -> Vec<Self> {
        (0..len)
            .map(|n| {
                let lo = n.saturating_sub(b.len().saturating_sub(1));
                let hi = n.min(a.len().saturating_sub(1));
                let mut acc = Self::zero();
                for i in lo..=hi {
                    acc = acc + a[i].clone() * b[n - i].clone();
                }
                acc
            })
            .collect()
    }
}

impl Scalar for Rational {
    fn from_rational(r: Rational) -> Self {
        r
    }

    fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }

    /// Clears denominators and convolves over the integers.
    fn convolve(a: &[Self], b: &[Self], len: usize) -> Vec<Self> {
        use num_integer::Integer;
        use rayon::prelude::*;

        let lcm = |xs: &[Rational]| xs.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
        let (la, lb) = (lcm(a), lcm(b));
        let ia: Vec<BigInt> = a.iter().map(|x| (x * &la).to_integer()).collect();
        let ib: Vec<BigInt> = b.iter().map(|x| (x * &lb).to_integer()).collect();
        let scale = la * lb;
        (0..len)
            .into_par_iter()
            .map(|n| {
                if a.is_empty() || b.is_empty() || n > a.len() + b.len() - 2 {
                    return Rational::zero();
                }
                let lo = n.saturating_sub(ib.len() - 1);
                let hi = n.min(ia.len() - 1);
                let mut acc = BigInt::zero();
                for i in lo..=hi {
                    if !ia[i].is_zero() && !ib[n - i].is_zero() {
                        acc += &ia[i] * &ib[n - i];
                    }
                }
                Rational::new(acc, scale.clone())
            })
            .collect()
    }
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn big_rat(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

/// Parses `"123"`, `"-4/6"` and similar; the result is reduced.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok()?;
            let d = BigInt::from_str(d.trim()).ok()?;
            (!d.is_zero()).then(|| Rational::new(n, d))
        }
        None => BigInt::from_str(s).ok().map(Rational::from_integer),
    }
}

/// Decimal rendering: `"n"` for integers, `"n/d"` otherwise.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
