use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};

use super::arith::{rational_squarefree, squarefree_decompose};
use super::{rat, Rational, Scalar};

/// Real quadratic number `a + b*sqrt(d)` with `d` square-free.
///
/// `d = 1` is the rational case and always carries `b = 0`. Elements with
/// `b = 0` are compatible with every field; mixing two genuinely different
/// fields is a programming error and panics.
#[derive(Clone, Debug)]
pub struct QuadExt {
    a: Rational,
    b: Rational,
    d: u64,
}

impl QuadExt {
    pub fn new(a: Rational, b: Rational, d: u64) -> Self {
        assert!(d >= 1, "radicand must be positive");
        if d == 1 || b.is_zero() {
            return QuadExt {
                a: a + b,
                b: Rational::zero(),
                d: 1,
            }
            .with_field(d);
        }
        let (c, free) = squarefree_decompose(&BigUint::from(d)).expect("small radicand");
        assert!(c.is_one(), "radicand {d} is not square-free");
        debug_assert_eq!(free, d);
        QuadExt { a, b, d }
    }

    fn with_field(mut self, d: u64) -> Self {
        self.d = d;
        self
    }

    pub fn rational(a: Rational) -> Self {
        QuadExt {
            a,
            b: Rational::zero(),
            d: 1,
        }
    }

    /// `sqrt(q)` for a nonnegative rational `q`.
    pub fn sqrt_of(q: &Rational) -> Option<Self> {
        if q.is_negative() {
            return None;
        }
        if q.is_zero() {
            return Some(Self::zero());
        }
        let (c, d) = rational_squarefree(q)?;
        Some(QuadExt::new(Rational::zero(), c, d as u64))
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    /// Square-free radicand; 1 for rational elements.
    pub fn radicand(&self) -> u64 {
        if self.b.is_zero() {
            1
        } else {
            self.d
        }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.a.clone())
    }

    pub fn conj(&self) -> Self {
        QuadExt {
            a: self.a.clone(),
            b: -self.b.clone(),
            d: self.d,
        }
    }

    /// `a^2 - d b^2`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * rat(self.d as i64)
    }

    pub fn trace(&self) -> Rational {
        &self.a + &self.a
    }

    /// Exact sign, computed without floating point.
    pub fn signum_exact(&self) -> Ordering {
        let sa = self.a.cmp(&Rational::zero());
        let sb = self.b.cmp(&Rational::zero());
        match (sa, sb) {
            (x, Ordering::Equal) => x,
            (Ordering::Equal, y) => y,
            (x, y) if x == y => x,
            (x, _) => {
                // opposite signs: |a| vs |b| sqrt(d)
                let a2 = &self.a * &self.a;
                let b2d = &self.b * &self.b * rat(self.d as i64);
                match a2.cmp(&b2d) {
                    Ordering::Greater => x,
                    Ordering::Less => x.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.a.to_f64().unwrap_or(f64::NAN)
            + self.b.to_f64().unwrap_or(f64::NAN) * (self.d as f64).sqrt()
    }

    fn common_field(&self, other: &Self) -> u64 {
        match (self.b.is_zero(), other.b.is_zero()) {
            (true, _) => other.d,
            (_, true) => self.d,
            _ => {
                assert_eq!(
                    self.d, other.d,
                    "arithmetic between Q(sqrt {}) and Q(sqrt {})",
                    self.d, other.d
                );
                self.d
            }
        }
    }
}

impl PartialEq for QuadExt {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && (self.b.is_zero() || self.d == other.d)
    }
}

impl Eq for QuadExt {}

impl PartialOrd for QuadExt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if !self.b.is_zero() && !other.b.is_zero() && self.d != other.d {
            return None;
        }
        Some((self.clone() - other.clone()).signum_exact())
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use super::format_rational;
        if self.b.is_zero() {
            write!(f, "{}", format_rational(&self.a))
        } else if self.a.is_zero() {
            write!(f, "({})*sqrt({})", format_rational(&self.b), self.d)
        } else {
            write!(
                f,
                "{} + ({})*sqrt({})",
                format_rational(&self.a),
                format_rational(&self.b),
                self.d
            )
        }
    }
}

impl From<Rational> for QuadExt {
    fn from(a: Rational) -> Self {
        QuadExt::rational(a)
    }
}

impl Add for QuadExt {
    type Output = QuadExt;
    fn add(self, rhs: QuadExt) -> QuadExt {
        let d = self.common_field(&rhs);
        QuadExt {
            a: self.a + rhs.a,
            b: self.b + rhs.b,
            d,
        }
    }
}

impl Sub for QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: QuadExt) -> QuadExt {
        let d = self.common_field(&rhs);
        QuadExt {
            a: self.a - rhs.a,
            b: self.b - rhs.b,
            d,
        }
    }
}

impl Mul for QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: QuadExt) -> QuadExt {
        &self * &rhs
    }
}

impl<'a> Mul<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: &QuadExt) -> QuadExt {
        let d = self.common_field(rhs);
        let bb = &self.b * &rhs.b;
        QuadExt {
            a: &self.a * &rhs.a + bb * rat(d as i64),
            b: &self.a * &rhs.b + &self.b * &rhs.a,
            d,
        }
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt {
            a: -self.a,
            b: -self.b,
            d: self.d,
        }
    }
}

impl Div for QuadExt {
    type Output = QuadExt;
    fn div(self, rhs: QuadExt) -> QuadExt {
        self * rhs.inv().expect("division by zero")
    }
}

impl Zero for QuadExt {
    fn zero() -> Self {
        QuadExt::rational(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QuadExt {
    fn one() -> Self {
        QuadExt::rational(Rational::one())
    }
}

impl Scalar for QuadExt {
    fn from_rational(r: Rational) -> Self {
        QuadExt::rational(r)
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(QuadExt {
            a: &self.a / &n,
            b: -&self.b / &n,
            d: self.d,
        })
    }
}
