use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use super::EigenvalueRecord;
use crate::numeric::arith::{rational_pow, rational_sqrt};
use crate::numeric::{format_rational, rat, QuadExt, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SatakeClass {
    /// `x, y` real with `|x|, |y| <= 2`, i.e. `|alpha| = |beta| = 1`.
    Ramanujan,
    /// One of `x, y` equals `p^{1/2} + p^{-1/2}`.
    SaitoKurokawa,
    /// Neither: such data cannot come from a level-one eigenform.
    Neither,
}

impl fmt::Display for SatakeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SatakeClass::Ramanujan => "ramanujan",
            SatakeClass::SaitoKurokawa => "saito-kurokawa",
            SatakeClass::Neither => "neither",
        })
    }
}

/// The roots `x, y = (s sqrt(p) +- sqrt(disc)) / 2`, larger first when real.
#[derive(Clone, Debug, PartialEq)]
pub enum SatakeRoots {
    /// Both roots in `Q` or a single real quadratic field.
    Exact(QuadExt, QuadExt),
    /// Real roots generating a biquadratic field; kept symbolic.
    Surd,
    /// A complex-conjugate pair (`disc < 0`).
    Complex,
}

/// Satake data at `p` in terms of `x = alpha + 1/alpha`, `y = beta + 1/beta`.
///
/// `x + y = s sqrt(p)` and `xy = product` are rational data; `disc` is
/// `(x - y)^2 = s^2 p - 4 product`.
#[derive(Clone, Debug, PartialEq)]
pub struct SatakeParams {
    pub p: u64,
    pub s: Rational,
    pub product: Rational,
    pub disc: Rational,
    pub roots: SatakeRoots,
    pub class: SatakeClass,
}

impl SatakeParams {
    /// `x + y` as an element of `Q(sqrt p)`.
    pub fn sum(&self) -> QuadExt {
        QuadExt::new(Rational::zero(), self.s.clone(), self.p)
    }

    fn root_strings(&self) -> (String, String) {
        let half = |sign: &str| {
            format!(
                "({} * sqrt({}) {sign} sqrt({})) / 2",
                format_rational(&self.s),
                self.p,
                format_rational(&self.disc)
            )
        };
        match &self.roots {
            SatakeRoots::Exact(x, y) => (x.to_string(), y.to_string()),
            SatakeRoots::Surd | SatakeRoots::Complex => (half("+"), half("-")),
        }
    }

    pub fn to_json(&self) -> Value {
        let (x, y) = self.root_strings();
        json!({
            "p": self.p,
            "x": x,
            "y": y,
            "sum_over_sqrt_p": format_rational(&self.s),
            "product": format_rational(&self.product),
            "discriminant": format_rational(&self.disc),
            "real": !matches!(self.roots, SatakeRoots::Complex),
            "class": self.class.to_string(),
        })
    }
}

/// Recovers `{x, y}` from `mu_p = p^{k-3/2}(x + y)` and
/// `mu_p2 = p^{2k-3}(x^2 + xy + y^2 - 2 - 1/p)`.
pub fn solve_satake(rec: &EigenvalueRecord) -> SatakeParams {
    let k = rec.weight as i64;
    let p = rec.p;
    let pr = rat(p as i64);
    // u = x + y = s sqrt(p), v = mu_p2 / p^{2k-3}
    let s = &rec.mu_p / rational_pow(p, k - 1);
    let u2 = &s * &s * &pr;
    let v = &rec.mu_p2 / rational_pow(p, 2 * k - 3);
    let product = &u2 - v - rat(2) - pr.recip();
    let disc = &u2 - rat(4) * &product;

    let roots = if disc.is_negative() {
        SatakeRoots::Complex
    } else if let Some(q) = rational_sqrt(&disc) {
        let half = rat(1) / rat(2);
        SatakeRoots::Exact(
            QuadExt::new(&q * &half, &s * &half, p),
            QuadExt::new(-&q * &half, &s * &half, p),
        )
    } else if let Some(t) = rational_sqrt(&(&disc / &pr)) {
        let half = rat(1) / rat(2);
        SatakeRoots::Exact(
            QuadExt::new(Rational::zero(), (&s + &t) * &half, p),
            QuadExt::new(Rational::zero(), (&s - &t) * &half, p),
        )
    } else if s.is_zero() {
        match QuadExt::sqrt_of(&(&disc / rat(4))) {
            Some(r) => SatakeRoots::Exact(r.clone(), -r),
            None => SatakeRoots::Surd,
        }
    } else {
        SatakeRoots::Surd
    };

    // Z0 = (p + 1)/sqrt(p) is a root iff Z0^2 - u Z0 + product = 0, which is rational
    let sk =
        (&pr + rat(1)) * (&pr + rat(1)) / &pr - &s * (&pr + rat(1)) + &product == Rational::zero();
    // real roots in [-2, 2]: f(2) >= 0, f(-2) >= 0 and the vertex u/2 in [-2, 2]
    let four_plus = rat(4) + &product;
    let ramanujan = !disc.is_negative()
        && u2 <= rat(16)
        && !four_plus.is_negative()
        && &four_plus * &four_plus >= rat(4) * &u2;
    let class = match (sk, ramanujan) {
        (true, _) => SatakeClass::SaitoKurokawa,
        (false, true) => SatakeClass::Ramanujan,
        (false, false) => SatakeClass::Neither,
    };
    SatakeParams {
        p,
        s,
        product,
        disc,
        roots,
        class,
    }
}

/// Reassembles `(mu_p, mu_p2)` from exact roots via the defining formulas.
pub fn eigenvalues_from_roots(k: u32, p: u64, x: &QuadExt, y: &QuadExt) -> (QuadExt, QuadExt) {
    let k = k as i64;
    let sqrt_p = QuadExt::new(Rational::zero(), rat(1), p);
    let scale1 = QuadExt::rational(rational_pow(p, k - 2)) * sqrt_p;
    let scale2 = QuadExt::rational(rational_pow(p, 2 * k - 3));
    let mu_p = scale1 * (x.clone() + y.clone());
    let inner = x.clone() * x.clone() + x.clone() * y.clone() + y.clone() * y.clone()
        - QuadExt::rational(rat(2) + rat(p as i64).recip());
    (mu_p, scale2 * inner)
}

/// Orders the two real roots; complex or symbolic roots are left alone.
pub fn real_roots_ordered(params: &SatakeParams) -> Option<(QuadExt, QuadExt)> {
    match &params.roots {
        SatakeRoots::Exact(x, y) => Some(if x.partial_cmp(y) == Some(Ordering::Less) {
            (y.clone(), x.clone())
        } else {
            (x.clone(), y.clone())
        }),
        _ => None,
    }
}
