use std::cmp::Ordering;

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use super::EigenvalueRecord;
use crate::numeric::arith::{binomial, rational_pow};
use crate::numeric::{big_rat, cmp_halfpower, rat, HalfPower, Rational};

/// Coefficients of the degree-4 spin polynomial
/// `1 - e1 X + e2 X^2 - e3 X^3 + e4 X^4` at one prime.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinEulerData {
    pub weight: u32,
    pub p: u64,
    pub e1: Rational,
    pub e2: Rational,
    pub e3: Rational,
    pub e4: Rational,
}

impl SpinEulerData {
    pub fn from_record(rec: &EigenvalueRecord) -> Self {
        let k = rec.weight as i64;
        let p = rec.p;
        let e1 = rec.mu_p.clone();
        let e2 = &rec.mu_p * &rec.mu_p - &rec.mu_p2 - rational_pow(p, 2 * k - 4);
        let e3 = rational_pow(p, 2 * k - 3) * &e1;
        let e4 = rational_pow(p, 4 * k - 6);
        SpinEulerData {
            weight: rec.weight,
            p,
            e1,
            e2,
            e3,
            e4,
        }
    }

    /// `p^{2k-4}`, the coefficient in the numerator `1 - p^{2k-4} X^2`.
    pub fn numerator_coeff(&self) -> Rational {
        rational_pow(self.p, 2 * self.weight as i64 - 4)
    }

    /// Power series coefficients of the generating function up to `X^max_r`.
    pub fn series(&self, max_r: usize) -> Vec<Rational> {
        let num = [rat(1), rat(0), -self.numerator_coeff()];
        let mut out: Vec<Rational> = Vec::with_capacity(max_r + 1);
        for r in 0..=max_r {
            let mut a = num.get(r).cloned().unwrap_or_else(Rational::zero);
            let terms = [
                (1, &self.e1, true),
                (2, &self.e2, false),
                (3, &self.e3, true),
                (4, &self.e4, false),
            ];
            for (lag, e, plus) in terms {
                if r >= lag {
                    let t = e * &out[r - lag];
                    if plus {
                        a += t;
                    } else {
                        a -= t;
                    }
                }
            }
            out.push(a);
        }
        out
    }
}

/// `mu(p^r)` for `r = 0..=max_r` from the spin generating function.
pub fn mu_sequence(rec: &EigenvalueRecord, max_r: usize) -> Vec<Rational> {
    SpinEulerData::from_record(rec).series(max_r)
}

/// First exponents at which the two growth bounds fail.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthReport {
    pub max_r: usize,
    /// `|mu(p^r)| <= (C(r+3,3) + C(r+1,3)/p) p^{r(k-3/2)}`
    pub sharp_first_failure: Option<usize>,
    /// `|mu(p^r)| <= (3/2) C(r+3,3) p^{r(k-3/2)}`
    pub weak_first_failure: Option<usize>,
}

impl GrowthReport {
    pub fn holds(&self) -> bool {
        self.sharp_first_failure.is_none() && self.weak_first_failure.is_none()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "max_r": self.max_r,
            "sharp_bound_first_failure": self.sharp_first_failure,
            "weak_bound_first_failure": self.weak_first_failure,
        })
    }
}

pub(crate) fn sharp_constant(r: usize, p: u64) -> Rational {
    let r = r as u64;
    big_rat(binomial(r + 3, 3)) + big_rat(binomial(r + 1, 3)) / rat(p as i64)
}

pub(crate) fn weak_constant(r: usize) -> Rational {
    big_rat(binomial(r as u64 + 3, 3)) * rat(3) / rat(2)
}

/// Tests both bounds exactly for every `r <= max_r`.
pub fn growth_check(rec: &EigenvalueRecord, max_r: usize) -> GrowthReport {
    let seq = mu_sequence(rec, max_r);
    let k = rec.weight as i64;
    let mut report = GrowthReport {
        max_r,
        sharp_first_failure: None,
        weak_first_failure: None,
    };
    for (r, mu) in seq.iter().enumerate() {
        let h = HalfPower::new(rec.p, r as i64 * (2 * k - 3));
        let size = mu.abs();
        if report.sharp_first_failure.is_none()
            && cmp_halfpower(&size, &sharp_constant(r, rec.p), h) == Ordering::Greater
        {
            report.sharp_first_failure = Some(r);
        }
        if report.weak_first_failure.is_none()
            && cmp_halfpower(&size, &weak_constant(r), h) == Ordering::Greater
        {
            report.weak_first_failure = Some(r);
        }
    }
    report
}

#[derive(Clone, Debug, PartialEq)]
pub struct PositivityReport {
    /// Sign of `mu(p^r)` for `r = 0..=max_r`.
    pub signs: Vec<i8>,
    /// Exponents `r` whose sign differs from the last nonzero sign before it.
    pub sign_changes: Vec<usize>,
}

impl PositivityReport {
    pub fn all_positive(&self) -> bool {
        self.signs.iter().all(|&s| s > 0)
    }

    pub fn to_json(&self) -> Value {
        let positive = self.signs.iter().filter(|&&s| s > 0).count();
        let negative = self.signs.iter().filter(|&&s| s < 0).count();
        json!({
            "max_r": self.signs.len().saturating_sub(1),
            "all_positive": self.all_positive(),
            "positive": positive,
            "negative": negative,
            "zero": self.signs.len() - positive - negative,
            "sign_changes": self.sign_changes,
        })
    }
}

pub fn positivity_scan(rec: &EigenvalueRecord, max_r: usize) -> PositivityReport {
    let signs: Vec<i8> = mu_sequence(rec, max_r)
        .iter()
        .map(|m| match m.cmp(&Rational::zero()) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        })
        .collect();
    let mut sign_changes = Vec::new();
    let mut last = 0i8;
    for (r, &s) in signs.iter().enumerate() {
        if s != 0 {
            if last != 0 && s != last {
                sign_changes.push(r);
            }
            last = s;
        }
    }
    PositivityReport {
        signs,
        sign_changes,
    }
}
