use std::cmp::Ordering;
use std::fmt;

use serde_json::{json, Value};

use super::satake::{solve_satake, SatakeClass, SatakeParams};
use super::EigenvalueRecord;
use crate::numeric::arith::rational_pow;
use crate::numeric::{cmp_halfpower, rat, HalfPower};

/// The three single-prime conditions evaluated on eigenvalue data.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Condition {
    /// `mu(p) > 4 p^{k-3/2}`
    LargeMuP,
    /// `mu(p^2) > 10 p^{2k-3}`
    LargeMuP2,
    /// `mu(p^2) = mu(p)^2 - (p^{k-1} + p^{k-2}) mu(p) + p^{2k-2}`
    QuadraticRelation,
}

impl Condition {
    pub fn label(self) -> &'static str {
        match self {
            Condition::LargeMuP => "mu_p_threshold",
            Condition::LargeMuP2 => "mu_p2_threshold",
            Condition::QuadraticRelation => "quadratic_relation",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    SaitoKurokawa,
    NotSaitoKurokawa,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::SaitoKurokawa => "SK",
            Verdict::NotSaitoKurokawa => "not-SK",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub verdict: Verdict,
    pub conditions_fired: Vec<Condition>,
    pub satake: SatakeParams,
    /// The data cannot come from a level-one eigenform: a threshold
    /// condition fired without the exact relation, or the Satake data are
    /// of neither type.
    pub inconsistent: bool,
}

impl Certificate {
    pub fn fired(&self, c: Condition) -> bool {
        self.conditions_fired.contains(&c)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "verdict": self.verdict.to_string(),
            "conditions_fired": self.conditions_fired.iter().map(|c| c.label()).collect::<Vec<_>>(),
            "satake": self.satake.to_json(),
            "inconsistent": self.inconsistent,
        })
    }
}

pub fn lift_certificate(rec: &EigenvalueRecord) -> Certificate {
    let k = rec.weight as i64;
    let p = rec.p;
    let mut fired = Vec::new();
    if cmp_halfpower(&rec.mu_p, &rat(4), HalfPower::new(p, 2 * k - 3)) == Ordering::Greater {
        fired.push(Condition::LargeMuP);
    }
    if rec.mu_p2 > rat(10) * rational_pow(p, 2 * k - 3) {
        fired.push(Condition::LargeMuP2);
    }
    let lin = rational_pow(p, k - 1) + rational_pow(p, k - 2);
    let rhs = &rec.mu_p * &rec.mu_p - lin * &rec.mu_p + rational_pow(p, 2 * k - 2);
    let relation = rec.mu_p2 == rhs;
    if relation {
        fired.push(Condition::QuadraticRelation);
    }
    let satake = solve_satake(rec);
    let verdict = if relation {
        Verdict::SaitoKurokawa
    } else {
        Verdict::NotSaitoKurokawa
    };
    let inconsistent = (!relation && !fired.is_empty()) || satake.class == SatakeClass::Neither;
    Certificate {
        verdict,
        conditions_fired: fired,
        satake,
        inconsistent,
    }
}
