//! The Maass lift and the coefficient relations that characterize its image.

use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;

use super::{SiegelFourierTable, SiegelIndex};
use crate::error::{Error, Result};
use crate::jacobi::JacobiForm;
use crate::numeric::arith::{divisors, exact_div, int_pow};
use crate::numeric::{big_rat, is_prime, Rational};

/// Largest discriminant `4nm - r^2` over reduced indices with `m <= bound`.
pub fn required_discriminant(bound: u64) -> u64 {
    4 * bound * bound
}

/// `A(n, r, m) = sum_{d | (n, r, m)} d^{k-1} c(nm/d^2, r/d)` on every
/// reduced index with `m <= bound`.
pub fn maass_lift(phi: &JacobiForm, bound: u64) -> Result<SiegelFourierTable> {
    let need = required_discriminant(bound);
    if phi.max_discriminant() < need {
        return Err(Error::truncation(
            format!("Maass lift to bound {bound}"),
            phi.max_discriminant(),
            need,
        ));
    }
    let k = phi.weight();
    SiegelFourierTable::try_from_fn(k, bound, |t| {
        let g = t.n.gcd(&t.r).gcd(&t.m) as u64;
        let mut acc = Rational::zero();
        for d in divisors(g) {
            let di = d as i64;
            let c = phi.coeff(t.n * t.m / (di * di), t.r / di)?;
            acc += big_rat(int_pow(d, k - 1)) * c;
        }
        Ok(acc)
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub index: SiegelIndex,
    pub lhs: Rational,
    pub rhs: Rational,
}

/// Outcome of a relation check: how many instances could be evaluated,
/// how many needed coefficients beyond the table, and which failed.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MaassReport {
    pub checked: usize,
    pub skipped: usize,
    pub violations: Vec<Violation>,
}

impl MaassReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    fn merge(mut self, other: MaassReport) -> MaassReport {
        self.checked += other.checked;
        self.skipped += other.skipped;
        self.violations.extend(other.violations);
        self
    }
}

enum Outcome {
    Checked(Option<Violation>),
    Skipped,
}

fn collect(outcomes: Vec<Outcome>) -> MaassReport {
    let mut report = MaassReport::default();
    for o in outcomes {
        match o {
            Outcome::Checked(v) => {
                report.checked += 1;
                report.violations.extend(v);
            }
            Outcome::Skipped => report.skipped += 1,
        }
    }
    report
}

/// `A(n, r, m) = sum_{d | (n, r, m)} d^{k-1} A(nm/d^2, r/d, 1)` at every
/// reduced index within the bound whose right-hand side is available.
pub fn check_maass_space(f: &SiegelFourierTable) -> MaassReport {
    let k = f.weight();
    let outcomes = SiegelIndex::reduced_up_to(f.bound())
        .into_par_iter()
        .map(|t| {
            let lhs = f.try_get(t).expect("reduced index within bound");
            let g = t.n.gcd(&t.r).gcd(&t.m) as u64;
            let mut rhs = Rational::zero();
            for d in divisors(g) {
                let di = d as i64;
                let Some(a) = f.try_get(SiegelIndex::new(t.n * t.m / (di * di), t.r / di, 1))
                else {
                    return Outcome::Skipped;
                };
                rhs += big_rat(int_pow(d, k - 1)) * a;
            }
            Outcome::Checked((lhs != rhs).then_some(Violation { index: t, lhs, rhs }))
        })
        .collect();
    collect(outcomes)
}

/// `A(np, r, m) + p^{k-1} A(n/p, r/p, m) = p^{k-1} A(n, r/p, m/p) + A(n, r, mp)`
/// for `1 <= n, m <= bound` and every `r` with `r^2 < 4nmp`, skipping
/// instances that need coefficients beyond the table. Non-integral indices
/// contribute 0.
pub fn check_maass_p_space(f: &SiegelFourierTable, p: u64) -> Result<MaassReport> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    let k = f.weight();
    let pk = big_rat(int_pow(p, k - 1));
    let p = p as i64;
    let bound = f.bound() as i64;
    let div_get = |n: i64, r: i64, m: i64, by: (i64, i64, i64)| -> Option<Rational> {
        match (exact_div(n, by.0), exact_div(r, by.1), exact_div(m, by.2)) {
            (Some(n), Some(r), Some(m)) => f.try_get(SiegelIndex::new(n, r, m)),
            _ => Some(Rational::zero()),
        }
    };
    let report = (1..=bound)
        .into_par_iter()
        .map(|n| {
            let mut outcomes = Vec::new();
            for m in 1..=bound {
                let mut r = 0;
                while r * r < 4 * n * m * p {
                    for r in if r == 0 { vec![0] } else { vec![r, -r] } {
                        let terms = (
                            f.try_get(SiegelIndex::new(n * p, r, m)),
                            div_get(n, r, m, (p, p, 1)),
                            div_get(n, r, m, (1, p, p)),
                            f.try_get(SiegelIndex::new(n, r, m * p)),
                        );
                        let outcome = match terms {
                            (Some(a), Some(b), Some(c), Some(d)) => {
                                let lhs = a + &pk * b;
                                let rhs = &pk * c + d;
                                Outcome::Checked((lhs != rhs).then_some(Violation {
                                    index: SiegelIndex::new(n, r, m),
                                    lhs,
                                    rhs,
                                }))
                            }
                            _ => Outcome::Skipped,
                        };
                        outcomes.push(outcome);
                    }
                    r += 1;
                }
            }
            collect(outcomes)
        })
        .reduce(MaassReport::default, MaassReport::merge);
    Ok(report)
}
