use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use super::arith::rational_pow;
use super::{rat, Rational};

/// The real number `p^(e/2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HalfPower {
    pub base: u64,
    pub exponent: i64,
}

impl HalfPower {
    pub fn new(base: u64, exponent: i64) -> Self {
        assert!(base >= 2);
        HalfPower { base, exponent }
    }

    /// `p^(e/2)` as `rational * sqrt(p)^odd`: returns the rational factor
    /// and whether a single `sqrt(p)` remains.
    pub fn split(&self) -> (Rational, bool) {
        let odd = self.exponent.rem_euclid(2) == 1;
        let int_part = (self.exponent - i64::from(odd)) / 2;
        (rational_pow(self.base, int_part), odd)
    }

    /// `(p^(e/2))^2 = p^e`, always rational.
    pub fn squared(&self) -> Rational {
        rational_pow(self.base, self.exponent)
    }
}

/// Orders `x` against `c * p^(e/2)` exactly: split by sign, then square.
pub fn cmp_halfpower(x: &Rational, c: &Rational, h: HalfPower) -> Ordering {
    let (scale, odd) = h.split();
    let y = c * scale;
    if !odd {
        return x.cmp(&y);
    }
    cmp_with_surd(x, &y, h.base)
}

/// Orders `x` against `y * sqrt(d)`.
pub(crate) fn cmp_with_surd(x: &Rational, y: &Rational, d: u64) -> Ordering {
    let sx = x.cmp(&Rational::zero());
    let sy = y.cmp(&Rational::zero());
    if sx != sy {
        return sx.cmp(&sy);
    }
    if sx == Ordering::Equal {
        return Ordering::Equal;
    }
    let lhs = x * x;
    let rhs = y * y * rat(d as i64);
    let mag = lhs.cmp(&rhs);
    if x.is_negative() {
        mag.reverse()
    } else {
        mag
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat_frac;
    use num_traits::ToPrimitive;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn reference_examples() {
        assert_eq!(
            cmp_halfpower(&rat(3), &rat(1), HalfPower::new(2, 2)),
            Ordering::Greater
        );
        assert_eq!(
            cmp_halfpower(&rat(240), &rat(4), HalfPower::new(2, 17)),
            Ordering::Less
        );
        assert_eq!(
            cmp_halfpower(&rat(-1), &rat(4), HalfPower::new(2, 17)),
            Ordering::Less
        );
    }

    #[test]
    fn equality_and_negative_exponents() {
        // 2^(-1/2) * 2 = sqrt 2, and 4 = 2 * 2^(2/2)
        assert_eq!(
            cmp_halfpower(&rat(4), &rat(2), HalfPower::new(2, 2)),
            Ordering::Equal
        );
        assert_eq!(
            cmp_halfpower(&rat(1), &rat(2), HalfPower::new(2, -1)),
            Ordering::Less
        );
        assert_eq!(
            cmp_halfpower(&rat_frac(7, 5), &rat(2), HalfPower::new(2, -1)),
            Ordering::Less
        );
        assert_eq!(
            cmp_halfpower(&rat_frac(3, 2), &rat(2), HalfPower::new(2, -1)),
            Ordering::Greater
        );
        assert_eq!(
            cmp_halfpower(&rat(0), &rat(0), HalfPower::new(3, 5)),
            Ordering::Equal
        );
        assert_eq!(
            cmp_halfpower(&rat(-5), &rat(-1), HalfPower::new(3, 3)),
            Ordering::Greater
        );
    }

    #[test]
    fn agrees_with_float_on_random_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let mut checked = 0;
        for _ in 0..1000 {
            let x = rat_frac(rng.gen_range(-100_000..100_000), rng.gen_range(1..100));
            let c = rat_frac(rng.gen_range(0..1000), rng.gen_range(1..50));
            let p = [2u64, 3, 5, 7, 11, 13][rng.gen_range(0..6)];
            let e = rng.gen_range(-6i64..14);
            let h = HalfPower::new(p, e);
            let xf = x.to_f64().unwrap();
            let yf = c.to_f64().unwrap() * (p as f64).powf(e as f64 / 2.0);
            let exact = cmp_halfpower(&x, &c, h);
            if (xf - yf).abs() > 1e-9 * (1.0 + xf.abs() + yf.abs()) {
                assert_eq!(
                    exact,
                    xf.partial_cmp(&yf).unwrap(),
                    "x={x} c={c} p={p} e={e}"
                );
                checked += 1;
            }
        }
        assert!(checked > 900);
    }
}
