//! Elementary number theory on machine and big integers.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rational;
use crate::error::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&m| is_prime(m)).collect()
}

/// Positive divisors in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Divisor power sum `sigma_k(n)`.
pub fn sigma(k: u32, n: u64) -> BigInt {
    divisors(n)
        .into_iter()
        .map(|d| BigInt::from(d).pow(k))
        .sum()
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Exact `p^e` for a possibly negative exponent.
pub fn rational_pow(p: u64, e: i64) -> Rational {
    let base = BigInt::from(p).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        Rational::from_integer(base)
    } else {
        Rational::new(BigInt::one(), base)
    }
}

pub fn int_pow(p: u64, e: u32) -> BigInt {
    BigInt::from(p).pow(e)
}

/// Bernoulli number `B_n` with the convention `B_1 = -1/2`.
pub fn bernoulli(n: usize) -> Rational {
    let mut b: Vec<Rational> = Vec::with_capacity(n + 1);
    b.push(Rational::one());
    for m in 1..=n {
        let mut acc = Rational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += Rational::from_integer(binomial(m as u64 + 1, j as u64)) * bj;
        }
        b.push(-acc / Rational::from_integer(BigInt::from(m + 1)));
    }
    b.pop().unwrap()
}

/// Kronecker symbol `(a/n)`, the extension of the Jacobi symbol to all nonzero `n`.
pub fn kronecker_symbol(a: i64, n: i64) -> Result<i32> {
    if n == 0 {
        return Err(Error::invalid("kronecker symbol (a/0) is undefined"));
    }
    let a = a as i128;
    let mut n = n as i128;
    let mut sign = 1;
    if n < 0 {
        n = -n;
        if a < 0 {
            sign = -sign;
        }
    }
    let v = n.trailing_zeros();
    if v > 0 {
        if a % 2 == 0 {
            return Ok(0);
        }
        if v % 2 == 1 {
            sign *= kronecker_two(a);
        }
        n >>= v;
    }
    Ok(sign * jacobi(a.rem_euclid(n), n))
}

/// `(a/2)`: 0 for even `a`, +1 for `a = ±1 mod 8`, -1 for `a = ±3 mod 8`.
fn kronecker_two(a: i128) -> i32 {
    match a.rem_euclid(8) {
        1 | 7 => 1,
        3 | 5 => -1,
        _ => 0,
    }
}

/// Jacobi symbol for `0 <= a` and odd positive `n`.
fn jacobi(mut a: i128, mut n: i128) -> i32 {
    debug_assert!(n > 0 && n % 2 == 1);
    let mut t = 1;
    a %= n;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Exact square root of a nonnegative integer, if it is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Exact square root of a rational, if it is the square of a rational.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    let num = exact_sqrt(q.numer())?;
    let den = exact_sqrt(q.denom())?;
    Some(Rational::new(num, den))
}

const TRIAL_LIMIT: u64 = 1_000_000;

/// Writes `n = c^2 * d` with `d` square-free.
///
/// Returns `None` when trial division up to 10^6 leaves a cofactor whose
/// square-freeness cannot be decided cheaply.
pub fn squarefree_decompose(n: &BigUint) -> Option<(BigUint, u64)> {
    if n.is_zero() {
        return None;
    }
    let mut rest = n.clone();
    let mut square = BigUint::one();
    let mut free = BigUint::one();
    let mut p = 2u64;
    while p <= TRIAL_LIMIT && BigUint::from(p) * BigUint::from(p) <= rest {
        let bp = BigUint::from(p);
        let mut e = 0;
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            e += 1;
        }
        if e > 0 {
            square *= bp.pow(e / 2);
            if e % 2 == 1 {
                free *= &bp;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !rest.is_one() {
        let r = rest.sqrt();
        if &r * &r == rest {
            square *= r;
        } else if rest < BigUint::from(TRIAL_LIMIT) * BigUint::from(TRIAL_LIMIT)
            || BigUint::from(p) * BigUint::from(p) > rest
        {
            // no prime factor below the trial limit, so `rest` is prime or a
            // product of two distinct large primes
            free *= rest;
        } else {
            return None;
        }
    }
    Some((square, free.to_u64()?))
}

/// Writes a nonzero rational `q` as `c^2 * d` with `c` rational and `d` a
/// square-free integer carrying the sign of `q`.
pub fn rational_squarefree(q: &Rational) -> Option<(Rational, i64)> {
    if q.is_zero() {
        return None;
    }
    // q = a/b = a*b / b^2
    let prod = (q.numer() * q.denom()).abs().to_biguint()?;
    let (c, d) = squarefree_decompose(&prod)?;
    let c = Rational::new(BigInt::from(c), q.denom().clone());
    let d = i64::try_from(d).ok()?;
    Some((c, if q.is_negative() { -d } else { d }))
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

/// `Some(a / d)` when `d` divides `a`.
pub fn exact_div(a: i64, d: i64) -> Option<i64> {
    (a % d == 0).then(|| a / d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn legendre_brute(a: i64, p: i64) -> i32 {
        let a = a.rem_euclid(p);
        if a == 0 {
            return 0;
        }
        if (1..p).any(|x| (x * x) % p == a) {
            1
        } else {
            -1
        }
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker_symbol(1, 3).unwrap(), 1);
        assert_eq!(kronecker_symbol(2, 7).unwrap(), 1);
        assert_eq!(kronecker_symbol(3, 7).unwrap(), -1);
        assert!(kronecker_symbol(5, 0).is_err());
    }

    #[test]
    fn kronecker_matches_legendre_for_small_primes() {
        for p in [3i64, 5, 7, 11, 13, 37] {
            for a in -50..50 {
                assert_eq!(
                    kronecker_symbol(a, p).unwrap(),
                    legendre_brute(a, p),
                    "({a}/{p})"
                );
            }
        }
    }

    #[test]
    fn kronecker_at_two_and_negative_modulus() {
        assert_eq!(kronecker_symbol(-3, 2).unwrap(), -1);
        assert_eq!(kronecker_symbol(-7, 2).unwrap(), 1);
        assert_eq!(kronecker_symbol(-4, 2).unwrap(), 0);
        assert_eq!(kronecker_symbol(-1, -1).unwrap(), -1);
        assert_eq!(kronecker_symbol(3, -7).unwrap(), -1);
        assert_eq!(kronecker_symbol(-3, -7).unwrap(), -1);
    }

    proptest::proptest! {
        #[test]
        fn kronecker_multiplicative_in_numerator(a1 in -500i64..500, a2 in -500i64..500, half in 0i64..200) {
            let n = 2 * half + 1;
            let lhs = kronecker_symbol(a1 * a2, n).unwrap();
            let rhs = kronecker_symbol(a1, n).unwrap() * kronecker_symbol(a2, n).unwrap();
            proptest::prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(
            bernoulli(4),
            Rational::new(BigInt::from(-1), BigInt::from(30))
        );
        assert_eq!(
            bernoulli(6),
            Rational::new(BigInt::from(1), BigInt::from(42))
        );
        assert_eq!(
            bernoulli(12),
            Rational::new(BigInt::from(-691), BigInt::from(2730))
        );
    }

    #[test]
    fn squarefree_parts() {
        let (c, d) = squarefree_decompose(&BigUint::from(72u32)).unwrap();
        assert_eq!((c, d), (BigUint::from(6u32), 2));
        let q = Rational::new(BigInt::from(-12), BigInt::from(5));
        let (c, d) = rational_squarefree(&q).unwrap();
        assert_eq!(d, -15);
        assert_eq!(&c * &c * Rational::from_integer(BigInt::from(d)), q);
    }

    #[test]
    fn small_helpers() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(sigma(3, 2), BigInt::from(9));
        assert_eq!(binomial(6, 3), BigInt::from(20));
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert_eq!(exact_div(7, 2), None);
        assert_eq!(exact_div(-8, 2), Some(-4));
    }
}
