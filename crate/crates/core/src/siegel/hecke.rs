//! Hecke operators `T(m)` on Fourier tables, built from explicit right-coset
//! representatives of the integral symplectic similitudes of multiplier `m`.
//!
//! Every coset has a representative `M = [[A, W A^{-t}], [0, m A^{-t}]]` with
//! `A = [[a, b], [0, d]]` in Hermite normal form (`0 <= b < d`) and `W`
//! symmetric modulo `m`. With the normalization
//! `T(m)F = m^{2k-3} sum det(D)^{-k} F((AZ + B) D^{-1})`, the coset family of
//! a fixed `A` sends the coefficient at `T'` to
//! `det(A)^k / m^3 * sum_W e(tr(TW)/m) * A(T)` with `T = m A^{-t} T' A^{-1}`,
//! and the character sum is either the family size or 0.

use num_integer::Integer;
use num_traits::Zero;

use super::{SiegelFourierTable, SiegelIndex};
use crate::error::{Error, Result};
use crate::numeric::arith::{divisors, int_pow};
use crate::numeric::{big_rat, is_prime, Rational};

pub type Mat4 = [[i64; 4]; 4];

/// Right cosets `Gamma M` inside one double coset `Gamma g Gamma`.
#[derive(Clone, Debug, PartialEq)]
pub struct HeckeDoubleCoset {
    pub similitude: u64,
    /// Symplectic elementary divisors `(d1, d2, d3, d4)` of `g`, with
    /// `d1 d3 = d2 d4 = similitude`.
    pub elementary_divisors: [u64; 4],
    pub representatives: Vec<Mat4>,
}

impl HeckeDoubleCoset {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }
}

/// All `W` for one upper-left block `A`, as a subgroup of symmetric
/// matrices modulo the similitude, stored as `(w1, w2, w3)`.
struct Family {
    a: i64,
    b: i64,
    d: i64,
    group: Vec<[i64; 3]>,
    generators: Vec<[i64; 3]>,
}

impl Family {
    fn det(&self) -> i64 {
        self.a * self.d
    }

    fn matrix(&self, lambda: i64, w: [i64; 3]) -> Mat4 {
        let (a, b, d) = (self.a, self.b, self.d);
        let det = a * d;
        // A^{-t} = [[d, 0], [-b, a]] / det
        let ait = [[d, 0], [-b, a]];
        let wm = [[w[0], w[1]], [w[1], w[2]]];
        let mut m = [[0i64; 4]; 4];
        m[0][0] = a;
        m[0][1] = b;
        m[1][1] = d;
        for i in 0..2 {
            for j in 0..2 {
                let bij: i64 = (0..2).map(|l| wm[i][l] * ait[l][j]).sum();
                m[i][j + 2] = bij / det;
                m[i + 2][j + 2] = lambda * ait[i][j] / det;
            }
        }
        m
    }
}

fn families(lambda: i64) -> Vec<Family> {
    let divs: Vec<i64> = divisors(lambda as u64)
        .into_iter()
        .map(|x| x as i64)
        .collect();
    let mut out = Vec::new();
    for &a in &divs {
        for &d in &divs {
            for b in 0..d {
                if (lambda * b) % (a * d) != 0 {
                    continue;
                }
                let det = a * d;
                let mut group = Vec::new();
                for w1 in 0..lambda {
                    for w2 in 0..lambda {
                        for w3 in 0..lambda {
                            // W A^{-t} = [[w1 d - w2 b, w2 a], [w2 d - w3 b, w3 a]] / det
                            if (w1 * d - w2 * b) % det == 0
                                && (w2 * a) % det == 0
                                && (w2 * d - w3 * b) % det == 0
                                && (w3 * a) % det == 0
                            {
                                group.push([w1, w2, w3]);
                            }
                        }
                    }
                }
                let generators = generators(&group, lambda);
                out.push(Family {
                    a,
                    b,
                    d,
                    group,
                    generators,
                });
            }
        }
    }
    out
}

/// A generating set of a subgroup of `(Z/lambda)^3`, chosen greedily.
fn generators(group: &[[i64; 3]], lambda: i64) -> Vec<[i64; 3]> {
    let mut span = std::collections::HashSet::from([[0i64; 3]]);
    let mut gens = Vec::new();
    for w in group {
        if span.contains(w) {
            continue;
        }
        gens.push(*w);
        let mut next = span.clone();
        for s in &span {
            for j in 1..lambda {
                next.insert([0, 1, 2].map(|i| (s[i] + j * w[i]).rem_euclid(lambda)));
            }
        }
        span = next;
    }
    gens
}

/// Every right coset of similitude `lambda`, over all double cosets.
pub fn right_cosets(lambda: u64) -> Result<Vec<Mat4>> {
    if lambda == 0 {
        return Err(Error::invalid("similitude must be positive"));
    }
    let l = lambda as i64;
    Ok(families(l)
        .iter()
        .flat_map(|f| f.group.iter().map(move |w| f.matrix(l, *w)))
        .collect())
}

fn gcd_all(xs: impl IntoIterator<Item = i64>) -> i64 {
    xs.into_iter().fold(0, |g, x| g.gcd(&x))
}

/// Symplectic elementary divisors `(d1, d2, lambda/d1, lambda/d2)`, read
/// off from the gcds of the entries and of the 2x2 minors.
pub fn elementary_divisors(m: &Mat4, lambda: u64) -> [u64; 4] {
    let d1 = gcd_all(m.iter().flatten().copied());
    let mut minors = Vec::new();
    for r in 0..4 {
        for s in r + 1..4 {
            for c in 0..4 {
                for t in c + 1..4 {
                    minors.push(m[r][c] * m[s][t] - m[r][t] * m[s][c]);
                }
            }
        }
    }
    let d12 = gcd_all(minors);
    let (d1, d2) = (d1 as u64, (d12 / d1) as u64);
    [d1, d2, lambda / d1, lambda / d2]
}

fn group_by_double_coset(lambda: u64, reps: Vec<Mat4>) -> Vec<HeckeDoubleCoset> {
    let mut out: Vec<HeckeDoubleCoset> = Vec::new();
    for m in reps {
        let ed = elementary_divisors(&m, lambda);
        match out.iter_mut().find(|c| c.elementary_divisors == ed) {
            Some(c) => c.representatives.push(m),
            None => out.push(HeckeDoubleCoset {
                similitude: lambda,
                elementary_divisors: ed,
                representatives: vec![m],
            }),
        }
    }
    out.sort_by_key(|c| c.elementary_divisors);
    out
}

/// Right cosets of `Gamma diag(1, 1, p, p) Gamma`.
pub fn coset_decomposition_tp(p: u64) -> Result<HeckeDoubleCoset> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    let mut classes = group_by_double_coset(p, right_cosets(p)?);
    if classes.len() != 1 {
        return Err(Error::Inconsistent(format!(
            "similitude {p} splits into {} double cosets",
            classes.len()
        )));
    }
    Ok(classes.remove(0))
}

/// The double cosets of similitude `p^2`: `diag(1,1,p^2,p^2)`,
/// `diag(1,p,p^2,p)` and the scalar `pI`.
pub fn coset_decomposition_tp2(p: u64) -> Result<Vec<HeckeDoubleCoset>> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    Ok(group_by_double_coset(p * p, right_cosets(p * p)?))
}

/// Source index `lambda A^{-t} T' A^{-1}`, or `None` if it is not half-integral.
fn source_index(f: &Family, lambda: i64, t: SiegelIndex) -> Option<SiegelIndex> {
    // 2T' = [[2n, r], [r, 2m]]; A^{-1} = adj / det with adj = [[d, -b], [0, a]]
    let (a, b, d) = (f.a, f.b, f.d);
    let q = [[2 * t.n, t.r], [t.r, 2 * t.m]];
    let adj = [[d, -b], [0, a]];
    let mut x = [[0i64; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            x[i][j] = (0..2)
                .flat_map(|k| (0..2).map(move |l| (k, l)))
                .map(|(k, l)| adj[k][i] * q[k][l] * adj[l][j])
                .sum();
        }
    }
    let den = f.det() * f.det();
    let scaled = |v: i64| (lambda * v % den == 0).then(|| lambda * v / den);
    let (q11, q12, q22) = (scaled(x[0][0])?, scaled(x[0][1])?, scaled(x[1][1])?);
    if q11 % 2 != 0 || q22 % 2 != 0 {
        return None;
    }
    Some(SiegelIndex::new(q11 / 2, q12, q22 / 2))
}

/// `T(m)F` on every reduced index with `m' <= floor(bound / m)`.
pub fn hecke_operator(f: &SiegelFourierTable, m: u64) -> Result<SiegelFourierTable> {
    if m == 0 {
        return Err(Error::invalid("T(0) is undefined"));
    }
    let out = f.bound() / m;
    if out == 0 {
        return Err(Error::truncation(format!("T({m})"), f.bound(), m));
    }
    let k = f.weight();
    let lambda = m as i64;
    let fams = families(lambda);
    let weights: Vec<Rational> = fams
        .iter()
        .map(|fam| big_rat(int_pow(fam.det() as u64, k) * fam.group.len()) / big_rat(int_pow(m, 3)))
        .collect();
    SiegelFourierTable::try_from_fn(k, out, |t| {
        let mut acc = Rational::zero();
        for (fam, w) in fams.iter().zip(&weights) {
            let Some(s) = source_index(fam, lambda, t) else {
                continue;
            };
            let trivial = fam
                .generators
                .iter()
                .all(|g| (s.n * g[0] + s.r * g[1] + s.m * g[2]) % lambda == 0);
            if !trivial {
                continue;
            }
            acc += w * f.get(s)?;
        }
        Ok(acc)
    })
}

pub fn hecke_tp(f: &SiegelFourierTable, p: u64) -> Result<SiegelFourierTable> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    hecke_operator(f, p)
}

/// `T(p^2)`, the full sum over all double cosets of similitude `p^2`.
pub fn hecke_tp2(f: &SiegelFourierTable, p: u64) -> Result<SiegelFourierTable> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    hecke_operator(f, p * p)
}

/// `mu_F(m)` from `T(m)F = mu F`, read at the probe index and verified at
/// every index the operator output covers.
pub fn hecke_eigenvalue(f: &SiegelFourierTable, m: u64) -> Result<Rational> {
    let image = hecke_operator(f, m)?;
    let out = image.bound();
    let probe = f.probe(out).ok_or(Error::NoProbe { bound: out })?;
    let mu = image.get(probe)? / f.get(probe)?;
    for t in SiegelIndex::reduced_up_to(out) {
        let expected = &mu * f.get(t)?;
        let found = image.get(t)?;
        if expected != found {
            return Err(Error::NotEigenform {
                witness: t,
                expected: expected.to_string(),
                found: found.to_string(),
            });
        }
    }
    Ok(mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::eigenforms;
    use crate::jacobi::ez_lift;
    use crate::kohnen::plus_space_basis;
    use crate::numeric::arith::rational_pow;
    use crate::numeric::rat;
    use crate::siegel::{maass_lift, required_discriminant};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const J: Mat4 = [[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]];

    fn mul(a: &Mat4, b: &Mat4) -> Mat4 {
        let mut c = [[0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                c[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
            }
        }
        c
    }

    fn transpose(a: &Mat4) -> Mat4 {
        let mut t = [[0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                t[i][j] = a[j][i];
            }
        }
        t
    }

    fn similitude(m: &Mat4) -> Option<i64> {
        let s = mul(&mul(&transpose(m), &J), m);
        let l = s[0][2];
        let scaled = J.map(|row| row.map(|x| x * l));
        (s == scaled).then_some(l)
    }

    /// `Gamma M1 = Gamma M2` iff `M1 M2^{-1}` is integral, and
    /// `M2^{-1} = J^{-1} M2^t J / lambda`.
    fn same_coset(m1: &Mat4, m2: &Mat4, lambda: i64) -> bool {
        let jinv = J.map(|row| row.map(|x| -x));
        let prod = mul(&mul(&mul(m1, &jinv), &transpose(m2)), &J);
        prod.iter().flatten().all(|x| x % lambda == 0)
    }

    fn assert_pairwise_distinct(reps: &[Mat4], lambda: i64) {
        for (i, a) in reps.iter().enumerate() {
            for b in &reps[i + 1..] {
                assert!(!same_coset(a, b, lambda), "{a:?} ~ {b:?}");
            }
        }
    }

    #[test]
    fn tp_coset_counts() {
        for p in [2u64, 3, 5] {
            let c = coset_decomposition_tp(p).unwrap();
            assert_eq!(c.len() as u64, p * p * p + p * p + p + 1);
            assert_eq!(c.elementary_divisors, [1, 1, p, p]);
            assert!(c
                .representatives
                .iter()
                .all(|m| similitude(m) == Some(p as i64)));
        }
        for p in [2u64, 3] {
            assert_pairwise_distinct(
                &coset_decomposition_tp(p).unwrap().representatives,
                p as i64,
            );
        }
        assert!(coset_decomposition_tp(4).is_err());
    }

    #[test]
    fn tp2_coset_counts() {
        for p in [2u64, 3] {
            let classes = coset_decomposition_tp2(p).unwrap();
            let divs: Vec<[u64; 4]> = classes.iter().map(|c| c.elementary_divisors).collect();
            assert_eq!(
                divs,
                vec![[1, 1, p * p, p * p], [1, p, p * p, p], [p, p, p, p]]
            );
            assert_eq!(classes[2].len(), 1);
            let total: u64 = classes.iter().map(|c| c.len() as u64).sum();
            let p2 = p * p;
            assert_eq!(
                total,
                p2 * p2 * p2 + p2 * p2 * p + 2 * p2 * p2 + 2 * p2 * p + p2 + p + 1
            );
            for c in &classes {
                assert!(c
                    .representatives
                    .iter()
                    .all(|m| similitude(m) == Some(p2 as i64)));
            }
        }
        assert_pairwise_distinct(&right_cosets(4).unwrap(), 4);
    }

    /// Random coefficient function that is constant on unimodular classes.
    fn random_invariant_table(k: u32, bound: u64, seed: u64) -> SiegelFourierTable {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values: Vec<(SiegelIndex, i64)> = SiegelIndex::reduced_up_to(bound)
            .into_iter()
            .map(|i| (i, rng.gen_range(-50..50)))
            .collect();
        let mut t = SiegelFourierTable::new(k, bound);
        for (i, v) in values {
            t.set(i, rat(v)).unwrap();
        }
        t
    }

    /// `T(p)` written out by hand: the identity coset, the `p + 1` lines and
    /// the coset `pI`.
    fn tp_oracle(f: &SiegelFourierTable, p: i64, t: SiegelIndex) -> Rational {
        let k = f.weight();
        let get = |n: i64, r: i64, m: i64| f.get(SiegelIndex::new(n, r, m)).unwrap();
        let mut acc = get(p * t.n, p * t.r, p * t.m);
        let mid = rational_pow(p as u64, k as i64 - 2);
        for j in 0..p {
            let n = t.n + t.r * j + t.m * j * j;
            if n % p == 0 {
                acc += &mid * get(n / p, t.r + 2 * t.m * j, p * t.m);
            }
        }
        if t.m % p == 0 {
            acc += &mid * get(p * t.n, t.r, t.m / p);
        }
        if t.n % p == 0 && t.r % p == 0 && t.m % p == 0 {
            acc += rational_pow(p as u64, 2 * k as i64 - 3) * get(t.n / p, t.r / p, t.m / p);
        }
        acc
    }

    #[test]
    fn tp_matches_hand_formula_on_random_tables() {
        for (p, bound, seed) in [(2, 8, 1), (3, 9, 2), (5, 10, 3)] {
            let f = random_invariant_table(10, bound, seed);
            let g = hecke_tp(&f, p).unwrap();
            assert_eq!(g.bound(), bound / p);
            for t in SiegelIndex::reduced_up_to(g.bound()) {
                assert_eq!(
                    g.get(t).unwrap(),
                    tp_oracle(&f, p as i64, t),
                    "p = {p}, {t}"
                );
            }
        }
    }

    #[test]
    fn operators_commute_on_random_tables() {
        let f = random_invariant_table(10, 16, 7);
        let a = hecke_tp2(&hecke_tp(&f, 2).unwrap(), 2).unwrap();
        let b = hecke_tp(&hecke_tp2(&f, 2).unwrap(), 2).unwrap();
        assert_eq!(a, b);
        let f = random_invariant_table(12, 12, 8);
        let a = hecke_tp(&hecke_tp(&f, 3).unwrap(), 2).unwrap();
        let b = hecke_tp(&hecke_tp(&f, 2).unwrap(), 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_and_short_tables() {
        let z = SiegelFourierTable::new(10, 6);
        assert!(hecke_tp(&z, 2).unwrap().is_zero());
        assert!(matches!(
            hecke_tp(&z, 7),
            Err(Error::InsufficientTruncation { .. })
        ));
        assert!(matches!(
            hecke_eigenvalue(&z, 2),
            Err(Error::NoProbe { .. })
        ));
    }

    fn sk(k: u32, bound: u64) -> SiegelFourierTable {
        let g = plus_space_basis(k, required_discriminant(bound) as usize)
            .unwrap()
            .remove(0);
        maass_lift(&ez_lift(&g), bound).unwrap()
    }

    #[test]
    fn lift_eigenvalues_match_elliptic_data() {
        for k in [10u32, 12] {
            let f = &eigenforms(2 * k - 2, 10).unwrap()[0];
            let table = sk(k, 9);
            for p in [2u64, 3] {
                let expect = big_rat(int_pow(p, k - 1) + int_pow(p, k - 2))
                    + f.rational_eigenvalue(p).unwrap();
                assert_eq!(
                    hecke_eigenvalue(&table, p).unwrap(),
                    expect,
                    "k = {k}, p = {p}"
                );
            }
        }
        assert_eq!(hecke_eigenvalue(&sk(10, 6), 2).unwrap(), rat(240));
        // 2^11 + 2^10 - 288
        assert_eq!(hecke_eigenvalue(&sk(12, 6), 2).unwrap(), rat(2784));
    }

    #[test]
    fn t4_on_lifts_obeys_the_quadratic_relation() {
        for k in [10u32, 12] {
            let f = sk(k, 8);
            let mu2 = hecke_eigenvalue(&f, 2).unwrap();
            let mu4 = hecke_eigenvalue(&f, 4).unwrap();
            let c = big_rat(int_pow(2, k - 1) + int_pow(2, k - 2));
            assert_eq!(
                mu4,
                &mu2 * &mu2 - c * &mu2 + big_rat(int_pow(2, 2 * k - 2)),
                "k = {k}"
            );
            if k == 10 {
                assert_eq!(mu4, rat(135424));
            }
        }
    }

    #[test]
    fn eigenvalues_are_multiplicative_and_scale_invariant() {
        let f = sk(10, 6);
        let mu6 = hecke_eigenvalue(&f, 6).unwrap();
        assert_eq!(
            mu6,
            hecke_eigenvalue(&f, 2).unwrap() * hecke_eigenvalue(&f, 3).unwrap()
        );
        let scaled = f.scale(&rat(-7));
        assert_eq!(hecke_eigenvalue(&scaled, 2).unwrap(), rat(240));
    }

    #[test]
    fn perturbed_lift_is_not_an_eigenform() {
        let mut f = sk(10, 6);
        let t = SiegelIndex::new(2, 2, 2);
        let v = f.get(t).unwrap();
        f.set(t, v + rat(1)).unwrap();
        match hecke_eigenvalue(&f, 2) {
            Err(Error::NotEigenform { witness, .. }) => assert!(witness.is_reduced()),
            other => panic!("expected NotEigenform, got {other:?}"),
        }
    }
}
