//! Half-integral weight forms on `Gamma0(4)` and the Kohnen plus space.
//!
//! A plus-space form of weight `k - 1/2` is stored by its `q`-expansion
//! `sum c(n) q^n`; the coefficient `c(D)` is what the Jacobi lift reads.

use crate::elliptic::{dim_cusp, eigenforms, EllipticEigenform};
use crate::error::{Error, Result};
use crate::numeric::arith::{int_pow, sigma};
use crate::numeric::{big_rat, is_prime, kronecker_symbol, rat, QuadExt, Rational, Scalar};
use crate::qseries::{
    coordinates, echelon_basis, quadratic_eigensystem, Matrix, QSeries, RatMatrix,
};

/// `theta = 1 + 2 sum_{n >= 1} q^{n^2}`.
pub fn theta(truncation: usize) -> QSeries {
    let mut c = vec![rat(0); truncation + 1];
    c[0] = rat(1);
    let mut n = 1;
    while n * n <= truncation {
        c[n * n] = rat(2);
        n += 1;
    }
    QSeries::new(c)
}

/// `F = sum_{n odd} sigma_1(n) q^n`, weight 2 on `Gamma0(4)`.
pub fn weight2_f(truncation: usize) -> QSeries {
    QSeries::from_fn(truncation, |n| {
        if n % 2 == 1 {
            big_rat(sigma(1, n as u64))
        } else {
            rat(0)
        }
    })
}

/// Form of weight `weight_numerator / 2` on `Gamma0(4)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfIntForm {
    pub weight_numerator: u32,
    pub expansion: QSeries,
}

/// The generators `theta^{w - 4b} F^b`, `0 <= b <= floor(w/4)`, of weight `w/2`.
pub fn generators(weight_numerator: u32, truncation: usize) -> Vec<HalfIntForm> {
    let w = weight_numerator;
    let bmax = w / 4;
    let th = theta(truncation);
    let th4 = th.pow(4);
    let f = weight2_f(truncation);
    let base = th.pow(w % 4);
    (0..=bmax)
        .map(|b| {
            let expansion = base.mul(&th4.pow(bmax - b)).mul(&f.pow(b));
            HalfIntForm {
                weight_numerator: w,
                expansion,
            }
        })
        .collect()
}

/// Sign `(-1)^{k-1}` entering the plus condition and `T+(p^2)` for weight `k - 1/2`.
fn plus_sign(k: u32) -> i64 {
    if k % 2 == 0 {
        -1
    } else {
        1
    }
}

/// Plus condition: `c(n)` may be nonzero only when `(-1)^{k-1} n = 0, 1 mod 4`.
pub fn plus_allowed(k: u32, n: u64) -> bool {
    allowed_with_sign(plus_sign(k), n)
}

fn allowed_with_sign(eps: i64, n: u64) -> bool {
    matches!((eps * n as i64).rem_euclid(4), 0 | 1)
}

/// Cusp form in `S+_{k-1/2}(Gamma0(4))`.
///
/// Only constructible through checked paths, so holding one certifies the
/// plus condition (and `c(0) = 0`) on the whole stored expansion.
#[derive(Clone, Debug, PartialEq)]
pub struct PlusSpaceForm<T: Scalar = Rational> {
    k: u32,
    expansion: QSeries<T>,
}

impl<T: Scalar> PlusSpaceForm<T> {
    /// Checks the plus condition and cuspidality on every stored coefficient.
    pub fn new(k: u32, expansion: QSeries<T>) -> Result<Self> {
        if let Some(n) = first_plus_violation(k, &expansion) {
            return Err(Error::invalid(format!(
                "coefficient q^{n} violates the plus condition for weight {k}-1/2"
            )));
        }
        Ok(PlusSpaceForm { k, expansion })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// `2k - 1`, so that the weight is `(2k - 1)/2`.
    pub fn weight_numerator(&self) -> u32 {
        2 * self.k - 1
    }

    pub fn expansion(&self) -> &QSeries<T> {
        &self.expansion
    }

    pub fn truncation(&self) -> usize {
        self.expansion.truncation()
    }

    /// `c(n)`, or `None` beyond the truncation.
    pub fn coeff(&self, n: usize) -> Option<&T> {
        self.expansion.get(n)
    }

    pub fn is_zero(&self) -> bool {
        self.expansion.is_zero()
    }

    pub fn to_quad(&self) -> PlusSpaceForm<QuadExt>
    where
        T: Into<QuadExt>,
    {
        PlusSpaceForm {
            k: self.k,
            expansion: self.expansion.map(|c| c.clone().into()),
        }
    }
}

impl PlusSpaceForm<QuadExt> {
    /// The same form over `Q`, if all its coefficients are rational.
    pub fn to_rational(&self) -> Option<PlusSpaceForm> {
        let coeffs = self
            .expansion
            .coeffs()
            .iter()
            .map(QuadExt::to_rational)
            .collect::<Option<Vec<_>>>()?;
        Some(PlusSpaceForm {
            k: self.k,
            expansion: QSeries::new(coeffs),
        })
    }
}

fn first_plus_violation<T: Scalar>(k: u32, s: &QSeries<T>) -> Option<usize> {
    s.coeffs()
        .iter()
        .enumerate()
        .find(|(n, c)| !c.is_zero() && (*n == 0 || !plus_allowed(k, *n as u64)))
        .map(|(n, _)| n)
}

/// Echelon basis of the plus space together with its pivot exponents.
#[derive(Clone, Debug)]
pub struct PlusSpace {
    pub k: u32,
    pub forms: Vec<PlusSpaceForm>,
    pub pivots: Vec<usize>,
    pub constraint_bound: usize,
}

impl PlusSpace {
    pub fn dim(&self) -> usize {
        self.forms.len()
    }

    pub fn truncation(&self) -> usize {
        self.forms.first().map_or(0, PlusSpaceForm::truncation)
    }
}

pub fn default_constraint_bound(k: u32) -> usize {
    4 * k as usize
}

fn check_k(k: u32) -> Result<()> {
    if k % 2 == 1 || k < 4 {
        return Err(Error::invalid(format!(
            "plus space needs an even k >= 4, got {k}"
        )));
    }
    Ok(())
}

/// `plus_space_with_bound` with the default constraint bound `4k`.
pub fn plus_space(k: u32, truncation: usize) -> Result<PlusSpace> {
    plus_space_with_bound(k, truncation, default_constraint_bound(k))
}

pub fn plus_space_basis(k: u32, truncation: usize) -> Result<Vec<PlusSpaceForm>> {
    Ok(plus_space(k, truncation)?.forms)
}

/// Cusp forms of weight `k - 1/2` in the generator span whose coefficients
/// satisfy the plus condition up to `bound`.
///
/// The result must have dimension `dim S_{2k-2}` and satisfy the plus
/// condition on the full truncation; otherwise the bound was too small.
pub fn plus_space_with_bound(k: u32, truncation: usize, bound: usize) -> Result<PlusSpace> {
    check_k(k)?;
    let (forms, pivots) = constrained_span(k, truncation, bound, plus_sign(k))?;
    let expected = dim_cusp(2 * k - 2);
    if forms.len() != expected {
        return Err(Error::DimensionMismatch(format!(
            "plus space of weight {k}-1/2 has dimension {} with constraint bound {bound}, \
             but dim S_{} = {expected}",
            forms.len(),
            2 * k - 2
        )));
    }
    let forms = forms
        .into_iter()
        .map(|s| {
            PlusSpaceForm::new(k, s).map_err(|e| {
                Error::DimensionMismatch(format!(
                    "constraint bound {bound} too small for weight {k}-1/2: {e}"
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PlusSpace {
        k,
        forms,
        pivots,
        constraint_bound: bound,
    })
}

fn constrained_span(
    k: u32,
    truncation: usize,
    bound: usize,
    eps: i64,
) -> Result<(Vec<QSeries>, Vec<usize>)> {
    if truncation < bound {
        return Err(Error::truncation(
            format!("plus space of weight {k}-1/2"),
            truncation as u64,
            bound as u64,
        ));
    }
    let gens = generators(2 * k - 1, truncation);
    let rows: Vec<usize> = (0..=bound)
        .filter(|&n| n == 0 || !allowed_with_sign(eps, n as u64))
        .collect();
    let constraints = Matrix::from_fn(rows.len(), gens.len(), |i, j| {
        gens[j].expansion.coeff(rows[i]).clone()
    });
    let span: Vec<QSeries> = constraints
        .kernel()
        .into_iter()
        .map(|v| {
            let terms: Vec<(Rational, &QSeries)> = v
                .into_iter()
                .zip(gens.iter().map(|g| &g.expansion))
                .collect();
            QSeries::linear_combination(&terms).expect("nonempty generator list")
        })
        .collect();
    Ok(echelon_basis(&span))
}

/// `T+(p^2)` on the plus space of weight `k - 1/2`:
/// `c'(n) = c(p^2 n) + ((-1)^{k-1} n / p) p^{k-2} c(n) + p^{2k-3} c(n/p^2)`,
/// valid to `floor(N/p^2)`. Coefficients off the plus classes are set to 0,
/// which only matters for `p = 2` where `c(4n)` need not vanish there.
pub fn plus_hecke_tp2<T: Scalar>(g: &PlusSpaceForm<T>, p: u64) -> Result<PlusSpaceForm<T>> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    let k = g.k;
    let pp = (p * p) as usize;
    let out = g.truncation() / pp;
    if out == 0 {
        return Err(Error::truncation(
            format!("T+({p}^2)"),
            g.truncation() as u64,
            pp as u64,
        ));
    }
    let middle = T::from_rational(big_rat(int_pow(p, k - 2)));
    let last = T::from_rational(big_rat(int_pow(p, 2 * k - 3)));
    let eps = plus_sign(k);
    let c = g.expansion.coeffs();
    let expansion = QSeries::from_fn(out, |n| {
        if n == 0 || !plus_allowed(k, n as u64) {
            return T::zero();
        }
        let mut v = c[pp * n].clone();
        let chi = kronecker_symbol(eps * n as i64, p as i64).expect("p is nonzero");
        if chi != 0 {
            v = v + T::from_rational(rat(chi as i64)) * middle.clone() * c[n].clone();
        }
        if n % pp == 0 {
            v = v + last.clone() * c[n / pp].clone();
        }
        v
    });
    Ok(PlusSpaceForm { k, expansion })
}

/// Matrix of `T+(p^2)` on the echelon basis; column `j` holds the
/// coordinates of `T+(p^2) g_j`.
pub fn plus_hecke_matrix(space: &PlusSpace, p: u64) -> Result<RatMatrix> {
    let dim = space.dim();
    let series: Vec<QSeries> = space.forms.iter().map(|g| g.expansion.clone()).collect();
    let mut cols = Vec::with_capacity(dim);
    for g in &space.forms {
        let t = plus_hecke_tp2(g, p)?;
        let need = space.pivots.last().copied().unwrap_or(0);
        if t.truncation() < need {
            return Err(Error::truncation(
                format!("T+({p}^2) matrix in weight {}-1/2", space.k),
                g.truncation() as u64,
                (p * p) as u64 * need as u64,
            ));
        }
        let c = coordinates(&t.expansion, &series, &space.pivots).ok_or_else(|| {
            Error::Inconsistent(format!(
                "T+({p}^2) leaves the plus space of weight {}-1/2",
                space.k
            ))
        })?;
        cols.push(c);
    }
    Ok(Matrix::from_fn(dim, dim, |i, j| cols[j][i].clone()))
}

/// Eigenbasis of `T+(4)` on the plus space, each form scaled so its first
/// echelon coordinate is 1. Rational when the space is one-dimensional.
pub fn plus_eigenforms(space: &PlusSpace) -> Result<Vec<PlusSpaceForm<QuadExt>>> {
    let t4 = plus_hecke_matrix(space, 2)?;
    let qforms: Vec<PlusSpaceForm<QuadExt>> =
        space.forms.iter().map(PlusSpaceForm::to_quad).collect();
    quadratic_eigensystem(&t4)?
        .into_iter()
        .map(|(_, v)| {
            let terms: Vec<(QuadExt, &QSeries<QuadExt>)> = v
                .into_iter()
                .zip(qforms.iter().map(|g| &g.expansion))
                .collect();
            let expansion = QSeries::linear_combination(&terms).expect("nonempty basis");
            Ok(PlusSpaceForm {
                k: space.k,
                expansion,
            })
        })
        .collect()
}

/// `T+(p^2)`-eigenvalue of `g`, verified on every coefficient the operator
/// output carries.
pub fn plus_eigenvalue<T: Scalar>(g: &PlusSpaceForm<T>, p: u64) -> Result<T> {
    let t = plus_hecke_tp2(g, p)?;
    let out = t.truncation();
    let n0 = g
        .expansion
        .coeffs()
        .iter()
        .take(out + 1)
        .position(|c| !c.is_zero())
        .ok_or_else(|| {
            Error::invalid(format!("no nonzero coefficient of g below q^{}", out + 1))
        })?;
    let lambda = t.expansion.coeff(n0).clone() * g.expansion.coeff(n0).inv().expect("nonzero");
    for n in 0..=out {
        if t.expansion.coeff(n).clone() != lambda.clone() * g.expansion.coeff(n).clone() {
            return Err(Error::invalid(format!(
                "not a T+({p}^2)-eigenform: fails at q^{n}"
            )));
        }
    }
    Ok(lambda)
}

/// The elliptic eigenform in `S_{2k-2}` whose `a_f(2)` is the
/// `T+(4)`-eigenvalue of `g`, confirmed at `p = 3` when `g` is long enough.
pub fn shimura_match(g: &PlusSpaceForm<QuadExt>) -> Result<EllipticEigenform> {
    let w = 2 * g.k - 2;
    let candidates = eigenforms(w, 4 * dim_cusp(w) + 8)?;
    shimura_match_among(g, &candidates)
}

pub fn shimura_match_among(
    g: &PlusSpaceForm<QuadExt>,
    candidates: &[EllipticEigenform],
) -> Result<EllipticEigenform> {
    let lambda2 = plus_eigenvalue(g, 2)?;
    let lambda3 = if g.truncation() >= 9 && !g.expansion.truncate(g.truncation() / 9).is_zero() {
        Some(plus_eigenvalue(g, 3)?)
    } else {
        None
    };
    let mut hits = candidates.iter().filter(|f| {
        f.weight() == 2 * g.k - 2
            && f.eigenvalue(2).is_ok_and(|a| a == lambda2)
            && lambda3
                .as_ref()
                .map_or(true, |l3| f.eigenvalue(3).map_or(true, |a| &a == l3))
    });
    match (hits.next(), hits.next()) {
        (Some(f), None) => Ok(f.clone()),
        (None, _) => Err(Error::NoShimuraMatch(format!(
            "no eigenform in S_{} has a(2) = {lambda2}",
            2 * g.k - 2
        ))),
        (Some(_), Some(_)) => Err(Error::NoShimuraMatch(format!(
            "several eigenforms in S_{} have a(2) = {lambda2}",
            2 * g.k - 2
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::hecke_char_poly;

    #[test]
    fn generator_values() {
        let th = theta(10);
        assert_eq!(
            (th.coeff(0), th.coeff(1), th.coeff(4)),
            (&rat(1), &rat(2), &rat(2))
        );
        assert_eq!(th.coeff(2), &rat(0));
        let f = weight2_f(10);
        assert_eq!((f.coeff(1), f.coeff(3)), (&rat(1), &rat(4)));
        assert_eq!(f.coeff(2), &rat(0));
        assert_eq!(generators(19, 5).len(), 5);
    }

    #[test]
    fn dimensions_match_elliptic_side() {
        assert_eq!(plus_space(10, 60).unwrap().dim(), 1);
        assert_eq!(plus_space(12, 60).unwrap().dim(), 1);
        assert_eq!(plus_space(8, 60).unwrap().dim(), 0);
        assert_eq!(plus_space(16, 80).unwrap().dim(), 2);
    }

    #[test]
    fn weight_19_2_coefficients() {
        let g = &plus_space_basis(10, 40).unwrap()[0];
        let expect = [
            (3, 1),
            (4, -2),
            (7, -16),
            (8, 36),
            (11, 99),
            (12, -272),
            (15, -240),
            (16, 1056),
        ];
        for (n, c) in expect {
            assert_eq!(g.coeff(n), Some(&rat(c)), "c({n})");
        }
    }

    #[test]
    fn plus_condition_holds_on_full_truncation() {
        for k in [10, 12, 14, 16] {
            for g in plus_space(k, 150).unwrap().forms {
                assert_eq!(first_plus_violation(k, g.expansion()), None);
                assert!(!g.is_zero());
            }
        }
    }

    #[test]
    fn other_parity_is_rejected_by_dimension() {
        // imposing c(n) = 0 for n = 2, 3 mod 4 instead leaves no cusp forms
        let (span, _) = constrained_span(10, 60, 40, 1).unwrap();
        assert_ne!(span.len(), dim_cusp(18));
    }

    #[test]
    fn small_constraint_bound_is_detected() {
        assert!(matches!(
            plus_space_with_bound(16, 80, 3),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn eigenvalues_at_two() {
        let g = &plus_space_basis(10, 40).unwrap()[0];
        assert_eq!(plus_eigenvalue(g, 2).unwrap(), rat(-528));
        let g = &plus_space_basis(12, 60).unwrap()[0];
        assert_eq!(plus_eigenvalue(g, 2).unwrap(), rat(-288));
    }

    #[test]
    fn zero_form_maps_to_zero() {
        let z = PlusSpaceForm::new(10, QSeries::<Rational>::zero(20)).unwrap();
        assert!(plus_hecke_tp2(&z, 2).unwrap().is_zero());
    }

    #[test]
    fn truncation_errors() {
        let g = &plus_space_basis(10, 40).unwrap()[0];
        assert!(matches!(
            plus_hecke_tp2(g, 7),
            Err(Error::InsufficientTruncation { .. })
        ));
        assert!(plus_hecke_tp2(g, 4).is_err());
        assert!(plus_space(10, 10).is_err());
        assert!(plus_space(9, 60).is_err());
    }

    #[test]
    fn char_polys_match_elliptic_t2() {
        for k in [10, 12, 16] {
            let space = plus_space(k, 120).unwrap();
            let plus = plus_hecke_matrix(&space, 2).unwrap().char_poly().unwrap();
            let ell = hecke_char_poly(2 * k - 2, 2, 40).unwrap();
            assert_eq!(plus, ell, "k = {k}");
        }
    }

    #[test]
    fn t4_and_t9_commute() {
        for k in [10, 12, 16] {
            let space = plus_space(k, 400).unwrap();
            for g in &space.forms {
                let a = plus_hecke_tp2(&plus_hecke_tp2(g, 2).unwrap(), 3).unwrap();
                let b = plus_hecke_tp2(&plus_hecke_tp2(g, 3).unwrap(), 2).unwrap();
                let n = a.truncation().min(b.truncation());
                assert!(n >= 10);
                assert_eq!(
                    a.expansion().truncate(n),
                    b.expansion().truncate(n),
                    "k = {k}"
                );
            }
        }
    }

    #[test]
    fn shimura_partners() {
        for (k, a2) in [(10, -528), (12, -288)] {
            let g = plus_space_basis(k, 100).unwrap()[0].to_quad();
            let f = shimura_match(&g).unwrap();
            assert_eq!(f.weight(), 2 * k - 2);
            assert_eq!(f.rational_eigenvalue(2).unwrap(), rat(a2));
        }
    }

    #[test]
    fn weight_31_2_eigenforms_pair_with_s30() {
        let space = plus_space(16, 200).unwrap();
        let gs = plus_eigenforms(&space).unwrap();
        assert_eq!(gs.len(), 2);
        let fs: Vec<_> = gs.iter().map(|g| shimura_match(g).unwrap()).collect();
        assert_ne!(fs[0], fs[1]);
        for (g, f) in gs.iter().zip(&fs) {
            assert!(f.field().is_some());
            assert_eq!(plus_eigenvalue(g, 2).unwrap(), f.eigenvalue(2).unwrap());
            assert_eq!(plus_eigenvalue(g, 3).unwrap(), f.eigenvalue(3).unwrap());
        }
    }

    #[test]
    fn non_eigenform_is_refused() {
        let space = plus_space(16, 100).unwrap();
        let sum = space.forms[0].expansion().add(space.forms[1].expansion());
        let g = PlusSpaceForm::new(16, sum).unwrap().to_quad();
        assert!(shimura_match(&g).is_err());
    }

    #[test]
    fn constructor_checks_plus_condition() {
        let mut c = vec![rat(0); 10];
        c[5] = rat(1);
        assert!(PlusSpaceForm::new(10, QSeries::new(c)).is_err());
        assert!(PlusSpaceForm::new(10, QSeries::<Rational>::one(5)).is_err());
    }
}
