//! Level-one elliptic modular forms: Eisenstein series, `Delta`, echelon
//! cusp-form bases, Hecke operators `T(p)` and Hecke eigenforms.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numeric::arith::{bernoulli, int_pow, sigma};
use crate::numeric::{big_rat, is_prime, rat, QuadExt, Rational, Scalar};
use crate::qseries::{
    coordinates, echelon_basis, quadratic_eigensystem, Matrix, Poly, QSeries, RatMatrix,
};

#[derive(Clone, Debug, PartialEq)]
pub struct EllipticForm {
    pub weight: u32,
    pub expansion: QSeries,
}

impl EllipticForm {
    pub fn new(weight: u32, expansion: QSeries) -> Self {
        EllipticForm { weight, expansion }
    }

    pub fn truncation(&self) -> usize {
        self.expansion.truncation()
    }

    pub fn coeff(&self, n: usize) -> &Rational {
        self.expansion.coeff(n)
    }

    pub fn is_cuspidal(&self) -> bool {
        self.expansion.coeff(0).is_zero()
    }
}

/// Normalized Hecke eigenform (`a(1) = 1`), with coefficients in `Q` or a
/// real quadratic field.
#[derive(Clone, Debug, PartialEq)]
pub struct EllipticEigenform {
    weight: u32,
    expansion: QSeries<QuadExt>,
    field: Option<u64>,
}

impl EllipticEigenform {
    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn expansion(&self) -> &QSeries<QuadExt> {
        &self.expansion
    }

    /// Square-free `d` with coefficients in `Q(sqrt d)`, or `None` if rational.
    pub fn field(&self) -> Option<u64> {
        self.field
    }

    pub fn coeff(&self, n: usize) -> &QuadExt {
        self.expansion.coeff(n)
    }

    /// Hecke eigenvalue `a_f(p)`.
    pub fn eigenvalue(&self, p: u64) -> Result<QuadExt> {
        self.expansion.get(p as usize).cloned().ok_or_else(|| {
            Error::truncation("elliptic eigenvalue", self.expansion.truncation() as u64, p)
        })
    }

    /// `a_f(p)` when it is rational.
    pub fn rational_eigenvalue(&self, p: u64) -> Result<Rational> {
        self.eigenvalue(p)?
            .to_rational()
            .ok_or_else(|| Error::invalid(format!("a_f({p}) is irrational")))
    }

    pub fn rational_expansion(&self) -> Option<QSeries> {
        let coeffs = self
            .expansion
            .coeffs()
            .iter()
            .map(QuadExt::to_rational)
            .collect::<Option<Vec<_>>>()?;
        Some(QSeries::new(coeffs))
    }
}

fn check_weight(w: u32) -> Result<()> {
    if w % 2 == 1 || w < 4 {
        return Err(Error::invalid(format!(
            "weight {w}: level-one forms need an even weight >= 4"
        )));
    }
    Ok(())
}

/// `E_w = 1 - (2w / B_w) sum sigma_{w-1}(n) q^n`.
pub fn eisenstein(w: u32, truncation: usize) -> Result<EllipticForm> {
    check_weight(w)?;
    let c = -rat(2 * w as i64) / bernoulli(w as usize);
    let s = QSeries::from_fn(truncation, |n| {
        if n == 0 {
            Rational::one()
        } else {
            &c * big_rat(sigma(w - 1, n as u64))
        }
    });
    Ok(EllipticForm::new(w, s))
}

/// `prod (1 - q^n)` through Euler's pentagonal number theorem.
fn euler_product(truncation: usize) -> QSeries {
    let mut c = vec![Rational::zero(); truncation + 1];
    let mut k: i64 = 0;
    loop {
        let mut hit = false;
        for kk in if k == 0 { vec![0] } else { vec![k, -k] } {
            let e = (kk * (3 * kk - 1) / 2) as usize;
            if e <= truncation {
                c[e] = rat(if kk % 2 == 0 { 1 } else { -1 });
                hit = true;
            }
        }
        if !hit {
            break;
        }
        k += 1;
    }
    QSeries::new(c)
}

/// `Delta = q prod (1 - q^n)^24`.
pub fn delta(truncation: usize) -> EllipticForm {
    let eta24 = euler_product(truncation).pow(24);
    let s = QSeries::from_fn(truncation, |n| {
        if n == 0 {
            Rational::zero()
        } else {
            eta24.coeff(n - 1).clone()
        }
    });
    EllipticForm::new(12, s)
}

pub fn dim_modular(w: u32) -> usize {
    if w % 2 == 1 || w == 2 {
        return 0;
    }
    let base = (w / 12) as usize;
    if w % 12 == 2 {
        base
    } else {
        base + 1
    }
}

pub fn dim_cusp(w: u32) -> usize {
    if w < 12 {
        0
    } else {
        dim_modular(w) - 1
    }
}

/// Echelonized basis of `S_w` built from the monomials `Delta E4^b E6^c`.
///
/// The basis elements have leading terms `q, q^2, ..., q^dim`.
pub fn cusp_basis(w: u32, truncation: usize) -> Result<Vec<EllipticForm>> {
    let dim = dim_cusp(w);
    if dim == 0 {
        return Ok(Vec::new());
    }
    if truncation < dim {
        return Err(Error::truncation(
            format!("basis of S_{w}"),
            truncation as u64,
            dim as u64,
        ));
    }
    let d = delta(truncation).expansion;
    let e4 = eisenstein(4, truncation)?.expansion;
    let e6 = eisenstein(6, truncation)?.expansion;
    let rest = w - 12;
    let monomials: Vec<QSeries> = (0..=rest / 6)
        .filter(|c| (rest - 6 * c) % 4 == 0)
        .map(|c| {
            let b = (rest - 6 * c) / 4;
            d.mul(&e4.pow(b)).mul(&e6.pow(c))
        })
        .collect();
    let (basis, pivots) = echelon_basis(&monomials);
    if basis.len() != dim || pivots != (1..=dim).collect::<Vec<_>>() {
        return Err(Error::DimensionMismatch(format!(
            "S_{w}: echelon rank {} with pivots {pivots:?}, expected dimension {dim}",
            basis.len()
        )));
    }
    Ok(basis.into_iter().map(|s| EllipticForm::new(w, s)).collect())
}

/// `T(p)` on coefficients: `b(n) = a(pn) + p^{w-1} a(n/p)`, valid to `floor(N/p)`.
pub fn hecke_tp_series<T: Scalar>(f: &QSeries<T>, w: u32, p: u64) -> Result<QSeries<T>> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    let p = p as usize;
    let out = f.truncation() / p;
    if out == 0 {
        return Err(Error::truncation(
            format!("T({p})"),
            f.truncation() as u64,
            p as u64,
        ));
    }
    let scale = T::from_rational(big_rat(int_pow(p as u64, w - 1)));
    Ok(QSeries::from_fn(out, |n| {
        let mut c = f.coeff(p * n).clone();
        if n % p == 0 {
            c = c + scale.clone() * f.coeff(n / p).clone();
        }
        c
    }))
}

pub fn hecke_tp(f: &EllipticForm, p: u64) -> Result<EllipticForm> {
    Ok(EllipticForm::new(
        f.weight,
        hecke_tp_series(&f.expansion, f.weight, p)?,
    ))
}

/// `T(p)` with an explicit output truncation; fails unless `N >= p * out`.
pub fn hecke_tp_to(f: &EllipticForm, p: u64, out: usize) -> Result<EllipticForm> {
    let need = p as usize * out;
    if f.truncation() < need {
        return Err(Error::truncation(
            format!("T({p}) to q^{out}"),
            f.truncation() as u64,
            need as u64,
        ));
    }
    Ok(hecke_tp(f, p)?.expansion.truncate(out)).map(|s| EllipticForm::new(f.weight, s))
}

/// Matrix of `T(p)` on an echelon basis; column `j` holds the coordinates of
/// `T(p) b_j`.
pub fn hecke_matrix(basis: &[EllipticForm], p: u64) -> Result<RatMatrix> {
    let dim = basis.len();
    let series: Vec<QSeries> = basis.iter().map(|b| b.expansion.clone()).collect();
    let pivots: Vec<usize> = (1..=dim).collect();
    let mut cols = Vec::with_capacity(dim);
    for b in basis {
        let t = hecke_tp(b, p)?;
        if t.truncation() < dim {
            return Err(Error::truncation(
                format!("T({p}) matrix on S_{}", b.weight),
                b.truncation() as u64,
                p * dim as u64,
            ));
        }
        let c = coordinates(&t.expansion, &series, &pivots).ok_or_else(|| {
            Error::Inconsistent(format!("T({p}) does not preserve S_{}", b.weight))
        })?;
        cols.push(c);
    }
    Ok(Matrix::from_fn(dim, dim, |i, j| cols[j][i].clone()))
}

/// Normalized simultaneous eigenbasis of `S_w`.
///
/// Eigenvalues are the roots of the characteristic polynomial of `T(2)`;
/// fields of degree above two are refused.
pub fn eigenforms(w: u32, truncation: usize) -> Result<Vec<EllipticEigenform>> {
    let basis = cusp_basis(w, truncation)?;
    let dim = basis.len();
    if dim == 0 {
        return Ok(Vec::new());
    }
    let t2 = hecke_matrix(&basis, 2)?;
    let qbasis: Vec<QSeries<QuadExt>> = basis
        .iter()
        .map(|b| b.expansion.map(|x| QuadExt::rational(x.clone())))
        .collect();
    let mut out = Vec::with_capacity(dim);
    for (lambda, v) in quadratic_eigensystem(&t2)? {
        // a(1) is the first echelon coordinate and cannot vanish on an eigenform
        if v[0] != QuadExt::one() {
            return Err(Error::Inconsistent(format!(
                "eigenform of weight {w} with a(1) = 0"
            )));
        }
        let terms: Vec<(QuadExt, &QSeries<QuadExt>)> = v.into_iter().zip(qbasis.iter()).collect();
        let expansion = QSeries::linear_combination(&terms).expect("nonempty basis");
        let field = Some(lambda.radicand()).filter(|&d| d != 1);
        let f = EllipticEigenform {
            weight: w,
            expansion,
            field,
        };
        verify_eigenform(&f)?;
        out.push(f);
    }
    Ok(out)
}

/// Checks `T(p) f = a_f(p) f` on the full valid range for every prime the
/// truncation allows (at least to `q^1`).
fn verify_eigenform(f: &EllipticEigenform) -> Result<()> {
    let n = f.expansion.truncation() as u64;
    for p in (2..=n).filter(|&p| is_prime(p)) {
        let t = hecke_tp_series(&f.expansion, f.weight, p)?;
        let expected = f
            .expansion
            .truncate(t.truncation())
            .scale(&f.eigenvalue(p)?);
        if t != expected {
            return Err(Error::Inconsistent(format!(
                "weight {} form is not a T({p}) eigenform",
                f.weight
            )));
        }
    }
    Ok(())
}

/// Characteristic polynomial of `T(p)` on `S_w`.
pub fn hecke_char_poly(w: u32, p: u64, truncation: usize) -> Result<Poly> {
    let basis = cusp_basis(w, truncation)?;
    hecke_matrix(&basis, p)?.char_poly()
}

/// Big-integer value of `a_f(n)` for a rational eigenform.
pub fn integer_coefficient(f: &EllipticEigenform, n: usize) -> Option<BigInt> {
    let c = f.coeff(n).to_rational()?;
    c.is_integer().then(|| c.to_integer())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eisenstein_coefficients() {
        let e4 = eisenstein(4, 3).unwrap();
        assert_eq!(e4.coeff(1), &rat(240));
        assert_eq!(e4.coeff(2), &rat(2160));
        let e6 = eisenstein(6, 3).unwrap();
        assert_eq!(e6.coeff(0), &rat(1));
        assert_eq!(e6.coeff(1), &rat(-504));
        assert!(eisenstein(5, 3).is_err());
        assert!(eisenstein(2, 3).is_err());
    }

    /// Independent route: multiply out `q prod_{n} (1 - q^n)^24` factor by factor.
    fn delta_by_products(n: usize) -> Vec<i64> {
        let mut c = vec![0i64; n + 1];
        c[1] = 1;
        for k in 1..=n {
            for _ in 0..24 {
                for i in (k..=n).rev() {
                    c[i] -= c[i - k];
                }
            }
        }
        c
    }

    #[test]
    fn delta_coefficients() {
        let d = delta(12);
        assert_eq!(d.coeff(1), &rat(1));
        assert_eq!(d.coeff(2), &rat(-24));
        assert_eq!(d.coeff(3), &rat(252));
        let oracle = delta_by_products(12);
        for n in 0..=12 {
            assert_eq!(d.coeff(n), &rat(oracle[n]));
        }
    }

    #[test]
    fn basis_examples() {
        let b18 = cusp_basis(18, 6).unwrap();
        assert_eq!(b18.len(), 1);
        assert_eq!(b18[0].coeff(1), &rat(1));
        assert_eq!(b18[0].coeff(2), &rat(-528));
        assert!(cusp_basis(10, 6).unwrap().is_empty());
        assert_eq!(cusp_basis(30, 6).unwrap().len(), 2);
    }

    #[test]
    fn basis_size_matches_dimension_formula() {
        for w in (12..=40).step_by(2) {
            let expected = w / 12 - usize::from(w % 12 == 2);
            assert_eq!(cusp_basis(w as u32, 12).unwrap().len(), expected, "w={w}");
        }
    }

    #[test]
    fn hecke_on_delta_and_f18() {
        let d = delta(20);
        let t = hecke_tp(&d, 2).unwrap();
        assert_eq!(t.truncation(), 10);
        assert_eq!(t.expansion, d.expansion.truncate(10).scale(&rat(-24)));
        let f18 = cusp_basis(18, 20).unwrap().remove(0);
        let t = hecke_tp(&f18, 2).unwrap();
        assert_eq!(t.expansion, f18.expansion.truncate(10).scale(&rat(-528)));
        let zero = EllipticForm::new(12, QSeries::zero(10));
        assert!(hecke_tp(&zero, 3).unwrap().expansion.is_zero());
    }

    #[test]
    fn hecke_truncation_errors() {
        let d = delta(5);
        assert!(matches!(
            hecke_tp(&d, 7),
            Err(Error::InsufficientTruncation { .. })
        ));
        assert!(matches!(
            hecke_tp_to(&d, 2, 3),
            Err(Error::InsufficientTruncation { need: 6, .. })
        ));
        assert!(hecke_tp(&d, 4).is_err());
    }

    #[test]
    fn eigenform_examples() {
        let f18 = eigenforms(18, 10).unwrap();
        assert_eq!(f18.len(), 1);
        assert_eq!(f18[0].rational_eigenvalue(2).unwrap(), rat(-528));
        let f22 = eigenforms(22, 10).unwrap();
        assert_eq!(f22[0].rational_eigenvalue(2).unwrap(), rat(-288));
        let f30 = eigenforms(30, 12).unwrap();
        assert_eq!(f30.len(), 2);
        let (a, b) = (f30[0].eigenvalue(2).unwrap(), f30[1].eigenvalue(2).unwrap());
        assert!(!a.is_rational());
        assert_eq!(a.conj(), b);
        assert_eq!(f30[0].field(), f30[1].field());
    }

    #[test]
    fn t2_on_s30_is_irreducible() {
        let chi = hecke_char_poly(30, 2, 12).unwrap();
        assert_eq!(chi.degree(), 2);
        assert!(chi.is_irreducible_quadratic());
    }

    #[test]
    fn hecke_operators_commute() {
        for w in [24u32, 30, 32, 36, 40] {
            let basis = cusp_basis(w, 30).unwrap();
            let t2 = hecke_matrix(&basis, 2).unwrap();
            let t3 = hecke_matrix(&basis, 3).unwrap();
            assert_eq!(t2.mul(&t3), t3.mul(&t2), "w={w}");
        }
    }

    #[test]
    fn eigenvalue_multiplicativity_at_prime_squares() {
        for w in [18u32, 22, 26] {
            let f = eigenforms(w, 40).unwrap().remove(0);
            let series = f.rational_expansion().unwrap();
            for p in [2u64, 3] {
                let ap = f.rational_eigenvalue(p).unwrap();
                let pw = big_rat(int_pow(p, w - 1));
                // T(p^2) = T(p)^2 - p^{w-1} on level one, read at q^1
                let twice =
                    hecke_tp_series(&hecke_tp_series(&series, w, p).unwrap(), w, p).unwrap();
                let via_operator = twice.coeff(1) - &pw;
                assert_eq!(via_operator, &ap * &ap - &pw);
                assert_eq!(series.coeff((p * p) as usize), &via_operator);
            }
        }
    }

    #[test]
    fn large_dimension_is_refused() {
        // dim S_36 = 3
        assert!(matches!(
            eigenforms(36, 12),
            Err(Error::UnsupportedField { degree: 3 })
        ));
    }
}
