//! Named polynomial families and the discrete orthogonality weight.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::qcore::{qpoch_finite, QValue};
use crate::qhyper::{build_qhyper, HyperSpec};
use crate::scalar::{choose2, format_rational, sign_pow, Scalar};
use crate::{PolyExact, Rational};

/// Little q-Jacobi `p_n(x; a, b | q) = 2phi1(q^-n, ab q^{n+1}; aq; q, qx)`.
///
/// `a = q^-m` (m = 1..n) is rejected: use [`normalized_little_q_jacobi`].
/// `b = 0` gives the little q-Laguerre polynomial.
pub fn little_q_jacobi<T: Scalar>(n: usize, a: &T, b: &T, q: &QValue<T>) -> Result<Poly<T>> {
    if let Some(m) = (1..=n as i64).find(|&m| *a == q.pow(-m)) {
        return Err(Error::DegenerateParameter { value: format!("{a:?}"), m: m as usize });
    }
    let upper = a.clone() * b.clone() * q.pow(n as i64 + 1);
    let lower = a.clone() * q.get().clone();
    let spec = HyperSpec::new(n, vec![upper], vec![lower], q.clone());
    Ok(build_qhyper(&spec)?.scale_arg(q.get()))
}

/// Little q-Laguerre, the `b = 0` member of the little q-Jacobi family.
pub fn little_q_laguerre<T: Scalar>(n: usize, a: &T, q: &QValue<T>) -> Result<Poly<T>> {
    little_q_jacobi(n, a, &T::zero(), q)
}

/// q-Laguerre `L_n^(b)(x; q) = (b;q)_n / (q;q)_n * 1phi1(q^-n; b; q, -q^n b x)`.
pub fn q_laguerre<T: Scalar>(n: usize, b: &T, q: &QValue<T>) -> Result<Poly<T>> {
    let spec = HyperSpec::new(n, vec![], vec![b.clone()], q.clone());
    let series = build_qhyper(&spec)?;
    let norm = qpoch_finite(b, q, n) / qpoch_finite(q.get(), q, n);
    let arg = -(q.pow(n as i64) * b.clone());
    Ok(series.scale_arg(&arg).scale(&norm))
}

/// Stieltjes-Wigert `S_n(x) = 1/(q;q)_n * 1phi1(q^-n; 0; q, -q^{n+1} x)`.
pub fn stieltjes_wigert<T: Scalar>(n: usize, q: &QValue<T>) -> Result<Poly<T>> {
    let spec = HyperSpec::new(n, vec![], vec![T::zero()], q.clone());
    let series = build_qhyper(&spec)?;
    let norm = T::one() / qpoch_finite(q.get(), q, n);
    Ok(series.scale_arg(&-q.pow(n as i64 + 1)).scale(&norm))
}

/// q-Bessel `2phi1(q^-n, b q^n; 0; q, x)`.
pub fn q_bessel<T: Scalar>(n: usize, b: &T, q: &QValue<T>) -> Result<Poly<T>> {
    let spec = HyperSpec::new(n, vec![b.clone() * q.pow(n as i64)], vec![T::zero()], q.clone());
    build_qhyper(&spec)
}

/// Normalized little q-Jacobi at `a = q^-k`, defined coefficient-wise:
/// `sum_j (q^-n;q)_j / (q;q)_j (b q^{n-k+1};q)_j (q^{j-k+1};q)_{n-j} (qx)^j`.
pub fn normalized_little_q_jacobi<T: Scalar>(n: usize, k: usize, b: &T, q: &QValue<T>) -> Result<Poly<T>> {
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "normalized little q-Jacobi needs 1 <= k <= n, got k = {k}, n = {n}"
        )));
    }
    let (ni, ki) = (n as i64, k as i64);
    let shifted_b = b.clone() * q.pow(ni - ki + 1);
    let coeffs = (0..=n)
        .map(|j| {
            let ji = j as i64;
            qpoch_finite(&q.pow(-ni), q, j) / qpoch_finite(q.get(), q, j)
                * qpoch_finite(&shifted_b, q, j)
                * qpoch_finite(&q.pow(ji - ki + 1), q, n - j)
                * q.pow(ji)
        })
        .collect();
    Ok(Poly::new(coeffs))
}

/// The constant `c` with `normalized_little_q_jacobi(n, k, b) = c (qx)^k p_{n-k}(x; q^k, b)`.
pub fn normalized_factor_constant<T: Scalar>(n: usize, k: usize, b: &T, q: &QValue<T>) -> T {
    let (ni, ki) = (n as i64, k as i64);
    sign_pow::<T>(ki)
        * q.pow(choose2(k) - ni * ki)
        * qpoch_finite(&(b.clone() * q.pow(ni - ki + 1)), q, k)
        * qpoch_finite(&q.pow(ki + 1), q, n - k)
}

/// `E_k(x) = prod_{j=1}^{k} (1 - q^-j x)`, with roots `q, q^2, ..., q^k`.
pub fn e_factor<T: Scalar>(k: usize, q: &QValue<T>) -> Result<Poly<T>> {
    if k == 0 {
        return Err(Error::InvalidParameter("E_k needs k >= 1".into()));
    }
    Ok((1..=k as i64).fold(Poly::one(), |acc, j| acc * Poly::linear(T::one(), -q.pow(-j))))
}

/// True when `0 < aq < 1` and `bq < 1`.
pub fn jacobi_orthogonal_regime<T: Scalar>(a: &T, b: &T, q: &QValue<T>) -> bool {
    let aq = a.clone() * q.get().clone();
    let bq = b.clone() * q.get().clone();
    aq > T::zero() && aq < T::one() && bq < T::one()
}

/// Mass `(bq;q)_k / (q;q)_k (aq)^k` of the orthogonality measure at `q^k`.
pub fn weight_mass<T: Scalar>(k: usize, a: &T, b: &T, q: &QValue<T>) -> Result<T> {
    if !jacobi_orthogonal_regime(a, b, q) {
        return Err(Error::Regime(format!("weight needs 0 < aq < 1 and bq < 1 (a = {a:?}, b = {b:?})")));
    }
    let aq = a.clone() * q.get().clone();
    let bq = b.clone() * q.get().clone();
    Ok(qpoch_finite(&bq, q, k) / qpoch_finite(q.get(), q, k) * crate::scalar::powi(&aq, k as i64))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    LittleQJacobi,
    LittleQLaguerre,
    QLaguerre,
    StieltjesWigert,
    QBessel,
    NormalizedLittleQJacobi,
    EFactor,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::LittleQJacobi,
        Family::LittleQLaguerre,
        Family::QLaguerre,
        Family::StieltjesWigert,
        Family::QBessel,
        Family::NormalizedLittleQJacobi,
        Family::EFactor,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::LittleQJacobi => "little-q-jacobi",
            Family::LittleQLaguerre => "little-q-laguerre",
            Family::QLaguerre => "q-laguerre",
            Family::StieltjesWigert => "stieltjes-wigert",
            Family::QBessel => "q-bessel",
            Family::NormalizedLittleQJacobi => "normalized-little-q-jacobi",
            Family::EFactor => "e-factor",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

/// A family tag with exact parameters and its precomputed regime flag.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyParams {
    pub family: Family,
    pub n: usize,
    pub q: QValue<Rational>,
    pub a: Option<Rational>,
    pub b: Option<Rational>,
    pub k: Option<usize>,
    orthogonal: bool,
}

impl FamilyParams {
    pub fn new(
        family: Family,
        n: usize,
        q: QValue<Rational>,
        a: Option<Rational>,
        b: Option<Rational>,
        k: Option<usize>,
    ) -> Result<Self> {
        let need = |v: &Option<Rational>, name: &str| -> Result<Rational> {
            v.clone().ok_or_else(|| Error::InvalidParameter(format!("{family} requires parameter {name}")))
        };
        let orthogonal = match family {
            Family::LittleQJacobi => jacobi_orthogonal_regime(&need(&a, "a")?, &need(&b, "b")?, &q),
            Family::LittleQLaguerre => jacobi_orthogonal_regime(&need(&a, "a")?, &Rational::from_integer(0.into()), &q),
            Family::QLaguerre => {
                let b = need(&b, "b")?;
                b > Rational::from_integer(0.into()) && b < Rational::from_integer(1.into())
            }
            Family::QBessel => need(&b, "b")? < Rational::from_integer(0.into()),
            Family::StieltjesWigert => true,
            Family::NormalizedLittleQJacobi => {
                need(&b, "b")?;
                k.ok_or_else(|| Error::InvalidParameter(format!("{family} requires k")))?;
                false
            }
            Family::EFactor => {
                k.ok_or_else(|| Error::InvalidParameter(format!("{family} requires k")))?;
                false
            }
        };
        Ok(FamilyParams { family, n, q, a, b, k, orthogonal })
    }

    /// Whether the parameters sit in the family's orthogonality regime.
    pub fn orthogonal_regime(&self) -> bool {
        self.orthogonal
    }

    pub fn build(&self) -> Result<PolyExact> {
        let q = &self.q;
        let a = || self.a.clone().unwrap_or_default();
        let b = || self.b.clone().unwrap_or_default();
        let k = self.k.unwrap_or(0);
        match self.family {
            Family::LittleQJacobi => little_q_jacobi(self.n, &a(), &b(), q),
            Family::LittleQLaguerre => little_q_laguerre(self.n, &a(), q),
            Family::QLaguerre => q_laguerre(self.n, &b(), q),
            Family::StieltjesWigert => stieltjes_wigert(self.n, q),
            Family::QBessel => q_bessel(self.n, &b(), q),
            Family::NormalizedLittleQJacobi => normalized_little_q_jacobi(self.n, k, &b(), q),
            Family::EFactor => e_factor(k, q),
        }
    }
}

impl fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:n={},q={}", self.family, self.n, format_rational(self.q.get()))?;
        if let Some(a) = &self.a {
            write!(f, ",a={}", format_rational(a))?;
        }
        if let Some(b) = &self.b {
            write!(f, ",b={}", format_rational(b))?;
        }
        if let Some(k) = self.k {
            write!(f, ",k={k}")?;
        }
        Ok(())
    }
}

impl FromStr for FamilyParams {
    type Err = Error;

    /// Parse `family:n=3,q=1/2,a=1/4,b=-1` (keys in any order).
    fn from_str(s: &str) -> Result<Self> {
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let family: Family = name.trim().parse()?;
        let (mut n, mut q, mut a, mut b, mut k) = (None, None, None, None, None);
        for item in rest.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidParameter(format!("expected key=value, got {item:?}")))?;
            let int = || {
                value
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidParameter(format!("{key} must be a nonnegative integer")))
            };
            match key.trim() {
                "n" => n = Some(int()?),
                "k" => k = Some(int()?),
                "q" => q = Some(crate::scalar::parse_rational(value)?),
                "a" => a = Some(crate::scalar::parse_rational(value)?),
                "b" => b = Some(crate::scalar::parse_rational(value)?),
                other => return Err(Error::InvalidParameter(format!("unknown key {other:?}"))),
            }
        }
        let n =
            n.or(k.filter(|_| family == Family::EFactor)).ok_or_else(|| Error::InvalidParameter("missing n".into()))?;
        let q = QValue::new(q.ok_or_else(|| Error::InvalidParameter("missing q".into()))?)?;
        FamilyParams::new(family, n, q, a, b, k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use num_traits::{One, Signed, Zero};
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> QValue<Rational> {
        QValue::new(ratio(n, d)).unwrap()
    }

    fn poly(c: &[(i64, i64)]) -> PolyExact {
        Poly::new(c.iter().map(|&(n, d)| ratio(n, d)).collect())
    }

    #[test]
    fn little_q_jacobi_examples() {
        let h = q(1, 2);
        let p = little_q_jacobi(1, &ratio(1, 2), &ratio(1, 2), &h).unwrap();
        assert_eq!(p, poly(&[(1, 1), (-5, 4)]));
        assert_eq!(little_q_jacobi(0, &ratio(3, 1), &ratio(-7, 1), &h).unwrap(), Poly::one());
        match little_q_jacobi(3, &h.pow(-2), &ratio(1, 3), &h) {
            Err(Error::DegenerateParameter { m, .. }) => assert_eq!(m, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn jacobi_with_b_at_lattice_is_shifted_e_factor() {
        // b = q^-3 with n = 3: p_3 = E_3(qx), roots 1, 2, 4
        let h = q(1, 2);
        let p = little_q_jacobi(3, &ratio(1, 3), &h.pow(-3), &h).unwrap();
        let e3 = e_factor(3, &h).unwrap().scale_arg(h.get());
        assert_eq!(p, e3);
        assert_eq!(e3, poly(&[(1, 1), (-1, 1)]) * poly(&[(1, 1), (-2, 1)]) * poly(&[(1, 1), (-4, 1)]));
    }

    #[test]
    fn q_laguerre_and_stieltjes_wigert_examples() {
        let h = q(1, 2);
        assert_eq!(q_laguerre(1, &ratio(1, 2), &h).unwrap(), poly(&[(1, 1), (-1, 1)]));
        assert_eq!(q_laguerre(0, &ratio(1, 2), &h).unwrap(), Poly::one());
        assert!(q_laguerre(2, &h.pow(-1), &h).is_err());
        assert_eq!(stieltjes_wigert(1, &h).unwrap(), poly(&[(2, 1), (-1, 1)]));
        assert_eq!(stieltjes_wigert(0, &h).unwrap(), Poly::one());
        // L_2^(1/2)(x; 1/2) by hand: 3/2 - (7/2)x + x^2/2 ... checked against the series below
        let l2 = q_laguerre(2, &ratio(1, 2), &h).unwrap();
        assert_eq!(l2.degree(), Some(2));
        // discriminant positive, both roots positive: product and sum > 0
        let (c0, c1, c2) = (l2.coeff(0), l2.coeff(1), l2.coeff(2));
        assert!((&c1 * &c1 - ratio(4, 1) * &c0 * &c2).is_positive());
        assert!((&c0 / &c2).is_positive() && (-(&c1) / &c2).is_positive());
    }

    #[test]
    fn q_bessel_examples() {
        let h = q(1, 2);
        assert_eq!(q_bessel(1, &ratio(-1, 1), &h).unwrap(), poly(&[(1, 1), (-3, 1)]));
        assert_eq!(q_bessel(0, &ratio(-1, 1), &h).unwrap(), Poly::one());
    }

    #[test]
    fn e_factor_examples() {
        let h = q(1, 2);
        assert_eq!(e_factor(1, &h).unwrap(), poly(&[(1, 1), (-2, 1)]));
        assert_eq!(e_factor(2, &h).unwrap(), poly(&[(1, 1), (-6, 1), (8, 1)]));
        assert!(e_factor(0, &h).is_err());
        let e4 = e_factor(4, &h).unwrap().scale_arg(h.get());
        for j in 0..4 {
            assert!(e4.eval(&h.pow(j)).is_zero());
        }
    }

    #[test]
    fn normalized_family_matches_factorization() {
        let h = q(1, 2);
        for (n, k, b) in [(1, 1, ratio(0, 1)), (2, 2, ratio(1, 3)), (4, 2, ratio(-2, 1)), (5, 3, ratio(3, 7))] {
            let lhs = normalized_little_q_jacobi(n, k, &b, &h).unwrap();
            let c = normalized_factor_constant(n, k, &b, &h);
            let rhs =
                little_q_jacobi(n - k, &h.pow(k as i64), &b, &h).unwrap().shift_up(k).scale(&(c * h.pow(k as i64)));
            assert_eq!(lhs, rhs, "n={n} k={k}");
            for j in 0..k {
                assert!(lhs.coeff(j).is_zero());
            }
        }
        // (n=2, k=2, b=1/3, q=1/2): c = q^{1-4} (b q; q)_2 (q^3; q)_0 = 8 (5/6)(11/12)
        let c = normalized_factor_constant(2, 2, &ratio(1, 3), &h);
        assert_eq!(c, ratio(8, 1) * ratio(5, 6) * ratio(11, 12));
        assert!(normalized_little_q_jacobi(2, 3, &ratio(0, 1), &h).is_err());
        assert!(normalized_little_q_jacobi(2, 0, &ratio(0, 1), &h).is_err());
    }

    #[test]
    fn weight_masses() {
        let h = q(1, 2);
        let (a, b) = (ratio(1, 2), ratio(1, 2));
        assert_eq!(weight_mass(0, &a, &b, &h).unwrap(), ratio(1, 1));
        assert_eq!(weight_mass(1, &a, &b, &h).unwrap(), ratio(3, 8));
        for k in 0..=20 {
            assert!(weight_mass(k, &ratio(3, 2), &ratio(-5, 1), &h).unwrap().is_positive());
        }
        assert!(matches!(weight_mass(1, &ratio(2, 1), &b, &h), Err(Error::Regime(_))));
        assert!(matches!(weight_mass(1, &a, &ratio(2, 1), &h), Err(Error::Regime(_))));
    }

    #[test]
    fn family_params_parse_and_flags() {
        let p: FamilyParams = "little-q-jacobi:n=1,q=1/2,a=1/2,b=1/2".parse().unwrap();
        assert!(p.orthogonal_regime());
        assert_eq!(p.build().unwrap(), poly(&[(1, 1), (-5, 4)]));
        assert_eq!(p.to_string(), "little-q-jacobi:n=1,q=1/2,a=1/2,b=1/2");
        let p: FamilyParams = "q-bessel:n=2,q=1/3,b=1".parse().unwrap();
        assert!(!p.orthogonal_regime());
        let p: FamilyParams = "q-laguerre:n=2,q=1/3,b=1/2".parse().unwrap();
        assert!(p.orthogonal_regime());
        assert!("bogus:n=1,q=1/2".parse::<FamilyParams>().is_err());
        assert!("q-bessel:n=1,q=2,b=-1".parse::<FamilyParams>().is_err());
        assert!("little-q-jacobi:n=1,q=1/2,a=1/2".parse::<FamilyParams>().is_err());
    }

    #[test]
    fn generic_over_floats() {
        let h = QValue::new(0.5f64).unwrap();
        let p = little_q_jacobi(1, &0.5, &0.5, &h).unwrap();
        assert!((p.coeff(1) + 1.25).abs() < 1e-15);
        let p = q_bessel(1, &-1.0f32, &QValue::new(0.5f32).unwrap()).unwrap();
        assert!((p.coeff(1) + 3.0).abs() < 1e-6);
    }

    proptest! {
        #[test]
        fn laguerre_reciprocal_identity(n in 1usize..7, qd in 2i64..6, bn in 1i64..9, bd in 1i64..9) {
            // 1phi1(q^-n; b; q, x) = x^n / ((b;q)_n q^n) 2phi1(q^-n, q^{1-n}/b; 0; q, b q^{n+1}/x)
            let h = q(1, qd);
            let b = ratio(bn, bd);
            let spec = HyperSpec::new(n, vec![], vec![b.clone()], h.clone());
            prop_assume!(spec.check_admissible().is_ok());
            let lhs = build_qhyper(&spec).unwrap();
            let other = HyperSpec::new(n, vec![h.pow(1 - n as i64) / &b], vec![Rational::zero()], h.clone());
            let rhs = build_qhyper(&other).unwrap()
                .scale_arg(&(&b * h.pow(n as i64 + 1)))
                .reciprocal(n)
                .scale(&(Rational::one() / (qpoch_finite(&b, &h, n) * h.pow(n as i64))));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
