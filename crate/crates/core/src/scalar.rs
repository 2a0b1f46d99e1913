//! Scalar abstraction shared by the polynomial and q-series code.
//!
//! Everything that only needs field arithmetic (coefficient construction,
//! q-Pochhammer products, the q-derivative) is written against [`Scalar`], so
//! it runs on `f64` for quick exploration and on [`BigRational`] for exact
//! work. Root isolation and relation decisions need exact signs and a total
//! order, which is what [`ExactScalar`] adds.

use std::cmp::Ordering;
use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Field-like scalar: the arithmetic used to build and transform polynomials.
pub trait Scalar: Clone + Debug + Display + PartialOrd + Num + Signed + FromPrimitive + Send + Sync + 'static {
    /// Lossy conversion used for display and quick numerics.
    fn to_f64_lossy(&self) -> f64;

    fn from_int(v: i64) -> Self {
        <Self as FromPrimitive>::from_i64(v).expect("every scalar represents small integers")
    }
}

impl Scalar for f64 {
    fn to_f64_lossy(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    fn to_f64_lossy(&self) -> f64 {
        f64::from(*self)
    }
}

impl Scalar for BigRational {
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or_else(|| {
            // to_f64 only fails on overflow; fall back to the sign.
            if self.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        })
    }
}

/// Scalars with exact arithmetic and a total order.
pub trait ExactScalar: Scalar + Ord + Display {
    /// A polynomial prepared for repeated sign queries.
    type SignForm: Clone + Debug + PartialEq + Send + Sync;

    /// Largest integer not exceeding `self`.
    fn floor_value(&self) -> Self;

    /// Prepare the coefficients (constant term first) for sign queries.
    fn sign_form(coeffs: &[Self]) -> Self::SignForm;

    /// Sign of the polynomial at `x`.
    fn sign_at(form: &Self::SignForm, x: &Self) -> Ordering;

    /// Sign variations of `(1+x)^d p((lo + hi x) / (1 + x))` for `lo < hi`.
    fn descartes_variations(form: &Self::SignForm, lo: &Self, hi: &Self) -> usize;
}

impl ExactScalar for BigRational {
    /// Primitive integer coefficients with the same sign everywhere.
    type SignForm = Vec<BigInt>;

    fn floor_value(&self) -> Self {
        self.floor()
    }

    fn sign_form(coeffs: &[Self]) -> Vec<BigInt> {
        let lcm = coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints: Vec<BigInt> = coeffs.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
        let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if g.is_zero() || g.is_one() {
            ints
        } else {
            ints.into_iter().map(|c| c / &g).collect()
        }
    }

    fn sign_at(form: &Vec<BigInt>, x: &Self) -> Ordering {
        // sum c_i m^i d^(n-i) for x = m/d, d > 0
        let (m, d) = (x.numer(), x.denom());
        let mut acc = BigInt::zero();
        let mut dpow = BigInt::one();
        for c in form.iter().rev() {
            acc = acc * m + c * &dpow;
            dpow *= d;
        }
        sign_ordering(acc.sign())
    }

    fn descartes_variations(form: &Vec<BigInt>, lo: &Self, hi: &Self) -> usize {
        let Some((top, rest)) = form.split_last() else {
            return 0;
        };
        let width = hi - lo;
        let (u, v) = (lo.numer(), lo.denom());
        let (s, t) = (width.numer(), width.denom());
        // p(lo + width y) (v t)^d = sum c_i (u t + s v y)^i (v t)^(d-i)
        let (c0, c1, scale) = (u * t, s * v, v * t);
        let mut acc = vec![top.clone()];
        let mut pw = scale.clone();
        for c in rest.iter().rev() {
            let mut next = vec![BigInt::zero(); acc.len() + 1];
            for (k, a) in acc.iter().enumerate() {
                next[k] += a * &c0;
                next[k + 1] += a * &c1;
            }
            next[0] += c * &pw;
            pw *= &scale;
            acc = next;
        }
        acc.reverse();
        let d = acc.len() - 1;
        for i in 0..d {
            for j in (i..d).rev() {
                let add = acc[j + 1].clone();
                acc[j] += add;
            }
        }
        let mut last = 0i8;
        let mut count = 0;
        for c in &acc {
            let sg = sign_ordering(c.sign()) as i8;
            if sg != 0 {
                if last != 0 && sg != last {
                    count += 1;
                }
                last = sg;
            }
        }
        count
    }
}

fn sign_ordering(s: Sign) -> Ordering {
    match s {
        Sign::Plus => Ordering::Greater,
        Sign::Minus => Ordering::Less,
        Sign::NoSign => Ordering::Equal,
    }
}

/// `base^exp` for a signed exponent. `base` must be nonzero when `exp < 0`.
pub fn powi<T: Scalar>(base: &T, exp: i64) -> T {
    let mut acc = T::one();
    let mut b = if exp < 0 { T::one() / base.clone() } else { base.clone() };
    let mut e = exp.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b.clone();
        }
        e >>= 1;
        if e > 0 {
            b = b.clone() * b;
        }
    }
    acc
}

/// Binomial coefficient C(k, 2) as used in the q-power of hypergeometric terms.
pub fn choose2(k: usize) -> i64 {
    let k = k as i64;
    k * (k - 1) / 2
}

/// `(-1)^e` for a signed exponent.
pub fn sign_pow<T: Scalar>(e: i64) -> T {
    if e.rem_euclid(2) == 0 {
        T::one()
    } else {
        -T::one()
    }
}

/// Build a rational `num/den`. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Parse the exact text form `p/q` (or a bare integer `p`).
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::MalformedRational(text.to_string());
    if t.is_empty() {
        return Err(bad());
    }
    match t.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n = BigInt::from_str(t).map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
    }
}

/// Canonical text form: `p/q` in lowest terms, or `p` when the denominator is 1.
pub fn format_rational(value: &BigRational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// `value` rounded to `digits` places after the point, as a decimal string.
/// The rounding error is at most `10^-digits / 2`.
pub fn format_decimal(value: &BigRational, digits: u32) -> String {
    let scale = BigInt::from(10u8).pow(digits);
    let scaled = (value * BigRational::from_integer(scale)).round().to_integer();
    let negative = scaled.is_negative();
    let mut body = scaled.abs().to_string();
    let width = digits as usize + 1;
    if body.len() < width {
        body = "0".repeat(width - body.len()) + &body;
    }
    let (int, frac) = body.split_at(body.len() - digits as usize);
    let sign = if negative { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

/// Serialize a rational in its exact `p/q` text form.
pub fn serialize_rational<S: serde::Serializer>(value: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(value))
}

/// Deserialize a rational from its `p/q` text form.
pub fn deserialize_rational<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
    let text = <String as serde::Deserialize>::deserialize(d)?;
    parse_rational(&text).map_err(serde::de::Error::custom)
}

/// Serialize a list of rationals as `p/q` strings.
pub fn serialize_rationals<S: serde::Serializer>(values: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(values.iter().map(format_rational))
}

/// Deserialize a list of `p/q` strings.
pub fn deserialize_rationals<'de, D: serde::Deserializer<'de>>(
    d: D,
) -> std::result::Result<Vec<BigRational>, D::Error> {
    let texts = <Vec<String> as serde::Deserialize>::deserialize(d)?;
    texts.iter().map(|t| parse_rational(t).map_err(serde::de::Error::custom)).collect()
}

/// Smallest power of two that is `>= value` (value > 0).
pub fn dyadic_ceil<T: ExactScalar>(value: &T) -> T {
    let two = T::one() + T::one();
    let mut p = T::one();
    if *value <= p {
        while p.clone() / two.clone() >= *value {
            p = p / two.clone();
        }
        return p;
    }
    while p < *value {
        p = p * two.clone();
    }
    p
}

/// The rational with the smallest denominator in the closed interval `[lo, hi]`
/// (Stern-Brocot descent). Requires `lo <= hi`.
pub fn simplest_between<T: ExactScalar>(lo: &T, hi: &T) -> T {
    debug_assert!(lo <= hi);
    if lo.is_negative() && hi.is_positive() || lo.is_zero() || hi.is_zero() {
        return T::zero();
    }
    if hi.is_negative() {
        return -simplest_between(&-hi.clone(), &-lo.clone());
    }
    let fl = lo.floor_value();
    if fl == *lo {
        return fl;
    }
    if fl.clone() + T::one() <= *hi {
        return fl + T::one();
    }
    // lo and hi share the integer part; recurse on reciprocals of the fractional parts.
    let lo_frac = lo.clone() - fl.clone();
    let hi_frac = hi.clone() - fl.clone();
    let inner = simplest_between(&(T::one() / hi_frac), &(T::one() / lo_frac));
    fl + T::one() / inner
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_rendering() {
        assert_eq!(format_decimal(&ratio(1, 3), 5), "0.33333");
        assert_eq!(format_decimal(&ratio(-2, 3), 3), "-0.667");
        assert_eq!(format_decimal(&ratio(1, 200), 2), "0.01");
        assert_eq!(format_decimal(&ratio(-1, 1000), 2), "0.00");
        assert_eq!(format_decimal(&ratio(42, 1), 0), "42");
    }

    #[test]
    fn powi_handles_negative_exponents() {
        let q = ratio(1, 2);
        assert_eq!(powi(&q, 3), ratio(1, 8));
        assert_eq!(powi(&q, -3), ratio(8, 1));
        assert_eq!(powi(&q, 0), ratio(1, 1));
        assert!((powi(&0.5f64, -2) - 4.0).abs() < 1e-15);
    }

    #[test]
    fn rational_text_round_trip() {
        assert_eq!(parse_rational("-5/4").unwrap(), ratio(-5, 4));
        assert_eq!(parse_rational("6/8").unwrap(), ratio(3, 4));
        assert_eq!(parse_rational("7").unwrap(), ratio(7, 1));
        assert_eq!(parse_rational("1/-2").unwrap(), ratio(-1, 2));
        assert_eq!(format_rational(&ratio(-5, 4)), "-5/4");
        assert_eq!(format_rational(&ratio(4, 2)), "2");
        for bad in ["", "1/0", "a/2", "1.5", "1/2/3", "/3"] {
            assert!(parse_rational(bad).is_err(), "{bad:?} should be rejected");
        }
    }

    #[test]
    fn simplest_rational_in_interval() {
        assert_eq!(simplest_between(&ratio(3, 10), &ratio(4, 10)), ratio(1, 3));
        assert_eq!(simplest_between(&ratio(79, 100), &ratio(81, 100)), ratio(4, 5));
        assert_eq!(simplest_between(&ratio(-81, 100), &ratio(-79, 100)), ratio(-4, 5));
        assert_eq!(simplest_between(&ratio(-1, 3), &ratio(1, 3)), ratio(0, 1));
        assert_eq!(simplest_between(&ratio(5, 2), &ratio(7, 2)), ratio(3, 1));
    }

    #[test]
    fn dyadic_ceiling() {
        assert_eq!(dyadic_ceil(&ratio(5, 1)), ratio(8, 1));
        assert_eq!(dyadic_ceil(&ratio(1, 1)), ratio(1, 1));
        assert_eq!(dyadic_ceil(&ratio(1, 3)), ratio(1, 2));
        assert_eq!(dyadic_ceil(&ratio(1, 4)), ratio(1, 4));
    }
}
