//! q-Pochhammer symbols: exact finite products and enclosed infinite products.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{powi, Scalar};
use crate::Rational;

/// A base `q` with `0 < q < 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QValue<T>(T);

impl<T: Scalar> QValue<T> {
    pub fn new(q: T) -> Result<Self> {
        if q > T::zero() && q < T::one() {
            Ok(QValue(q))
        } else {
            Err(Error::InvalidQ(q.to_string()))
        }
    }

    pub fn get(&self) -> &T {
        &self.0
    }

    /// `q^e` for a signed exponent.
    pub fn pow(&self, e: i64) -> T {
        powi(&self.0, e)
    }
}

/// `(a; q)_k = prod_{j<k} (1 - a q^j)`; the empty product is 1.
pub fn qpoch_finite<T: Scalar>(a: &T, q: &QValue<T>, k: usize) -> T {
    let mut acc = T::one();
    let mut aq = a.clone();
    for _ in 0..k {
        acc = acc * (T::one() - aq.clone());
        aq = aq * q.get().clone();
    }
    acc
}

/// `prod_j (a_j; q)_k` over a parameter vector.
pub fn qpoch_vec<T: Scalar>(params: &[T], q: &QValue<T>, k: usize) -> T {
    params.iter().fold(T::one(), |acc, a| acc * qpoch_finite(a, q, k))
}

/// A value together with a rigorous bound on its distance to the true quantity.
#[derive(Clone, Debug, PartialEq)]
pub struct Enclosure {
    pub value: Rational,
    pub bound: Rational,
}

impl Enclosure {
    pub fn contains(&self, x: &Rational) -> bool {
        (x - &self.value).abs() <= self.bound
    }
}

/// `(a; q)_inf` to within `tol`.
///
/// The product is accumulated until the tail mass `s = |a| q^J / (1-q)` is
/// below `tol/2` and the total bound fits in `tol`. The tail factor
/// `T = prod_{j>=J}(1 - a q^j)` satisfies `|T - 1| <= e^s - 1 <= s/(1-s)`.
/// Partial products are rounded to a dyadic grid so that bases close to 1 do
/// not explode the denominators; the rounding error is tracked on the same
/// grid, rounded upward.
pub fn qpoch_infinite(a: &Rational, q: &QValue<Rational>, tol: &Rational) -> Result<Enclosure> {
    if !tol.is_positive() {
        return Err(Error::InvalidTolerance(tol.to_string()));
    }
    if a.is_zero() {
        return Ok(Enclosure { value: Rational::one(), bound: Rational::zero() });
    }
    let one = Rational::one();
    let q = q.get();
    let half_tol = tol / Rational::from_integer(2.into());
    // Grid spacing 2^-bits, well below tol.
    let bits = 64 + bits_below(tol);
    let grid = Rational::new(BigInt::one(), BigInt::one() << bits);
    let round = |x: &Rational| -> Rational { (x / &grid).round() * &grid };
    let round_up = |x: &Rational| -> Rational { (x / &grid).ceil() * &grid };

    let mut value = one.clone();
    let mut err = Rational::zero();
    let mut term = a.clone(); // a q^j
    loop {
        let s = term.abs() / (&one - q);
        if s < half_tol && s < one {
            let tail = &s / (&one - &s);
            let bound = &err / (&one - &s) + (value.abs() + &err) * &tail;
            if &bound <= tol {
                return Ok(Enclosure { value, bound });
            }
        }
        let factor = &one - &term;
        if factor.is_zero() {
            return Ok(Enclosure { value: Rational::zero(), bound: Rational::zero() });
        }
        let exact = &value * &factor;
        let rounded = round(&exact);
        err = round_up(&(&err * factor.abs() + (&exact - &rounded).abs()));
        value = rounded;
        term = &term * q;
    }
}

/// Smallest `b` with `2^-b <= tol` (tol > 0).
fn bits_below(tol: &Rational) -> usize {
    let mut b = 0usize;
    let mut p = Rational::one();
    while &p > tol {
        p /= Rational::from_integer(2.into());
        b += 1;
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use proptest::prelude::*;

    fn half() -> QValue<Rational> {
        QValue::new(ratio(1, 2)).unwrap()
    }

    #[test]
    fn q_must_be_in_unit_interval() {
        assert!(QValue::new(ratio(0, 1)).is_err());
        assert!(QValue::new(ratio(1, 1)).is_err());
        assert!(QValue::new(ratio(-1, 2)).is_err());
        assert!(QValue::new(0.5f64).is_ok());
    }

    #[test]
    fn finite_products() {
        let q = half();
        assert_eq!(qpoch_finite(&ratio(7, 3), &q, 0), ratio(1, 1));
        assert_eq!(qpoch_finite(&q.pow(-2), &q, 3), ratio(0, 1));
        assert_eq!(qpoch_finite(&ratio(1, 2), &q, 2), ratio(3, 8));
    }

    #[test]
    fn infinite_product_examples() {
        let q = half();
        let e = qpoch_infinite(&ratio(0, 1), &q, &ratio(1, 10)).unwrap();
        assert_eq!((e.value, e.bound), (ratio(1, 1), ratio(0, 1)));
        let e = qpoch_infinite(&ratio(1, 1), &q, &ratio(1, 1_000_000)).unwrap();
        assert_eq!((e.value, e.bound), (ratio(0, 1), ratio(0, 1)));
        // (1/2; 1/2)_inf = 0.288788095086602421278899721929...
        let tol = ratio(1, 1_000_000_000_000);
        let e = qpoch_infinite(&ratio(1, 2), &q, &tol).unwrap();
        assert!(e.bound <= tol);
        let reference = Rational::new("288788095086602421278899721929".parse().unwrap(), BigInt::from(10u8).pow(30));
        assert!((&e.value - &reference).abs() <= &e.bound + ratio(1, 1_000_000_000_000_000));
        assert!(qpoch_infinite(&ratio(1, 2), &q, &ratio(0, 1)).is_err());
    }

    #[test]
    fn refined_tolerance_stays_within_previous_bound() {
        let q = QValue::new(ratio(9, 10)).unwrap();
        let a = ratio(-3, 2);
        let mut tol = ratio(1, 100);
        let mut prev = qpoch_infinite(&a, &q, &tol).unwrap();
        for _ in 0..4 {
            tol /= ratio(10, 1);
            let next = qpoch_infinite(&a, &q, &tol).unwrap();
            assert!((&next.value - &prev.value).abs() < &prev.bound + &next.bound);
            assert!((&next.value - &prev.value).abs() < prev.bound);
            prev = next;
        }
    }

    proptest! {
        #[test]
        fn finite_product_telescopes(an in -20i64..20, ad in 1i64..9, qd in 2i64..9, k in 0usize..10) {
            let q = QValue::new(ratio(1, qd)).unwrap();
            let a = ratio(an, ad);
            let step = ratio(1, 1) - &a * q.pow(k as i64);
            prop_assert_eq!(qpoch_finite(&a, &q, k + 1), qpoch_finite(&a, &q, k) * step);
        }

        #[test]
        fn terminating_product_vanishes_past_degree(n in 0usize..8, k in 0usize..12, qd in 2i64..7) {
            let q = QValue::new(ratio(1, qd)).unwrap();
            let v = qpoch_finite(&q.pow(-(n as i64)), &q, k);
            prop_assert_eq!(v.is_zero(), k > n);
        }
    }
}
