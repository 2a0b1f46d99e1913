//! Terminating basic hypergeometric series.
//!
//! A [`HyperSpec`] with truncation `n`, upper parameters `a_1..a_r` and lower
//! parameters `b_1..b_s` denotes the polynomial
//!
//! ```text
//! sum_{k=0}^{n} (q^-n;q)_k (a;q)_k / ((b;q)_k (q;q)_k) * ((-1)^k q^C(k,2))^(s-r) * x^k
//! ```
//!
//! with the leading `q^-n` implicit.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::qcore::{qpoch_finite, qpoch_vec, QValue};
use crate::scalar::{choose2, sign_pow, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct HyperSpec<T> {
    pub n: usize,
    pub upper: Vec<T>,
    pub lower: Vec<T>,
    pub q: QValue<T>,
}

impl<T: Scalar> HyperSpec<T> {
    pub fn new(n: usize, upper: Vec<T>, lower: Vec<T>, q: QValue<T>) -> Self {
        HyperSpec { n, upper, lower, q }
    }

    /// `s - r`, the exponent of the `(-1)^k q^C(k,2)` factor.
    pub fn balance(&self) -> i64 {
        self.lower.len() as i64 - self.upper.len() as i64
    }

    /// Reject lower parameters that make some `(b;q)_k`, `k <= n`, vanish,
    /// together with the listed set `{q^-1, ..., q^-n}`.
    pub fn check_admissible(&self) -> Result<()> {
        for (index, b) in self.lower.iter().enumerate() {
            if is_forbidden_lower(b, &self.q, self.n) {
                return Err(Error::ConstraintViolation { index: index + 1, value: format!("{b:?}"), n: self.n });
            }
        }
        Ok(())
    }

    /// The `k`-th coefficient, computed directly from the product formula.
    pub fn coefficient(&self, k: usize) -> T {
        let q = &self.q;
        let top = qpoch_finite(&q.pow(-(self.n as i64)), q, k) * qpoch_vec(&self.upper, q, k);
        let bottom = qpoch_vec(&self.lower, q, k) * qpoch_finite(q.get(), q, k);
        let e = self.balance();
        top / bottom * sign_pow::<T>(e * k as i64) * q.pow(e * choose2(k))
    }
}

/// True when `b` lies in `{1, q^-1, ..., q^-n}`.
pub fn is_forbidden_lower<T: Scalar>(b: &T, q: &QValue<T>, n: usize) -> bool {
    if n == 0 {
        return false;
    }
    (0..=n as i64).any(|m| *b == q.pow(-m))
}

/// Build the polynomial in the variable `x` (argument scaling is up to the caller).
pub fn build_qhyper<T: Scalar>(spec: &HyperSpec<T>) -> Result<Poly<T>> {
    spec.check_admissible()?;
    Ok(Poly::new((0..=spec.n).map(|k| spec.coefficient(k)).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use crate::Rational;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> QValue<Rational> {
        QValue::new(ratio(n, d)).unwrap()
    }

    #[test]
    fn degree_zero_is_one() {
        let spec = HyperSpec::new(0, vec![ratio(3, 7)], vec![ratio(-2, 1)], q(1, 2));
        assert_eq!(build_qhyper(&spec).unwrap(), Poly::one());
    }

    #[test]
    fn little_jacobi_degree_one_by_hand() {
        // 2phi1(q^-1, ab q^2; aq; q, qx) at a = b = q = 1/2 is 1 - 5/4 x.
        let qq = q(1, 2);
        let (a, b) = (ratio(1, 2), ratio(1, 2));
        let spec = HyperSpec::new(1, vec![a.clone() * b * qq.pow(2)], vec![a * qq.get().clone()], qq.clone());
        let p = build_qhyper(&spec).unwrap().scale_arg(qq.get());
        assert_eq!(p, Poly::new(vec![ratio(1, 1), ratio(-5, 4)]));
    }

    #[test]
    fn forbidden_lower_parameter() {
        let qq = q(1, 2);
        let spec = HyperSpec::new(3, vec![], vec![ratio(1, 3), qq.pow(-1)], qq.clone());
        match build_qhyper(&spec) {
            Err(Error::ConstraintViolation { index, .. }) => assert_eq!(index, 2),
            other => panic!("expected constraint violation, got {other:?}"),
        }
        // b = 1 kills (b;q)_1 for any n >= 1.
        let spec = HyperSpec::new(1, vec![], vec![ratio(1, 1)], qq.clone());
        assert!(build_qhyper(&spec).is_err());
        // zero is a literal lower parameter
        let spec = HyperSpec::new(3, vec![], vec![ratio(0, 1)], qq);
        assert!(build_qhyper(&spec).is_ok());
    }

    #[test]
    fn upper_parameter_can_annihilate_top_term() {
        // upper q^-1 truncates the series after k = 1
        let qq = q(1, 3);
        let spec = HyperSpec::new(4, vec![qq.pow(-1)], vec![ratio(1, 5)], qq);
        assert_eq!(build_qhyper(&spec).unwrap().degree(), Some(1));
    }

    fn small_ratio() -> impl Strategy<Value = Rational> {
        (-9i64..=9, 1i64..=7).prop_map(|(n, d)| ratio(n, d))
    }

    proptest! {
        #[test]
        fn coefficients_follow_the_term_ratio(
            n in 1usize..7,
            qd in 2i64..6,
            upper in proptest::collection::vec(small_ratio(), 0..3),
            lower in proptest::collection::vec(small_ratio(), 0..3),
        ) {
            let qq = q(1, qd);
            let spec = HyperSpec::new(n, upper.clone(), lower.clone(), qq.clone());
            prop_assume!(spec.check_admissible().is_ok());
            let p = build_qhyper(&spec).unwrap();
            let e = spec.balance();
            for k in 0..n {
                // c_{k+1} (1-q^{k+1}) prod(1 - b q^k) = c_k (1 - q^{k-n}) prod(1 - a q^k) (-q^k)^e
                let qk = qq.pow(k as i64);
                let mut lhs = p.coeff(k + 1) * (ratio(1, 1) - qq.pow(k as i64 + 1));
                for b in &lower { lhs *= ratio(1, 1) - b * &qk; }
                let mut rhs = p.coeff(k) * (ratio(1, 1) - qq.pow(k as i64 - n as i64));
                for a in &upper { rhs *= ratio(1, 1) - a * &qk; }
                rhs *= sign_pow::<Rational>(e) * crate::scalar::powi(&qk, e);
                prop_assert_eq!(lhs, rhs);
            }
            // the top coefficient is nonzero unless an upper parameter truncates early
            let truncates = upper.iter().any(|a| (0..n as i64).any(|j| *a == qq.pow(-j)));
            prop_assert_eq!(p.coeff(n).is_zero(), truncates);
        }
    }
}
