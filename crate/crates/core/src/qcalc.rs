//! The q-derivative `D_q f(x) = (f(x) - f(qx)) / ((1 - q) x)`.

use crate::poly::Poly;
use crate::qcore::{qpoch_finite, QValue};
use crate::qhyper::HyperSpec;
use crate::scalar::{sign_pow, Scalar};

/// Coefficient-wise q-derivative: `e_i(D_q p) = (1 - q^{i+1}) / (1 - q) * e_{i+1}(p)`.
pub fn q_derivative<T: Scalar>(p: &Poly<T>, q: &QValue<T>) -> Poly<T> {
    let one_minus_q = T::one() - q.get().clone();
    let coeffs = p
        .coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.clone() * (T::one() - q.pow(i as i64)) / one_minus_q.clone())
        .collect();
    Poly::new(coeffs)
}

/// Constant `c` in `D_q phi(n; a; b)(x) = c * phi(n-1; qa; qb)(q^{s-r} x)`:
/// `(-1)^{s-r} (1 - q^-n) prod(1 - a_i) / ((1 - q) prod(1 - b_j))`.
pub fn qhyper_derivative_constant<T: Scalar>(spec: &HyperSpec<T>) -> T {
    let q = &spec.q;
    let num = spec.upper.iter().fold(T::one() - q.pow(-(spec.n as i64)), |acc, a| acc * qpoch_finite(a, q, 1));
    let den = spec.lower.iter().fold(T::one() - q.get().clone(), |acc, b| acc * qpoch_finite(b, q, 1));
    sign_pow::<T>(spec.balance()) * num / den
}

/// The spec of `phi(n-1; qa; qb)` that the q-derivative maps onto.
pub fn qhyper_derivative_spec<T: Scalar>(spec: &HyperSpec<T>) -> HyperSpec<T> {
    let shift = |v: &[T]| v.iter().map(|x| x.clone() * spec.q.get().clone()).collect();
    HyperSpec::new(spec.n.saturating_sub(1), shift(&spec.upper), shift(&spec.lower), spec.q.clone())
}

/// Constant in `D_q p_n(x; a, b) = c * p_{n-1}(x; qa, qb)`:
/// `q (1 - q^-n)(1 - ab q^{n+1}) / ((1 - q)(1 - aq))`.
pub fn jacobi_derivative_constant<T: Scalar>(n: usize, a: &T, b: &T, q: &QValue<T>) -> T {
    let qv = q.get().clone();
    qv.clone() * (T::one() - q.pow(-(n as i64))) * (T::one() - a.clone() * b.clone() * q.pow(n as i64 + 1))
        / ((T::one() - qv.clone()) * (T::one() - a.clone() * qv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::little_q_jacobi;
    use crate::qhyper::build_qhyper;
    use crate::scalar::ratio;
    use crate::Rational;
    use num_traits::Signed;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> QValue<Rational> {
        QValue::new(ratio(n, d)).unwrap()
    }

    #[test]
    fn monomials_and_constants() {
        let h = q(1, 2);
        assert!(q_derivative(&Poly::constant(ratio(7, 3)), &h).is_zero());
        let x2 = Poly::monomial(ratio(1, 1), 2);
        assert_eq!(q_derivative(&x2, &h), Poly::monomial(ratio(3, 2), 1));
    }

    #[test]
    fn matches_divided_difference() {
        let h = q(2, 5);
        let p = Poly::new(vec![ratio(3, 1), ratio(-1, 2), ratio(5, 7), ratio(2, 1)]);
        let d = q_derivative(&p, &h);
        for x in [ratio(1, 3), ratio(-2, 1), ratio(5, 1)] {
            let dd = (p.eval(&x) - p.eval(&(&x * h.get()))) / ((ratio(1, 1) - h.get()) * &x);
            assert_eq!(d.eval(&x), dd);
        }
    }

    #[test]
    fn little_q_jacobi_lowers_degree_and_shifts_parameters() {
        let h = q(1, 2);
        let (a, b) = (ratio(1, 4), ratio(-1, 1));
        let lhs = q_derivative(&little_q_jacobi(3, &a, &b, &h).unwrap(), &h);
        let c = jacobi_derivative_constant(3, &a, &b, &h);
        let rhs = little_q_jacobi(2, &(&a * h.get()), &(&b * h.get()), &h).unwrap().scale(&c);
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.degree(), Some(2));
    }

    #[test]
    fn coefficient_factor_tends_to_ordinary_derivative() {
        // (1 - q^{i+1}) / (1 - q) -> i + 1 as q -> 1
        let p = Poly::monomial(ratio(1, 1), 5);
        let mut last_gap = ratio(5, 1);
        for m in [2i64, 10, 100, 1000, 10000] {
            let h = q(m - 1, m);
            let gap = (q_derivative(&p, &h).coeff(4) - ratio(5, 1)).abs();
            assert!(gap < last_gap);
            last_gap = gap;
        }
        assert!(last_gap < ratio(1, 100));
    }

    fn small_ratio() -> impl Strategy<Value = Rational> {
        (-9i64..=9, 1i64..=7).prop_map(|(n, d)| ratio(n, d))
    }

    proptest! {
        #[test]
        fn shift_identity_for_general_series(
            n in 1usize..7,
            qd in 2i64..6,
            upper in proptest::collection::vec(small_ratio(), 0..3),
            lower in proptest::collection::vec(small_ratio(), 0..3),
        ) {
            let h = q(1, qd);
            let spec = HyperSpec::new(n, upper, lower, h.clone());
            prop_assume!(spec.check_admissible().is_ok());
            let shifted = qhyper_derivative_spec(&spec);
            prop_assume!(shifted.check_admissible().is_ok());
            let lhs = q_derivative(&build_qhyper(&spec).unwrap(), &h);
            let rhs = build_qhyper(&shifted)
                .unwrap()
                .scale_arg(&h.pow(spec.balance()))
                .scale(&qhyper_derivative_constant(&spec));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn degree_drops_by_one(coeffs in proptest::collection::vec(small_ratio(), 2..8), qd in 2i64..9) {
            let p = Poly::new(coeffs);
            prop_assume!(p.degree().unwrap_or(0) >= 1);
            let d = q_derivative(&p, &q(1, qd));
            prop_assert_eq!(d.degree().map(|x| x + 1), p.degree());
        }
    }
}
