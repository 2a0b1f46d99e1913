//! Exact polynomial identities: both sides are built independently and
//! compared coefficient by coefficient.

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{witness, ParamPoint, VerificationRecord, Witness};
use crate::error::{Error, Result};
use crate::families::{
    e_factor, little_q_jacobi, normalized_factor_constant, normalized_little_q_jacobi, q_bessel, q_laguerre,
    stieltjes_wigert,
};
use crate::poly::Poly;
use crate::qcalc::{jacobi_derivative_constant, q_derivative, qhyper_derivative_constant, qhyper_derivative_spec};
use crate::qcore::{qpoch_finite, QValue};
use crate::qhyper::{build_qhyper, HyperSpec};
use crate::scalar::{choose2, format_rational, ratio, sign_pow};
use crate::{PolyExact, Rational};

pub const IDENTITY_IDS: &[&str] = &[
    "contig-1",
    "contig-2",
    "contig-3",
    "contig-4",
    "contig-3-shifted",
    "qderiv-jacobi",
    "qderiv-hyper",
    "factor-bneg",
    "factor-anorm",
    "recip-1",
    "recip-2",
    "recip-3",
    "qdiff-bessel",
    "bessel-limit",
    "sw-limit",
];

const LIMIT_DEPTHS: std::ops::RangeInclusive<i64> = 4..=20;

/// One instance of an identity: `lhs == rhs` must hold exactly.
#[derive(Clone, Debug)]
pub struct SidePair {
    pub label: String,
    pub lhs: PolyExact,
    pub rhs: PolyExact,
}

/// All instances of an identity at one point, plus the constant it uses (if any).
#[derive(Clone, Debug)]
pub struct Sides {
    pub pairs: Vec<SidePair>,
    pub constant: Option<Rational>,
}

impl Sides {
    fn single(lhs: PolyExact, rhs: PolyExact, constant: Option<Rational>) -> Self {
        Sides { pairs: vec![SidePair { label: String::new(), lhs, rhs }], constant }
    }
}

fn div(num: Rational, den: Rational) -> Result<Rational> {
    if den.is_zero() {
        return Err(Error::Regime("zero denominator".into()));
    }
    Ok(num / den)
}

fn need_degree(n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::Regime(format!("needs n >= {min}")));
    }
    Ok(())
}

struct At<'a> {
    q: &'a QValue<Rational>,
    n: usize,
    a: &'a Rational,
    b: &'a Rational,
}

impl At<'_> {
    fn qp(&self, e: i64) -> Rational {
        self.q.pow(e)
    }

    fn qv(&self) -> &Rational {
        self.q.get()
    }

    fn lj(&self, n: usize, a: &Rational, b: &Rational) -> Result<PolyExact> {
        little_q_jacobi(n, a, b, self.q)
    }

    fn phi(&self, upper: Vec<Rational>, lower: Vec<Rational>) -> Result<PolyExact> {
        build_qhyper(&HyperSpec::new(self.n, upper, lower, self.q.clone()))
    }
}

fn one() -> Rational {
    Rational::one()
}

/// Build both sides of identity `id` at `point`.
pub fn identity_sides(id: &str, point: &ParamPoint) -> Result<Sides> {
    let at = At { q: &point.q, n: point.n, a: &point.a, b: &point.b };
    let (n, a, b, q) = (at.n, at.a, at.b, at.qv());
    let ni = n as i64;
    let x = Poly::<Rational>::x();
    match id {
        "contig-1" => {
            need_degree(n, 1)?;
            let c = div(
                a * (one() - at.qp(ni)) * (one() - a * b * at.qp(ni + 3)),
                at.qp(ni - 2) * (one() - a * q) * (one() - a * at.qp(2)),
            )?;
            let q2 = at.qp(2);
            let lhs = -at.lj(n, a, &(b * &q2))?;
            let rhs = (&x * &at.lj(n - 1, &(a * &q2), &(b * &q2))?).scale(&c) - at.lj(n, &(a * q), &(b * q))?;
            Ok(Sides::single(lhs, rhs, Some(c)))
        }
        "contig-2" => {
            need_degree(n, 1)?;
            let c = (one() - a * q) * (one() + b * at.qp(ni) * (a * at.qp(ni + 1) - a * q - one()));
            let lhs = at.lj(n, a, b)?.scale(&c);
            let first = at
                .lj(n, &(a * q), &div(b.clone(), q.clone())?)?
                .scale(&((one() - b * at.qp(ni)) * (one() - a * at.qp(ni + 1))));
            let second = (Poly::linear(-one(), b * q) * at.lj(n - 1, &(a * q), &(b * q))?)
                .scale(&(a * q * (one() - at.qp(ni)) * (one() - a * b * at.qp(ni + 1))));
            Ok(Sides::single(lhs, first + second, Some(c)))
        }
        "contig-3" => {
            need_degree(n, 1)?;
            let c = at.qp(ni) * (one() - a * b * at.qp(ni));
            let lhs = at.lj(n, a, b)?.scale(&c);
            let rhs = at.lj(n, a, &div(b.clone(), q.clone())?)?.scale_arg(q).scale(&(one() - a * b * at.qp(2 * ni)))
                - at.lj(n - 1, a, b)?.scale(&(one() - at.qp(ni)));
            Ok(Sides::single(lhs, rhs, Some(c)))
        }
        "contig-4" => {
            let c = b * at.qp(ni + 1) * (one() - a * at.qp(ni + 1));
            let lhs = at.lj(n + 1, a, b)?.scale(&c);
            let rhs = (Poly::linear(one(), -(q * b)) * at.lj(n, a, &(q * b))?)
                .scale(&(one() - a * b * at.qp(2 * ni + 2)))
                - at.lj(n, a, b)?.scale(&(one() - b * at.qp(ni + 1)));
            Ok(Sides::single(lhs, rhs, Some(c)))
        }
        "contig-3-shifted" => {
            need_degree(n, 1)?;
            let c = one() - a * b * at.qp(2 * ni + 1);
            let lhs = at.lj(n, a, b)?.scale_arg(q).scale(&c);
            let rhs = at.lj(n - 1, a, &(q * b))?.scale(&(one() - at.qp(ni)))
                + at.lj(n, a, &(q * b))?.scale(&(at.qp(ni) * (one() - a * b * at.qp(ni + 1))));
            Ok(Sides::single(lhs, rhs, Some(c)))
        }
        "qderiv-jacobi" => {
            need_degree(n, 1)?;
            let lhs = q_derivative(&at.lj(n, a, b)?, at.q);
            let c = jacobi_derivative_constant(n, a, b, at.q);
            let rhs = at.lj(n - 1, &(a * q), &(b * q))?.scale(&c);
            Ok(Sides::single(lhs, rhs, Some(c)))
        }
        "qderiv-hyper" => {
            need_degree(n, 1)?;
            let upper_all = [a.clone(), b.clone()];
            let lower_all = [b + ratio(1, 7), a * b];
            let mut pairs = Vec::new();
            for r in 0..=2 {
                for s in 0..=2 {
                    let spec = HyperSpec::new(n, upper_all[..r].to_vec(), lower_all[..s].to_vec(), at.q.clone());
                    let shifted = qhyper_derivative_spec(&spec);
                    if spec.check_admissible().is_err() || shifted.check_admissible().is_err() {
                        continue;
                    }
                    let lhs = q_derivative(&build_qhyper(&spec)?, at.q);
                    let rhs = build_qhyper(&shifted)?
                        .scale_arg(&at.qp(spec.balance()))
                        .scale(&qhyper_derivative_constant(&spec));
                    pairs.push(SidePair { label: format!("r={r},s={s}"), lhs, rhs });
                }
            }
            if pairs.is_empty() {
                return Err(Error::Regime("no admissible series shape".into()));
            }
            Ok(Sides { pairs, constant: None })
        }
        "factor-bneg" => {
            need_degree(n, 1)?;
            let mut pairs = Vec::with_capacity(n);
            for k in 1..=n {
                let ki = k as i64;
                let lhs = at.lj(n, a, &at.qp(-ki))?;
                let rhs = e_factor(k, at.q)?.scale_arg(q) * at.lj(n - k, a, &at.qp(ki))?.scale_arg(&at.qp(-ki));
                pairs.push(SidePair { label: format!("k={k}"), lhs, rhs });
            }
            Ok(Sides { pairs, constant: None })
        }
        "factor-anorm" => {
            need_degree(n, 1)?;
            let mut pairs = Vec::with_capacity(n);
            for k in 1..=n {
                let ki = k as i64;
                let lhs = normalized_little_q_jacobi(n, k, b, at.q)?;
                let c = normalized_factor_constant(n, k, b, at.q);
                let rhs = at.lj(n - k, &at.qp(ki), b)?.shift_up(k).scale(&(c * at.qp(ki)));
                pairs.push(SidePair { label: format!("k={k}"), lhs, rhs });
            }
            Ok(Sides { pairs, constant: None })
        }
        "recip-1" => {
            let c = div(one(), qpoch_finite(b, at.q, n) * at.qp(ni))?;
            let lhs = at.phi(vec![], vec![b.clone()])?;
            let inner = at.phi(vec![div(at.qp(1 - ni), b.clone())?], vec![Rational::zero()])?;
            let rhs = inner.scale_arg(&(b * at.qp(ni + 1))).reciprocal(n).scale(&c);
            Ok(Sides::single(lhs, rhs, Some(c)))
        }
        "recip-2" => {
            let c = div(qpoch_finite(a, at.q, n), qpoch_finite(b, at.q, n))?
                * at.qp(-ni - choose2(n))
                * sign_pow::<Rational>(ni);
            let lhs = at.phi(vec![a.clone()], vec![b.clone()])?;
            let inner = at.phi(vec![div(at.qp(1 - ni), b.clone())?], vec![div(at.qp(1 - ni), a.clone())?])?;
            let arg = div(b * at.qp(ni + 1), a.clone())?;
            let rhs = inner.scale_arg(&arg).reciprocal(n).scale(&c);
            Ok(Sides::single(lhs, rhs, Some(c)))
        }
        "recip-3" => {
            let c = qpoch_finite(a, at.q, n) * at.qp(-ni * ni);
            let lhs = at.phi(vec![a.clone()], vec![])?;
            let inner = at.phi(vec![Rational::zero()], vec![div(at.qp(1 - ni), a.clone())?])?;
            let arg = div(at.qp(ni + 1), a.clone())?;
            let rhs = inner.scale_arg(&arg).reciprocal(n).scale(&c);
            Ok(Sides::single(lhs, rhs, Some(c)))
        }
        "qdiff-bessel" => {
            let bessel = q_bessel(n, b, at.q)?;
            let c = -(at.qp(-ni) * (one() - at.qp(ni)) * (one() - b * at.qp(ni))) - b - one();
            let lhs = Poly::linear(one(), &c / q) * bessel.clone();
            let rhs = (&x * &bessel.scale_arg(q)).scale(&-(b / q))
                + Poly::linear(one(), -(one() / q)) * bessel.scale_arg(&(one() / q));
            Ok(Sides::single(lhs, rhs, Some(c)))
        }
        "bessel-limit" | "sw-limit" => {
            Err(Error::InvalidParameter(format!("`{id}` is a limit check without exact sides")))
        }
        _ => Err(Error::UnknownCheck(id.to_string())),
    }
}

/// Maximum relative coefficient deviation of `approx` from `target`
/// (absolute where the target coefficient is zero).
pub fn relative_deviation(approx: &PolyExact, target: &PolyExact) -> Rational {
    let len = approx.coeffs().len().max(target.coeffs().len());
    (0..len)
        .map(|i| {
            let (c, t) = (approx.coeff(i), target.coeff(i));
            let gap = (&c - &t).abs();
            if t.is_zero() {
                gap
            } else {
                gap / t.abs()
            }
        })
        .fold(Rational::zero(), |m, v| if v > m { v } else { m })
}

/// Deviations along `m = 4..=20` for a limit check.
pub fn limit_deviations(id: &str, point: &ParamPoint) -> Result<Vec<Rational>> {
    let (n, q, b) = (point.n, &point.q, &point.b);
    match id {
        "bessel-limit" => {
            let target = q_bessel(n, b, q)?;
            LIMIT_DEPTHS
                .map(|m| {
                    let a = q.pow(m);
                    let approx = little_q_jacobi(n, &a, &(b / (&a * q.get())), q)?.scale_arg(&(one() / q.get()));
                    Ok(relative_deviation(&approx, &target))
                })
                .collect()
        }
        "sw-limit" => {
            let target = stieltjes_wigert(n, q)?;
            LIMIT_DEPTHS
                .map(|m| {
                    let small_b = q.pow(m);
                    let approx = q_laguerre(n, &small_b, q)?.scale_arg(&(q.get() / &small_b));
                    Ok(relative_deviation(&approx, &target))
                })
                .collect()
        }
        _ => Err(Error::UnknownCheck(id.to_string())),
    }
}

pub(crate) fn decimal(v: &Rational) -> String {
    match v.to_f64() {
        Some(f) => format!("{f:.6e}"),
        None => format_rational(v),
    }
}

fn outcome(id: &str, point: &ParamPoint, err: Error) -> VerificationRecord {
    match err {
        Error::Regime(_)
        | Error::ConstraintViolation { .. }
        | Error::DegenerateParameter { .. }
        | Error::InvalidParameter(_) => VerificationRecord::skipped(id, point, err.to_string()),
        other => VerificationRecord::error(id, point, &other),
    }
}

fn compare(id: &str, point: &ParamPoint, sides: &Sides) -> VerificationRecord {
    for pair in &sides.pairs {
        let len = pair.lhs.coeffs().len().max(pair.rhs.coeffs().len());
        if let Some(idx) = (0..len).find(|&i| pair.lhs.coeff(i) != pair.rhs.coeff(i)) {
            let mut w: Witness = witness([
                ("index", idx.to_string()),
                ("lhs", format_rational(&pair.lhs.coeff(idx))),
                ("rhs", format_rational(&pair.rhs.coeff(idx))),
            ]);
            if !pair.label.is_empty() {
                w.insert("instance".into(), pair.label.clone());
            }
            return VerificationRecord::decided(id, point, false, w);
        }
    }
    let mut w = witness([("instances", sides.pairs.len().to_string())]);
    if let Some(c) = &sides.constant {
        w.insert("c".into(), format_rational(c));
    }
    VerificationRecord::decided(id, point, true, w)
}

fn check_limit(id: &str, point: &ParamPoint, eps: &Rational) -> VerificationRecord {
    let devs = match limit_deviations(id, point) {
        Ok(d) => d,
        Err(e) => return outcome(id, point, e),
    };
    let break_at = devs.windows(2).position(|w| w[1] >= w[0]);
    let last = devs.last().cloned().unwrap_or_else(Rational::zero);
    let pass = break_at.is_none() && &last < eps;
    let mut w = witness([("finalDeviation", decimal(&last)), ("eps", format_rational(eps))]);
    if let Some(j) = break_at {
        w.insert("nonDecreasingAtM".into(), (LIMIT_DEPTHS.start() + j as i64 + 1).to_string());
    }
    VerificationRecord::decided(id, point, pass, w)
}

/// Check identity `id` at `point`; limit checks use `eps = 10^-6`.
pub fn check_identity(id: &str, point: &ParamPoint) -> Result<VerificationRecord> {
    if !IDENTITY_IDS.contains(&id) {
        return Err(Error::UnknownCheck(id.to_string()));
    }
    Ok(check_identity_eps(id, point, &ratio(1, 1_000_000)))
}

pub(crate) fn check_identity_eps(id: &str, point: &ParamPoint, eps: &Rational) -> VerificationRecord {
    if id == "bessel-limit" || id == "sw-limit" {
        return check_limit(id, point, eps);
    }
    match identity_sides(id, point) {
        Ok(sides) => compare(id, point, &sides),
        Err(e) => outcome(id, point, e),
    }
}

/// Harness self-test: the same check with left-side coefficient `index` of
/// the first instance raised by one.
pub fn check_identity_corrupted(id: &str, point: &ParamPoint, index: usize) -> Result<VerificationRecord> {
    let mut sides = match identity_sides(id, point) {
        Ok(s) => s,
        Err(Error::UnknownCheck(u)) => return Err(Error::UnknownCheck(u)),
        Err(e) => return Ok(outcome(id, point, e)),
    };
    let first = &mut sides.pairs[0];
    let mut coeffs = first.lhs.coeffs().to_vec();
    if coeffs.len() <= index {
        coeffs.resize(index + 1, Rational::zero());
    }
    coeffs[index] += one();
    first.lhs = Poly::new(coeffs);
    Ok(compare(id, point, &sides))
}
