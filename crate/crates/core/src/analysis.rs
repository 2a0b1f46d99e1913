//! Interlacing, the zero-wise partial order and the logarithmic mesh.
//!
//! All decisions are exact: overlapping isolating intervals are refined
//! until they separate, and coincident roots are detected through the gcd
//! of the two square-free parts.

use std::cmp::Ordering;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::qcore::QValue;
use crate::roots::{compare_entries, isolate_real_roots, RootSet};
use crate::{PolyExact, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    StrictInterlace,
    WeakInterlace,
    Dominates,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DegreePattern {
    EqualDegree,
    DegreeMinusOne,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct InterlacingReport {
    pub relation: Relation,
    pub degree_pattern: DegreePattern,
    /// Position in the merged sequence `l1(p), l1(r), l2(p), ...` of the
    /// first inequality that fails.
    pub witness: Option<usize>,
}

impl InterlacingReport {
    pub fn is_strict(&self) -> bool {
        self.relation == Relation::StrictInterlace
    }

    pub fn is_weak_or_strict(&self) -> bool {
        matches!(self.relation, Relation::StrictInterlace | Relation::WeakInterlace)
    }
}

/// Working copies of two root sets plus their common square-free factor.
pub struct Comparator {
    left: RootSet,
    right: RootSet,
    common: PolyExact,
}

impl Comparator {
    pub fn new(left: &RootSet, right: &RootSet) -> Self {
        let common = left.squarefree().gcd(right.squarefree());
        Comparator { left: left.clone(), right: right.clone(), common }
    }

    /// Compare entry `i` of the left set with entry `j` of the right set.
    pub fn cmp(&mut self, i: usize, j: usize) -> Result<Ordering> {
        compare_entries(&mut self.left, i, &mut self.right, j, &self.common)
    }
}

fn require_certified(rs: &RootSet) -> Result<()> {
    if rs.certified_real_rooted {
        Ok(())
    } else {
        Err(Error::Domain(format!("polynomial of degree {} has only {} real roots", rs.degree(), rs.total_count)))
    }
}

/// Decide `p < r` (strict) or `p <= r` (weak) interlacing from certified root sets.
pub fn interlace(rs_p: &RootSet, rs_r: &RootSet) -> Result<InterlacingReport> {
    require_certified(rs_p)?;
    require_certified(rs_r)?;
    let (n, m) = (rs_p.degree(), rs_r.degree());
    let degree_pattern = if m == n {
        DegreePattern::EqualDegree
    } else if m + 1 == n {
        DegreePattern::DegreeMinusOne
    } else {
        return Err(Error::Shape(format!("interlacing needs deg r in {{deg p, deg p - 1}}, got {n} and {m}")));
    };
    let (ps, rs) = (rs_p.expanded(), rs_r.expanded());
    let mut cmp = Comparator::new(rs_p, rs_r);
    let mut strict = true;
    let mut witness = None;
    for pos in 0..(ps.len() + rs.len()).saturating_sub(1) {
        let k = pos / 2;
        // even positions compare l_k(p) with l_k(r), odd ones l_k(r) with l_{k+1}(p)
        let ord = if pos % 2 == 0 { cmp.cmp(ps[k], rs[k])? } else { cmp.cmp(ps[k + 1], rs[k])?.reverse() };
        match ord {
            Ordering::Less => {}
            Ordering::Equal => strict = false,
            Ordering::Greater => {
                witness = Some(pos);
                break;
            }
        }
    }
    let relation = match witness {
        None if strict => Relation::StrictInterlace,
        None => Relation::WeakInterlace,
        Some(_) if degree_pattern == DegreePattern::EqualDegree && dominates(rs_p, rs_r)? => Relation::Dominates,
        Some(_) => Relation::None,
    };
    Ok(InterlacingReport { relation, degree_pattern, witness })
}

/// `l_k(p)` against `l_k(r)` for every `k` (equal degrees).
pub fn root_orderings(rs_p: &RootSet, rs_r: &RootSet) -> Result<Vec<Ordering>> {
    require_certified(rs_p)?;
    require_certified(rs_r)?;
    if rs_p.degree() != rs_r.degree() {
        return Err(Error::Shape(format!(
            "partial order needs equal degrees, got {} and {}",
            rs_p.degree(),
            rs_r.degree()
        )));
    }
    let (ps, rs) = (rs_p.expanded(), rs_r.expanded());
    let mut cmp = Comparator::new(rs_p, rs_r);
    ps.iter().zip(&rs).map(|(&i, &j)| cmp.cmp(i, j)).collect()
}

/// `p << r`: every `l_k(p) <= l_k(r)`.
pub fn dominates(rs_p: &RootSet, rs_r: &RootSet) -> Result<bool> {
    Ok(root_orderings(rs_p, rs_r)?.iter().all(|o| *o != Ordering::Greater))
}

/// Enclosure of the logarithmic mesh and its exact position relative to a threshold.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LmeshResult {
    #[serde(serialize_with = "crate::scalar::serialize_rational")]
    pub lo: Rational,
    #[serde(serialize_with = "crate::scalar::serialize_rational")]
    pub hi: Rational,
    /// Index `j` (0-based) of the pair `l_j / l_{j+1}` with the largest ratio bound.
    pub argmax: usize,
    /// lmesh equals the threshold exactly.
    pub exact_equals_q: bool,
    /// lmesh compared with the threshold.
    #[serde(serialize_with = "serialize_ordering")]
    pub versus_q: Ordering,
}

fn serialize_ordering<S: serde::Serializer>(o: &Ordering, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(match o {
        Ordering::Less => "less",
        Ordering::Equal => "equal",
        Ordering::Greater => "greater",
    })
}

/// Root set with positive roots, reflecting a negative-rooted one.
fn positive_roots(rs: &RootSet) -> Result<RootSet> {
    require_certified(rs)?;
    if rs.degree() < 2 {
        return Err(Error::UndefinedLmesh(rs.degree()));
    }
    match rs.sign() {
        Some(Ordering::Greater) => Ok(rs.clone()),
        Some(Ordering::Less) => Ok(rs.reflected()),
        _ => Err(Error::Domain("lmesh needs nonzero roots of one sign".into())),
    }
}

/// `lmesh(p)` compared exactly with `threshold` in `(0, 1)`.
pub fn lmesh_against(rs: &RootSet, threshold: &Rational) -> Result<LmeshResult> {
    let one = Rational::one();
    let pos = positive_roots(rs)?;
    if pos.has_multiple_root() {
        let argmax = pos.expanded().windows(2).position(|w| w[0] == w[1]).unwrap_or(0);
        return Ok(LmeshResult {
            lo: one.clone(),
            hi: one.clone(),
            argmax,
            exact_equals_q: *threshold == one,
            versus_q: one.cmp(threshold),
        });
    }
    // l_j against threshold * l_{j+1}
    let scaled = pos.scaled(threshold);
    let mut cmp = Comparator::new(&pos, &scaled);
    let mut versus = Ordering::Less;
    for j in 0..pos.len() - 1 {
        versus = versus.max(cmp.cmp(j, j + 1)?);
        if versus == Ordering::Greater {
            break;
        }
    }
    let mut work = cmp.left;
    let mut eps = work.roots[0].lo.clone() / Rational::from_integer((1u64 << 40).into());
    let (lo, hi, argmax) = loop {
        work.refine_all(&eps)?;
        let (lo, hi, argmax) = ratio_enclosure(&work);
        let settled = match versus {
            Ordering::Less => hi < *threshold,
            Ordering::Greater => lo > *threshold,
            Ordering::Equal => true,
        };
        if settled {
            break (lo, hi.min(one), argmax);
        }
        eps /= Rational::from_integer(256.into());
    };
    Ok(LmeshResult { lo, hi, argmax, exact_equals_q: versus == Ordering::Equal, versus_q: versus })
}

/// Bounds on `max_j l_j / l_{j+1}` from the current intervals (positive roots).
fn ratio_enclosure(rs: &RootSet) -> (Rational, Rational, usize) {
    let (mut lo, mut hi, mut argmax) = (Rational::zero(), Rational::zero(), 0);
    for j in 0..rs.len() - 1 {
        let (a, b) = (&rs.roots[j], &rs.roots[j + 1]);
        let pair_lo = &a.lo / &b.hi;
        let pair_hi = &a.hi / &b.lo;
        if pair_hi > hi {
            hi = pair_hi;
            argmax = j;
        }
        if pair_lo > lo {
            lo = pair_lo;
        }
    }
    (lo, hi, argmax)
}

/// Logarithmic mesh of `p` from its certified root set, decided against `q`.
pub fn lmesh(p: &PolyExact, rs: &RootSet, q: &QValue<Rational>) -> Result<LmeshResult> {
    if p.degree() != Some(rs.degree()) {
        return Err(Error::Shape("root set does not belong to the polynomial".into()));
    }
    lmesh_against(rs, q.get())
}

/// Membership in the lmesh class: `p(x) < p(qx)` (strict) or `p(x) <= p(qx)`.
pub fn in_lmesh_class(p: &PolyExact, q: &QValue<Rational>, strict: bool) -> Result<bool> {
    let rs = isolate_real_roots(p, &coarse_eps())?;
    require_certified(&rs)?;
    let rs = match rs.sign() {
        Some(Ordering::Less) => rs.reflected(),
        Some(Ordering::Greater) => rs,
        _ if rs.is_empty() => rs,
        _ => return Err(Error::Domain("lmesh needs nonzero roots of one sign".into())),
    };
    // roots of p(qx) are l_j / q
    let moved = rs.scaled(&(Rational::one() / q.get()));
    let report = interlace(&rs, &moved)?;
    Ok(if strict { report.is_strict() } else { report.is_weak_or_strict() })
}

/// Isolation width used before on-demand refinement.
pub fn coarse_eps() -> Rational {
    Rational::new(1.into(), num_bigint::BigInt::from(1u64 << 20))
}

/// For roots in `(0, 1)`: the `k` with `q^k < l < q^{k-1}`, or `None` when
/// the root sits exactly on a lattice point or outside `(0, 1)`.
pub fn lattice_cells(rs: &RootSet, q: &QValue<Rational>) -> Result<Vec<Option<i64>>> {
    let mut work = rs.clone();
    let zero = Rational::zero();
    let mut out = Vec::with_capacity(work.len());
    for i in 0..work.len() {
        if work.cmp_value(i, &zero)? != Ordering::Greater || work.cmp_value(i, &Rational::one())? != Ordering::Less {
            out.push(None);
            continue;
        }
        let mut k = 1;
        let cell = loop {
            match work.cmp_value(i, &q.pow(k))? {
                Ordering::Greater => break Some(k),
                Ordering::Equal => break None,
                Ordering::Less => k += 1,
            }
        };
        out.push(cell);
    }
    Ok(out)
}

/// True when every root lies in `(lo, hi)` (or `(lo, hi]` when `closed_hi`).
pub fn roots_within(rs: &RootSet, lo: &Rational, hi: &Rational, closed_hi: bool) -> Result<bool> {
    let mut work = rs.clone();
    for i in 0..work.len() {
        if work.cmp_value(i, lo)? != Ordering::Greater {
            return Ok(false);
        }
        match work.cmp_value(i, hi)? {
            Ordering::Less => {}
            Ordering::Equal if closed_hi => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// Number of roots exactly equal to `v`, counted with multiplicity.
pub fn roots_equal_to(rs: &RootSet, v: &Rational) -> Result<usize> {
    let mut work = rs.clone();
    let mut count = 0;
    for i in 0..work.len() {
        if work.cmp_value(i, v)? == Ordering::Equal {
            count += work.roots[i].multiplicity;
        }
    }
    Ok(count)
}

/// Isolate with the coarse width used by relation checks.
pub fn roots_of(p: &Poly<Rational>) -> Result<RootSet> {
    isolate_real_roots(p, &coarse_eps())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{little_q_jacobi, q_bessel, q_laguerre, stieltjes_wigert};
    use crate::qcalc::q_derivative;
    use crate::scalar::ratio;
    use proptest::prelude::*;

    fn from_roots(rs: &[(i64, i64)]) -> PolyExact {
        rs.iter().fold(Poly::one(), |acc, &(n, d)| acc * Poly::linear(-ratio(n, d), ratio(1, 1)))
    }

    fn roots(p: &PolyExact) -> RootSet {
        roots_of(p).unwrap()
    }

    fn q(n: i64, d: i64) -> QValue<Rational> {
        QValue::new(ratio(n, d)).unwrap()
    }

    #[test]
    fn interlacing_examples() {
        let p = roots(&from_roots(&[(1, 1), (3, 1)]));
        let r = roots(&from_roots(&[(2, 1), (4, 1)]));
        let rep = interlace(&p, &r).unwrap();
        assert_eq!((rep.relation, rep.degree_pattern), (Relation::StrictInterlace, DegreePattern::EqualDegree));
        let r = roots(&from_roots(&[(2, 1)]));
        let rep = interlace(&p, &r).unwrap();
        assert_eq!((rep.relation, rep.degree_pattern), (Relation::StrictInterlace, DegreePattern::DegreeMinusOne));
        let r = roots(&from_roots(&[(3, 1), (4, 1)]));
        assert_eq!(interlace(&p, &r).unwrap().relation, Relation::WeakInterlace);
        let r = roots(&from_roots(&[(5, 1), (6, 1)]));
        let rep = interlace(&p, &r).unwrap();
        assert_eq!((rep.relation, rep.witness), (Relation::Dominates, Some(1)));
        let r = roots(&from_roots(&[(0, 1), (6, 1)]));
        assert_eq!(interlace(&p, &r).unwrap().relation, Relation::None);
        let r = roots(&from_roots(&[(1, 1), (2, 1), (3, 1)]));
        assert!(matches!(interlace(&p, &r), Err(Error::Shape(_))));
        let r = roots(&from_roots(&[]));
        assert!(matches!(interlace(&p, &r), Err(Error::Shape(_))));
    }

    #[test]
    fn partial_order_examples() {
        let p = roots(&from_roots(&[(1, 1), (2, 1)]));
        let r = roots(&from_roots(&[(1, 1), (3, 1)]));
        assert!(dominates(&p, &r).unwrap());
        assert!(!dominates(&r, &p).unwrap());
        let s = roots(&from_roots(&[(1, 1)]));
        assert!(matches!(dominates(&p, &s), Err(Error::Shape(_))));
    }

    #[test]
    fn theorem_two_first_interlacing_sample() {
        let h = q(1, 2);
        let (a, b) = (ratio(1, 4), ratio(-1, 1));
        let p = roots(&little_q_jacobi(3, &a, &b, &h).unwrap());
        let r = roots(&little_q_jacobi(2, &(&a / ratio(2, 1)), &(&b / ratio(2, 1)), &h).unwrap());
        assert!(interlace(&p, &r).unwrap().is_strict());
    }

    #[test]
    fn lmesh_exact_boundary() {
        let h = q(1, 2);
        let p = from_roots(&[(1, 4), (1, 2), (1, 1)]);
        let res = lmesh(&p, &roots(&p), &h).unwrap();
        assert!(res.exact_equals_q);
        assert_eq!((res.lo.clone(), res.hi.clone()), (ratio(1, 2), ratio(1, 2)));
        let p = little_q_jacobi(3, &ratio(1, 3), &h.pow(-3), &h).unwrap();
        let res = lmesh(&p, &roots(&p), &h).unwrap();
        assert!(res.exact_equals_q);
        assert!(in_lmesh_class(&p, &h, false).unwrap());
        assert!(!in_lmesh_class(&p, &h, true).unwrap());
    }

    #[test]
    fn lmesh_family_bounds() {
        let h = q(1, 2);
        let q2 = ratio(1, 4);
        let p = q_laguerre(3, &ratio(1, 2), &h).unwrap();
        assert_eq!(lmesh_against(&roots(&p), &q2).unwrap().versus_q, Ordering::Less);
        let p = q_laguerre(2, &ratio(1, 2), &h).unwrap();
        assert_eq!(lmesh_against(&roots(&p), &q2).unwrap().versus_q, Ordering::Less);
        let p = stieltjes_wigert(4, &h).unwrap();
        assert_ne!(lmesh_against(&roots(&p), &q2).unwrap().versus_q, Ordering::Greater);
        let p = q_bessel(3, &ratio(-2, 1), &h).unwrap();
        let rs = roots(&p);
        assert!(roots_within(&rs, &ratio(0, 1), &ratio(1, 1), false).unwrap());
        assert_eq!(lmesh(&p, &rs, &h).unwrap().versus_q, Ordering::Less);
        assert!(in_lmesh_class(&p, &h, true).unwrap());
    }

    #[test]
    fn lmesh_errors_and_reflection() {
        let h = q(1, 2);
        let p = from_roots(&[(-1, 1), (2, 1)]);
        assert!(matches!(lmesh(&p, &roots(&p), &h), Err(Error::Domain(_))));
        let p = from_roots(&[(0, 1), (2, 1)]);
        assert!(matches!(lmesh(&p, &roots(&p), &h), Err(Error::Domain(_))));
        let p = from_roots(&[(2, 1)]);
        assert!(matches!(lmesh(&p, &roots(&p), &h), Err(Error::UndefinedLmesh(1))));
        let p = from_roots(&[(-8, 1), (-1, 1)]);
        let res = lmesh(&p, &roots(&p), &h).unwrap();
        assert_eq!(res.versus_q, Ordering::Less);
        assert!(res.lo <= ratio(1, 8) && res.hi >= ratio(1, 8));
        let p = from_roots(&[(1, 3), (1, 3), (1, 1)]);
        let res = lmesh(&p, &roots(&p), &h).unwrap();
        assert_eq!((res.hi.clone(), res.versus_q), (ratio(1, 1), Ordering::Greater));
        assert!(!in_lmesh_class(&p, &h, false).unwrap());
        let p = Poly::new(vec![ratio(1, 1), ratio(0, 1), ratio(1, 1)]);
        assert!(matches!(lmesh(&p, &roots(&p), &h), Err(Error::Domain(_))));
    }

    #[test]
    fn lattice_cells_of_jacobi_roots() {
        let h = q(1, 2);
        let p = little_q_jacobi(5, &ratio(1, 2), &ratio(1, 3), &h).unwrap();
        let cells = lattice_cells(&roots(&p), &h).unwrap();
        assert!(cells.iter().all(Option::is_some));
        let mut sorted = cells.clone();
        sorted.dedup();
        assert_eq!(sorted.len(), cells.len());
        let e = from_roots(&[(1, 4), (3, 4)]);
        assert_eq!(lattice_cells(&roots(&e), &h).unwrap(), vec![None, Some(1)]);
    }

    #[test]
    fn q_derivative_stays_in_class_and_interlaces() {
        let h = q(1, 3);
        for n in 2..6 {
            let p = little_q_jacobi(n, &ratio(1, 2), &ratio(-2, 1), &h).unwrap();
            let d = q_derivative(&p, &h);
            assert!(in_lmesh_class(&p, &h, true).unwrap());
            assert!(in_lmesh_class(&d, &h, true).unwrap());
            assert!(interlace(&roots(&p), &roots(&d)).unwrap().is_strict());
        }
    }

    proptest! {
        #[test]
        fn class_membership_matches_lmesh(rs in proptest::collection::vec((1i64..40, 1i64..9), 2..5), qd in 2i64..5) {
            let p = from_roots(&rs);
            let h = q(1, qd);
            let set = roots(&p);
            let res = lmesh(&p, &set, &h).unwrap();
            prop_assert_eq!(in_lmesh_class(&p, &h, true).unwrap(), res.versus_q == Ordering::Less);
            prop_assert_eq!(in_lmesh_class(&p, &h, false).unwrap(), res.versus_q != Ordering::Greater);
            prop_assert!(res.lo <= res.hi);
        }

        #[test]
        fn relations_are_scale_invariant(
            a in proptest::collection::vec((1i64..30, 1i64..5), 3),
            b in proptest::collection::vec((1i64..30, 1i64..5), 3),
            c in (1i64..9, 1i64..9),
        ) {
            let (p, r) = (from_roots(&a), from_roots(&b));
            let c = ratio(c.0, c.1);
            let h = q(1, 2);
            let (sp, sr) = (p.scale_arg(&(ratio(1, 1) / &c)), r.scale_arg(&(ratio(1, 1) / &c)));
            prop_assert_eq!(interlace(&roots(&p), &roots(&r)).unwrap(), interlace(&roots(&sp), &roots(&sr)).unwrap());
            prop_assert_eq!(
                lmesh(&p, &roots(&p), &h).unwrap().versus_q,
                lmesh(&sp, &roots(&sp), &h).unwrap().versus_q
            );
        }

        #[test]
        fn strict_interlacing_implies_domination(
            a in proptest::collection::vec((-30i64..30, 1i64..5), 1..5),
            b in proptest::collection::vec((-30i64..30, 1i64..5), 1..5),
        ) {
            prop_assume!(a.len() == b.len());
            let (p, r) = (roots(&from_roots(&a)), roots(&from_roots(&b)));
            if interlace(&p, &r).unwrap().is_strict() {
                prop_assert!(dominates(&p, &r).unwrap());
            }
        }
    }
}
