//! Certified real-root isolation over exact scalars.
//!
//! The square-free part is isolated with Descartes' rule of signs on a
//! bisection tree (Vincent-Collins-Akritas), positive and negative roots
//! separately, after the root at the origin has been divided out. Every
//! open isolating interval has endpoints where the square-free part is
//! nonzero, so a sign change across it certifies the root.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{dyadic_ceil, simplest_between, ExactScalar};
use crate::Rational;

/// Bisections allowed per root during refinement.
pub const REFINEMENT_BUDGET: usize = 10_000;

/// `2^-100`.
pub fn default_eps() -> Rational {
    Rational::new(1.into(), num_bigint::BigInt::from(1u8) << 100usize)
}

/// One distinct real root: either the exact point `lo == hi` or the open
/// interval `(lo, hi)` holding exactly one root of the square-free part.
#[derive(Clone, Debug, PartialEq)]
pub struct RootEntry<T = Rational> {
    pub lo: T,
    pub hi: T,
    pub multiplicity: usize,
    pub exact: Option<T>,
}

impl<T: ExactScalar> RootEntry<T> {
    fn point(v: T, multiplicity: usize) -> Self {
        RootEntry { lo: v.clone(), hi: v.clone(), multiplicity, exact: Some(v) }
    }

    pub fn width(&self) -> T {
        self.hi.clone() - self.lo.clone()
    }

    pub fn midpoint(&self) -> T {
        (self.lo.clone() + self.hi.clone()) / (T::one() + T::one())
    }

    pub fn is_point(&self) -> bool {
        self.exact.is_some()
    }
}

impl<T: ExactScalar> fmt::Display for RootEntry<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(v) => write!(f, "{v}")?,
            None => {
                let half = self.width() / (T::one() + T::one());
                write!(f, "{:.17e} +/- {:.3e}", self.midpoint().to_f64_lossy(), half.to_f64_lossy())?
            }
        }
        if self.multiplicity > 1 {
            write!(f, " (x{})", self.multiplicity)?;
        }
        Ok(())
    }
}

/// Ordered real roots of a polynomial with their multiplicities.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSet<T: ExactScalar = Rational> {
    pub roots: Vec<RootEntry<T>>,
    pub total_count: usize,
    pub certified_real_rooted: bool,
    degree: usize,
    squarefree: Poly<T>,
    form: T::SignForm,
}

impl<T: ExactScalar> RootSet<T> {
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// The monic square-free part whose roots the entries isolate.
    pub fn squarefree(&self) -> &Poly<T> {
        &self.squarefree
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Entry index of every root counted with multiplicity, in order.
    pub fn expanded(&self) -> Vec<usize> {
        self.roots.iter().enumerate().flat_map(|(i, r)| std::iter::repeat_n(i, r.multiplicity)).collect()
    }

    pub fn has_multiple_root(&self) -> bool {
        self.roots.iter().any(|r| r.multiplicity > 1)
    }

    /// Halve the interval of entry `i` once. Returns false for exact entries.
    pub fn bisect(&mut self, i: usize) -> bool {
        let entry = &mut self.roots[i];
        if entry.exact.is_some() {
            return false;
        }
        let mid = entry.midpoint();
        let at_mid = T::sign_at(&self.form, &mid);
        if at_mid == Ordering::Equal {
            *entry = RootEntry::point(mid, entry.multiplicity);
        } else if at_mid == T::sign_at(&self.form, &entry.lo) {
            entry.lo = mid;
        } else {
            entry.hi = mid;
        }
        true
    }

    /// Bisect entry `i` until its width is below `eps`, then try to snap it
    /// to the simplest rational inside.
    pub fn refine(&mut self, i: usize, eps: &T) -> Result<()> {
        let mut steps = 0;
        while self.roots[i].exact.is_none() && self.roots[i].width() >= *eps {
            if steps == REFINEMENT_BUDGET {
                return Err(Error::RefinementBudget(REFINEMENT_BUDGET));
            }
            self.bisect(i);
            steps += 1;
        }
        self.try_snap(i);
        Ok(())
    }

    pub fn refine_all(&mut self, eps: &T) -> Result<()> {
        (0..self.roots.len()).try_for_each(|i| self.refine(i, eps))
    }

    fn try_snap(&mut self, i: usize) {
        let entry = &self.roots[i];
        if entry.exact.is_some() {
            return;
        }
        let guess = simplest_between(&entry.lo, &entry.hi);
        if guess > entry.lo && guess < entry.hi && T::sign_at(&self.form, &guess) == Ordering::Equal {
            let m = entry.multiplicity;
            self.roots[i] = RootEntry::point(guess, m);
        }
    }

    /// Exact comparison of root `i` with the value `v`.
    pub fn cmp_value(&mut self, i: usize, v: &T) -> Result<Ordering> {
        for _ in 0..=REFINEMENT_BUDGET {
            let e = &self.roots[i];
            if let Some(x) = &e.exact {
                return Ok(x.cmp(v));
            }
            if e.hi <= *v {
                return Ok(Ordering::Less);
            }
            if e.lo >= *v {
                return Ok(Ordering::Greater);
            }
            if T::sign_at(&self.form, v) == Ordering::Equal {
                return Ok(Ordering::Equal);
            }
            self.bisect(i);
        }
        Err(Error::RefinementBudget(REFINEMENT_BUDGET))
    }

    /// Root set of `p(x / c)`: every root multiplied by `c > 0`.
    pub fn scaled(&self, c: &T) -> Self {
        assert!(c.is_positive(), "scale factor must be positive");
        let map = |v: &T| v.clone() * c.clone();
        RootSet {
            roots: self
                .roots
                .iter()
                .map(|r| RootEntry {
                    lo: map(&r.lo),
                    hi: map(&r.hi),
                    multiplicity: r.multiplicity,
                    exact: r.exact.as_ref().map(map),
                })
                .collect(),
            total_count: self.total_count,
            certified_real_rooted: self.certified_real_rooted,
            degree: self.degree,
            squarefree: self.squarefree.scale_arg(&(T::one() / c.clone())).monic(),
            form: T::sign_form(self.squarefree.scale_arg(&(T::one() / c.clone())).coeffs()),
        }
    }

    /// Root set of `p(-x)`.
    pub fn reflected(&self) -> Self {
        RootSet {
            roots: self
                .roots
                .iter()
                .rev()
                .map(|r| RootEntry {
                    lo: -r.hi.clone(),
                    hi: -r.lo.clone(),
                    multiplicity: r.multiplicity,
                    exact: r.exact.as_ref().map(|v| -v.clone()),
                })
                .collect(),
            total_count: self.total_count,
            certified_real_rooted: self.certified_real_rooted,
            degree: self.degree,
            squarefree: self.squarefree.reflect().monic(),
            form: T::sign_form(self.squarefree.reflect().coeffs()),
        }
    }

    /// Exact sign pattern of the roots: `Some(Greater)` when all are positive,
    /// `Some(Less)` when all are negative, `None` when mixed or zero is a root.
    pub fn sign(&self) -> Option<Ordering> {
        let zero = T::zero();
        let positive = |r: &RootEntry<T>| r.lo > zero || r.exact.is_none() && r.lo == zero;
        let negative = |r: &RootEntry<T>| r.hi < zero || r.exact.is_none() && r.hi == zero;
        if self.roots.iter().all(positive) {
            Some(Ordering::Greater)
        } else if self.roots.iter().all(negative) {
            Some(Ordering::Less)
        } else {
            None
        }
    }
}

/// Isolate all real roots of `p` and refine each to width below `eps`.
pub fn isolate_real_roots<T: ExactScalar>(p: &Poly<T>, eps: &T) -> Result<RootSet<T>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !eps.is_positive() {
        return Err(Error::InvalidTolerance(eps.to_string()));
    }
    let degree = p.degree().unwrap_or(0);
    let at_origin = p.low_order();
    let rest = p.shift_down(at_origin);
    let factors = rest.squarefree_decomposition();
    let core = factors.iter().fold(Poly::one(), |acc, f| acc * f.clone());

    let mut roots = Vec::new();
    for (lo, hi) in positive_intervals(&core.reflect()).into_iter().rev() {
        roots.push((-hi, -lo));
    }
    let negative = roots.len();
    if at_origin > 0 {
        roots.push((T::zero(), T::zero()));
    }
    roots.extend(positive_intervals(&core));

    let entries = roots
        .into_iter()
        .enumerate()
        .map(|(idx, (lo, hi))| {
            if at_origin > 0 && idx == negative {
                return RootEntry::point(T::zero(), at_origin);
            }
            let m = multiplicity_in(&factors, &lo, &hi);
            if lo == hi {
                RootEntry::point(lo, m)
            } else {
                RootEntry { lo, hi, multiplicity: m, exact: None }
            }
        })
        .collect::<Vec<_>>();

    let squarefree = if at_origin > 0 { core.shift_up(1) } else { core }.monic();
    let total_count = entries.iter().map(|r| r.multiplicity).sum();
    let mut set = RootSet {
        roots: entries,
        total_count,
        certified_real_rooted: total_count == degree,
        degree,
        form: T::sign_form(squarefree.coeffs()),
        squarefree,
    };
    set.refine_all(eps)?;
    Ok(set)
}

/// Which Yun factor `f_i` vanishes inside `[lo, hi]`; that `i` is the multiplicity.
fn multiplicity_in<T: ExactScalar>(factors: &[Poly<T>], lo: &T, hi: &T) -> usize {
    for (i, f) in factors.iter().enumerate() {
        if f.is_constant() {
            continue;
        }
        let (a, b) = (f.eval(lo), f.eval(hi));
        if a.is_zero() || b.is_zero() || a.is_positive() != b.is_positive() {
            return i + 1;
        }
    }
    unreachable!("isolated root belongs to no square-free factor")
}

/// Cauchy bound rounded up to a power of two: every root has `|x| < bound`.
pub fn root_bound<T: ExactScalar>(p: &Poly<T>) -> T {
    let lead = p.leading().expect("nonzero polynomial").abs();
    let max = p.coeffs().iter().take(p.coeffs().len() - 1).map(|c| c.abs() / lead.clone()).fold(T::zero(), |m, v| {
        if v > m {
            v
        } else {
            m
        }
    });
    dyadic_ceil(&(T::one() + max)) * (T::one() + T::one())
}

/// Isolating intervals for the positive roots of a square-free `p` with `p(0) != 0`.
/// No endpoint is a root and the intervals stay clear of the origin.
/// Exact hits are returned as degenerate intervals `(r, r)`.
fn positive_intervals<T: ExactScalar>(p: &Poly<T>) -> Vec<(T, T)> {
    let mut out = Vec::new();
    let d = match p.degree() {
        None | Some(0) => return out,
        Some(d) => d,
    };
    if d == 1 {
        let r = -p.coeff(0) / p.coeff(1);
        if r.is_positive() {
            out.push((r.clone(), r));
        }
        return out;
    }
    let two = T::one() + T::one();
    // positive roots lie strictly between the reciprocal bounds, away from 0
    let floor = T::one() / root_bound(&p.reciprocal(d));
    let form = T::sign_form(p.coeffs());
    let is_root = |x: &T| T::sign_at(&form, x) == Ordering::Equal;
    let mut stack = vec![(floor, root_bound(p))];
    while let Some((lo, hi)) = stack.pop() {
        match T::descartes_variations(&form, &lo, &hi) {
            0 => {}
            1 => out.push((lo, hi)),
            _ => {
                let mid = (lo.clone() + hi.clone()) / two.clone();
                if is_root(&mid) {
                    // keep the neighbours' endpoints off the exact root
                    let mut gap = (hi.clone() - lo.clone()) / (two.clone() * two.clone());
                    loop {
                        let (a, b) = (mid.clone() - gap.clone(), mid.clone() + gap.clone());
                        if !is_root(&a) && !is_root(&b) && T::descartes_variations(&form, &a, &b) == 1 {
                            break;
                        }
                        gap = gap / two.clone();
                    }
                    out.push((mid.clone(), mid.clone()));
                    stack.push((mid.clone() + gap.clone(), hi));
                    stack.push((lo, mid - gap));
                } else {
                    stack.push((mid.clone(), hi));
                    stack.push((lo, mid));
                }
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    out
}

/// Sign variations of `(1+x)^d p((lo + hi x) / (1 + x))`, an upper bound on
/// the number of roots in `(lo, hi)` with the same parity.
pub fn descartes_bound<T: ExactScalar>(p: &Poly<T>, lo: &T, hi: &T) -> usize {
    T::descartes_variations(&T::sign_form(p.coeffs()), lo, hi)
}

/// Exact comparison of root `i` of `a` with root `j` of `b`, refining both
/// sets in place. `common` is `gcd(a.squarefree, b.squarefree)`.
pub fn compare_entries<T: ExactScalar>(
    a: &mut RootSet<T>,
    i: usize,
    b: &mut RootSet<T>,
    j: usize,
    common: &Poly<T>,
) -> Result<Ordering> {
    let form = T::sign_form(common.coeffs());
    let mut steps = 0;
    loop {
        let (x, y) = (&a.roots[i], &b.roots[j]);
        if let (Some(u), Some(v)) = (&x.exact, &y.exact) {
            return Ok(u.cmp(v));
        }
        if x.hi <= y.lo {
            return Ok(Ordering::Less);
        }
        if y.hi <= x.lo {
            return Ok(Ordering::Greater);
        }
        // Overlap: equal exactly when the common factor has a root in the intersection.
        if !common.is_constant() {
            let lo = if x.lo > y.lo { x.lo.clone() } else { y.lo.clone() };
            let hi = if x.hi < y.hi { x.hi.clone() } else { y.hi.clone() };
            let (at_lo, at_hi) = (T::sign_at(&form, &lo), T::sign_at(&form, &hi));
            let zero = Ordering::Equal;
            if at_lo == zero && root_inside(x, &lo) && root_inside(y, &lo)
                || at_hi == zero && root_inside(x, &hi) && root_inside(y, &hi)
                || at_lo != zero && at_hi != zero && at_lo != at_hi
            {
                return Ok(Ordering::Equal);
            }
        }
        if steps == REFINEMENT_BUDGET {
            return Err(Error::RefinementBudget(REFINEMENT_BUDGET));
        }
        steps += 1;
        if x.width() >= y.width() {
            a.bisect(i);
        } else {
            b.bisect(j);
        }
    }
}

fn root_inside<T: ExactScalar>(e: &RootEntry<T>, v: &T) -> bool {
    match &e.exact {
        Some(x) => x == v,
        None => *v > e.lo && *v < e.hi,
    }
}
