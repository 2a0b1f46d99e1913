//! Zero-location theorems evaluated on one grid point.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::identities::decimal;
use super::table1::{check_row, TABLE1_IDS};
use super::{witness, GridSpec, ParamPoint, VerificationRecord, Witness};
use crate::analysis::{interlace, lattice_cells, lmesh_against, root_orderings, roots_of, roots_within};
use crate::error::{Error, Result};
use crate::families::{jacobi_orthogonal_regime, little_q_jacobi, q_bessel, q_laguerre, stieltjes_wigert, weight_mass};
use crate::qhyper::{build_qhyper, HyperSpec};
use crate::roots::RootSet;
use crate::scalar::{format_rational, ratio};
use crate::{PolyExact, Rational};

pub const PROPERTY_IDS: &[&str] = &[
    "thmA-1",
    "thmA-2",
    "thmA-3",
    "thm1-monotone-a",
    "thm1-monotone-b",
    "thm2-lmesh",
    "thm2-i",
    "thm2-ii",
    "thm2-iii",
    "cor-i",
    "cor-ii",
    "bessel-lmesh",
    "bessel-interlace",
    "qlag-lmesh",
    "qlag-interlace",
    "sw-lmesh",
    "phi21-mono-1",
    "phi21-mono-2",
    "table1-row-1",
    "table1-row-2",
    "table1-row-3",
    "table1-row-4",
    "table1-row-5",
    "table1-row-6",
    "table1-row-7",
    "table1-row-8",
    "table1-row-9",
    "table1-row-10",
    "orthogonality",
];

/// Result of an in-regime evaluation: pass flag and witness.
type Verdict = Result<(bool, Witness)>;

enum Gate {
    In,
    Out(String),
}

fn gate(cond: bool, reason: &str) -> Gate {
    if cond {
        Gate::In
    } else {
        Gate::Out(reason.to_string())
    }
}

fn jacobi_regime(p: &ParamPoint) -> bool {
    jacobi_orthogonal_regime(&p.a, &p.b, &p.q)
}

fn regime_for(id: &str, p: &ParamPoint) -> Gate {
    let zero = Rational::zero();
    let unit = |v: &Rational| *v > zero && *v < Rational::one();
    match id {
        "thmA-1" | "thmA-2" | "thmA-3" | "thm1-monotone-a" | "thm1-monotone-b" | "thm2-lmesh" | "thm2-i"
        | "thm2-ii" | "orthogonality" => gate(jacobi_regime(p), "needs 0 < aq < 1 and bq < 1"),
        "thm2-iii" | "cor-ii" => gate(jacobi_regime(p) && p.b < zero, "needs 0 < aq < 1 and b < 0"),
        "cor-i" => gate(jacobi_regime(p) && p.b >= zero, "needs 0 < aq < 1 and 0 <= bq < 1"),
        "bessel-lmesh" | "bessel-interlace" => gate(p.b < zero, "needs b < 0"),
        "qlag-lmesh" | "qlag-interlace" => gate(unit(&p.b), "needs 0 < b < 1"),
        "sw-lmesh" => Gate::In,
        "phi21-mono-1" => gate(
            unit(&p.b) && p.a >= zero && p.a < &p.b * p.q.pow(p.n as i64 - 1),
            "needs 0 < b < 1 and 0 <= a < b q^(n-1)",
        ),
        "phi21-mono-2" => gate(unit(&p.b) && p.a < zero, "needs 0 < b < 1 and a < 0"),
        _ => Gate::In,
    }
}

/// Evaluate property `id` at one grid point.
pub fn check_property_at(id: &str, point: &ParamPoint, grid: &GridSpec) -> VerificationRecord {
    if let Some(row) = TABLE1_IDS.iter().position(|r| *r == id) {
        return check_row(row + 1, point);
    }
    if let Gate::Out(reason) = regime_for(id, point) {
        return VerificationRecord::skipped(id, point, reason);
    }
    let verdict = match id {
        "thmA-1" => thm_a(point, 1),
        "thmA-2" => thm_a(point, 2),
        "thmA-3" => thm_a(point, 3),
        "thm1-monotone-a" => monotone(point, grid, true),
        "thm1-monotone-b" => monotone(point, grid, false),
        "thm2-lmesh" => thm2_lmesh(point),
        "thm2-i" | "thm2-ii" | "thm2-iii" => thm2_relation(point, id),
        "cor-i" => cor_i(point, grid),
        "cor-ii" => cor_ii(point, grid),
        "bessel-lmesh" => family_lmesh(point, Family::Bessel),
        "qlag-lmesh" => family_lmesh(point, Family::QLaguerre),
        "sw-lmesh" => family_lmesh(point, Family::StieltjesWigert),
        "bessel-interlace" => bessel_interlace(point, grid),
        "qlag-interlace" => qlag_interlace(point, grid),
        "phi21-mono-1" => phi21_mono_1(point, grid),
        "phi21-mono-2" => phi21_mono_2(point, grid),
        "orthogonality" => orthogonality(point, &grid.eps),
        _ => Err(Error::UnknownCheck(id.to_string())),
    };
    finish(id, point, verdict)
}

pub(crate) fn finish(id: &str, point: &ParamPoint, verdict: Verdict) -> VerificationRecord {
    match verdict {
        Ok((pass, w)) => VerificationRecord::decided(id, point, pass, w),
        // a claimed real-rooted polynomial that is not: a genuine failure
        Err(Error::Domain(msg)) => VerificationRecord::decided(id, point, false, witness([("reason", msg)])),
        Err(
            e @ (Error::Regime(_)
            | Error::ConstraintViolation { .. }
            | Error::DegenerateParameter { .. }
            | Error::InvalidParameter(_)),
        ) => VerificationRecord::skipped(id, point, e.to_string()),
        Err(e) => VerificationRecord::error(id, point, &e),
    }
}

fn lj(p: &ParamPoint, n: usize, a: &Rational, b: &Rational) -> Result<PolyExact> {
    little_q_jacobi(n, a, b, &p.q)
}

/// Certified root set, or a Domain error naming what failed.
fn real_roots(poly: &PolyExact, what: &str) -> Result<RootSet> {
    let rs = roots_of(poly)?;
    if !rs.certified_real_rooted {
        return Err(Error::Domain(format!("{what}: only {} of {} roots are real", rs.total_count, rs.degree())));
    }
    Ok(rs)
}

/// `left < right` with the observed relation in the witness.
fn strict(left: &PolyExact, right: &PolyExact) -> Verdict {
    let report = interlace(&real_roots(left, "left")?, &real_roots(right, "right")?)?;
    let mut w = witness([("relation", format!("{:?}", report.relation))]);
    if let Some(pos) = report.witness {
        w.insert("position".into(), pos.to_string());
    }
    Ok((report.is_strict(), w))
}

fn thm_a(p: &ParamPoint, which: u8) -> Verdict {
    let (n, a, b, q) = (p.n, &p.a, &p.b, p.q.get());
    let q2 = p.q.pow(2);
    match which {
        1 => strict(&lj(p, n + 1, a, b)?, &lj(p, n, a, &(b * q))?),
        2 => strict(&lj(p, n + 1, a, b)?, &lj(p, n, a, &(b * &q2))?),
        _ => strict(&lj(p, n, a, &(b * &q2))?, &lj(p, n, &(a * q), &(b * q))?),
    }
}

fn thm2_relation(p: &ParamPoint, id: &str) -> Verdict {
    let (n, a, b, q) = (p.n, &p.a, &p.b, p.q.get());
    if n == 0 {
        return Err(Error::Regime("needs n >= 1".into()));
    }
    let q2 = p.q.pow(2);
    match id {
        "thm2-i" => strict(&lj(p, n, a, b)?, &lj(p, n - 1, &(a * q), &(b * q))?),
        "thm2-ii" => strict(&lj(p, n, a, &(b * &q2))?, &lj(p, n, &(a * &q2), b)?),
        _ => strict(&lj(p, n, a, b)?, &lj(p, n, a, &(b * &q2))?),
    }
}

fn thm2_lmesh(p: &ParamPoint) -> Verdict {
    let poly = lj(p, p.n, &p.a, &p.b)?;
    let rs = real_roots(&poly, "p_n")?;
    let simple = !rs.has_multiple_root();
    let inside = roots_within(&rs, &Rational::zero(), &Rational::one(), false)?;
    let cells = lattice_cells(&rs, &p.q)?;
    let mut distinct = cells.iter().all(Option::is_some);
    let mut sorted: Vec<_> = cells.iter().flatten().collect();
    sorted.dedup();
    distinct &= sorted.len() == cells.len();
    let mut w = witness([
        ("simple", simple.to_string()),
        ("inUnitInterval", inside.to_string()),
        ("distinctCells", distinct.to_string()),
    ]);
    let mut pass = simple && inside && distinct;
    if rs.degree() >= 2 && pass {
        let m = lmesh_against(&rs, p.q.get())?;
        w.insert("lmesh".into(), format!("[{}, {}]", decimal(&m.lo), decimal(&m.hi)));
        pass &= m.versus_q == Ordering::Less;
    }
    Ok((pass, w))
}

/// Theorem 1 against every larger in-regime grid value of `a` (or `b`).
fn monotone(p: &ParamPoint, grid: &GridSpec, vary_a: bool) -> Verdict {
    let base = lj(p, p.n, &p.a, &p.b)?;
    let base_rs = real_roots(&base, "p_n")?;
    let values = if vary_a { &grid.a_values } else { &grid.b_values };
    let current = if vary_a { &p.a } else { &p.b };
    let mut larger: Vec<&Rational> = values.iter().filter(|v| *v > current).collect();
    larger.sort();
    larger.dedup();
    let (mut pairs, mut strict_moves, mut failures) = (0usize, 0usize, Vec::new());
    for v in larger {
        let (a2, b2) = if vary_a { (v, &p.b) } else { (&p.a, v) };
        if !jacobi_orthogonal_regime(a2, b2, &p.q) {
            continue;
        }
        let other = real_roots(&lj(p, p.n, a2, b2)?, "p_n")?;
        // zeros decrease in a and increase in b
        let (lower, upper) = if vary_a { (&other, &base_rs) } else { (&base_rs, &other) };
        let orderings = root_orderings(lower, upper)?;
        pairs += 1;
        if orderings.contains(&Ordering::Greater) {
            failures.push(format_rational(v));
        } else if orderings.contains(&Ordering::Less) {
            strict_moves += 1;
        }
    }
    let mut w = witness([("pairs", pairs.to_string()), ("strictMoves", strict_moves.to_string())]);
    if !failures.is_empty() {
        w.insert("failedAgainst".into(), failures.join(" "));
    }
    Ok((failures.is_empty(), w))
}

/// Run a family of `left < right` comparisons, collecting failures.
fn all_strict(cases: impl IntoIterator<Item = (String, Result<(PolyExact, PolyExact)>)>) -> Verdict {
    let (mut count, mut failures) = (0usize, Vec::new());
    for (label, polys) in cases {
        let (left, right) = polys?;
        let (ok, w) = strict(&left, &right)?;
        count += 1;
        if !ok {
            failures.push(format!("{label}:{}", w["relation"]));
        }
    }
    let mut w = witness([("pairs", count.to_string())]);
    if !failures.is_empty() {
        w.insert("failed".into(), failures.join(" "));
    }
    Ok((failures.is_empty(), w))
}

fn cor_i(p: &ParamPoint, grid: &GridSpec) -> Verdict {
    let ts = grid.t_for(&p.q);
    let mut cases = Vec::new();
    for t1 in &ts {
        for t2 in &ts {
            let (b1, a2) = (t1 * &p.b, t2 * &p.a);
            if (t1 * t2).is_one() || (b1 == p.b && a2 == p.a) {
                continue;
            }
            let label = format!("t1={},t2={}", format_rational(t1), format_rational(t2));
            let polys = lj(p, p.n, &p.a, &b1).and_then(|l| Ok((l, lj(p, p.n, &a2, &p.b)?)));
            cases.push((label, polys));
        }
    }
    all_strict(cases)
}

fn cor_ii(p: &ParamPoint, grid: &GridSpec) -> Verdict {
    let cases = grid
        .t_for(&p.q)
        .into_iter()
        .filter(|t| !t.is_one())
        .map(|t| {
            let polys = lj(p, p.n, &p.a, &p.b).and_then(|l| Ok((l, lj(p, p.n, &p.a, &(&t * &p.b))?)));
            (format!("t1={}", format_rational(&t)), polys)
        })
        .collect::<Vec<_>>();
    all_strict(cases)
}

fn phi21(p: &ParamPoint, a: &Rational, b: &Rational) -> Result<PolyExact> {
    build_qhyper(&HyperSpec::new(p.n, vec![a.clone()], vec![b.clone()], p.q.clone()))
}

fn phi21_mono_1(p: &ParamPoint, grid: &GridSpec) -> Verdict {
    let ts = grid.t_for(&p.q);
    let mut cases = Vec::new();
    for t1 in &ts {
        for t2 in &ts {
            let (a1, a2, b2) = (t1 * &p.a, t2 * &p.a, t2 * &p.b);
            if (t1 * t2).is_one() || (a1 == a2 && b2 == p.b) {
                continue;
            }
            let label = format!("t1={},t2={}", format_rational(t1), format_rational(t2));
            let polys = phi21(p, &a1, &p.b).and_then(|l| Ok((l, phi21(p, &a2, &b2)?)));
            cases.push((label, polys));
        }
    }
    all_strict(cases)
}

fn phi21_mono_2(p: &ParamPoint, grid: &GridSpec) -> Verdict {
    let cases = grid
        .t_for(&p.q)
        .into_iter()
        .filter(|t| !t.is_one())
        .map(|t| {
            let polys = phi21(p, &p.a, &p.b).and_then(|l| Ok((l, phi21(p, &(&t * &p.a), &p.b)?)));
            (format!("t1={}", format_rational(&t)), polys)
        })
        .collect::<Vec<_>>();
    all_strict(cases)
}

fn bessel_interlace(p: &ParamPoint, grid: &GridSpec) -> Verdict {
    let base = q_bessel(p.n, &p.b, &p.q)?;
    let base_rs = real_roots(&base, "q-Bessel")?;
    let (mut observed, mut pass) = (Vec::new(), true);
    for t in grid.t_interior(&p.q) {
        let moved = real_roots(&q_bessel(p.n, &(&t * &p.b), &p.q)?, "q-Bessel")?;
        let report = interlace(&base_rs, &moved)?;
        pass &= report.is_weak_or_strict();
        observed.push(format!("t={}:{:?}", format_rational(&t), report.relation));
    }
    Ok((pass, witness([("observed", observed.join(" "))])))
}

fn qlag_interlace(p: &ParamPoint, grid: &GridSpec) -> Verdict {
    let cases = grid
        .t_interior(&p.q)
        .into_iter()
        .map(|t| {
            let polys = q_laguerre(p.n, &p.b, &p.q).and_then(|l| Ok((l, q_laguerre(p.n, &(&t * &p.b), &p.q)?)));
            (format!("t={}", format_rational(&t)), polys)
        })
        .collect::<Vec<_>>();
    all_strict(cases)
}

enum Family {
    Bessel,
    QLaguerre,
    StieltjesWigert,
}

fn family_lmesh(p: &ParamPoint, family: Family) -> Verdict {
    let q = &p.q;
    let (poly, threshold, strict_bound, unit) = match family {
        Family::Bessel => (q_bessel(p.n, &p.b, q)?, q.get().clone(), true, true),
        Family::QLaguerre => (q_laguerre(p.n, &p.b, q)?, q.pow(2), true, false),
        Family::StieltjesWigert => (stieltjes_wigert(p.n, q)?, q.pow(2), false, false),
    };
    let rs = real_roots(&poly, "family")?;
    let located = if unit {
        roots_within(&rs, &Rational::zero(), &Rational::one(), false)?
    } else {
        rs.is_empty() || rs.sign() == Some(Ordering::Greater)
    };
    let mut w = witness([("located", located.to_string())]);
    let mut pass = located;
    if rs.degree() >= 2 && located {
        let m = lmesh_against(&rs, &threshold)?;
        w.insert("lmesh".into(), format!("[{}, {}]", decimal(&m.lo), decimal(&m.hi)));
        w.insert("versusThreshold".into(), format!("{:?}", m.versus_q));
        pass &= match m.versus_q {
            Ordering::Less => true,
            Ordering::Equal => !strict_bound,
            Ordering::Greater => false,
        };
    }
    Ok((pass, w))
}

/// Round to the nearest multiple of `2^-bits`.
fn round_dyadic(x: &Rational, bits: usize) -> Rational {
    let scale = Rational::from_integer(BigInt::one() << bits);
    (x * &scale).round() / scale
}

const ORTHO_BITS: usize = 256;

/// `|sum_k w_k p_n(q^k) p_m(q^k)|` for every `m < n`, with a proven tail bound.
fn orthogonality(p: &ParamPoint, eps: &Rational) -> Verdict {
    let (q, n) = (&p.q, p.n);
    let polys = (0..=n).map(|m| lj(p, m, &p.a, &p.b)).collect::<Result<Vec<_>>>()?;
    let abs_sum = |poly: &PolyExact| poly.coeffs().iter().map(|c| c.abs()).sum::<Rational>();
    let top = abs_sum(&polys[n]);
    let aq = &p.a * q.get();
    let half = eps / ratio(2, 1);
    // smallest K whose tail is below eps/2 for every m
    let max_other = polys[..n].iter().map(abs_sum).max().unwrap_or_else(Rational::zero);
    // w_{k+1} / w_k = aq (1 - b q^{k+1}) / (1 - q^{k+1})
    let mut weights = vec![weight_mass(0, &p.a, &p.b, q)?];
    let (ratio_bound, tail_unit) = loop {
        let k = weights.len() - 1;
        let qk1 = q.pow(k as i64 + 1);
        let rho = &aq * (Rational::one() + p.b.abs() * &qk1) / (Rational::one() - &qk1);
        if rho < Rational::one() {
            let unit = weights[k].abs() * &rho / (Rational::one() - &rho);
            if &unit * &top * &max_other < half {
                break (rho, unit);
            }
        }
        if k >= 100_000 {
            return Err(Error::Regime("weight decays too slowly for the tail bound".into()));
        }
        let next = &weights[k] * &aq * (Rational::one() - &p.b * &qk1) / (Rational::one() - &qk1);
        weights.push(next);
    };
    let cutoff = weights.len() - 1;
    let grain = Rational::new(BigInt::one(), BigInt::one() << (ORTHO_BITS + 1));
    let rounding = grain * Rational::from_integer(BigInt::from(cutoff + 1));
    let (mut worst, mut failures) = (Rational::zero(), Vec::new());
    let nodes: Vec<Rational> = (0..=cutoff).map(|k| q.pow(k as i64)).collect();
    let weighted_top: Vec<Rational> = weights.iter().zip(&nodes).map(|(w, x)| w * polys[n].eval(x)).collect();
    for (m, lower) in polys[..n].iter().enumerate() {
        let mut sum = Rational::zero();
        for (wt, node) in weighted_top.iter().zip(&nodes) {
            sum += round_dyadic(&(wt * lower.eval(node)), ORTHO_BITS);
        }
        let bound = sum.abs() + &tail_unit * &top * abs_sum(lower) + &rounding;
        if &bound >= eps {
            failures.push(m.to_string());
        }
        if bound > worst {
            worst = bound;
        }
    }
    let mut w =
        witness([("cutoff", cutoff.to_string()), ("ratioBound", decimal(&ratio_bound)), ("maxBound", decimal(&worst))]);
    if !failures.is_empty() {
        w.insert("failedDegrees".into(), failures.join(" "));
    }
    Ok((failures.is_empty(), w))
}
