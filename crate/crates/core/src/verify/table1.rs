//! Zero locations of `1phi1`, `2phi0` and `2phi1` polynomials, one row per
//! parameter range, encoded as data.

use std::cmp::Ordering;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::identities::decimal;
use super::properties::finish;
use super::{witness, ParamPoint, Report, VerificationRecord};
use crate::analysis::{lmesh_against, roots_equal_to, roots_of, roots_within};
use crate::error::{Error, Result};
use crate::qcore::QValue;
use crate::qhyper::{build_qhyper, HyperSpec};
use crate::scalar::ratio;
use crate::{PolyExact, Rational};

pub const TABLE1_ROWS: usize = 10;

pub(crate) const TABLE1_IDS: [&str; TABLE1_ROWS] = [
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
];

/// Where the roots are claimed to lie.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Region {
    /// `(0, q)`
    BelowQ,
    /// `(0, q]`
    UpToQ,
    Negative,
    Positive,
}

/// Which series a row is about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Series {
    /// `2phi1(q^-n, a; b; q, x)`
    TwoPhiOne,
    /// `2phi0(q^-n, a; -; q, x)`
    TwoPhiZero,
    /// `1phi1(q^-n; b; q, x)`
    OnePhiOne,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RowSpec {
    pub row: usize,
    pub series: Series,
    pub a_range: &'static str,
    pub b_range: &'static str,
    pub region: Region,
    /// lmesh is bounded by `q^threshold_power`.
    pub threshold_power: i64,
    pub strict: bool,
}

const ROWS: [RowSpec; TABLE1_ROWS] = [
    RowSpec {
        row: 1,
        series: Series::TwoPhiOne,
        a_range: "(-inf, b q^(n-1))",
        b_range: "(0, 1)",
        region: Region::BelowQ,
        threshold_power: 1,
        strict: true,
    },
    RowSpec {
        row: 2,
        series: Series::TwoPhiOne,
        a_range: "{b, bq, ..., b q^(n-1)}",
        b_range: "(0, 1)",
        region: Region::UpToQ,
        threshold_power: 1,
        strict: false,
    },
    RowSpec {
        row: 3,
        series: Series::TwoPhiOne,
        a_range: "(q^(1-n), inf)",
        b_range: "(-inf, 0)",
        region: Region::Negative,
        threshold_power: 1,
        strict: true,
    },
    RowSpec {
        row: 4,
        series: Series::TwoPhiOne,
        a_range: "(q^(1-n), b q^(n+1))",
        b_range: "(q^(2-2n), inf)",
        region: Region::Positive,
        threshold_power: 1,
        strict: true,
    },
    RowSpec {
        row: 5,
        series: Series::TwoPhiOne,
        a_range: "(-inf, 0)",
        b_range: "{0}",
        region: Region::BelowQ,
        threshold_power: 1,
        strict: true,
    },
    RowSpec {
        row: 6,
        series: Series::TwoPhiOne,
        a_range: "(q^(1-n), inf)",
        b_range: "{0}",
        region: Region::Negative,
        threshold_power: 1,
        strict: true,
    },
    RowSpec {
        row: 7,
        series: Series::TwoPhiZero,
        a_range: "(q^(1-n), inf)",
        b_range: "-",
        region: Region::Positive,
        threshold_power: 1,
        strict: true,
    },
    RowSpec {
        row: 8,
        series: Series::OnePhiOne,
        a_range: "-",
        b_range: "(0, 1)",
        region: Region::Negative,
        threshold_power: 2,
        strict: true,
    },
    RowSpec {
        row: 9,
        series: Series::OnePhiOne,
        a_range: "-",
        b_range: "{0}",
        region: Region::Negative,
        threshold_power: 2,
        strict: false,
    },
    RowSpec {
        row: 10,
        series: Series::OnePhiOne,
        a_range: "-",
        b_range: "(-inf, 0)",
        region: Region::Negative,
        threshold_power: 1,
        strict: true,
    },
];

pub fn row_spec(row: usize) -> Result<&'static RowSpec> {
    row.checked_sub(1)
        .and_then(|i| ROWS.get(i))
        .ok_or_else(|| Error::InvalidParameter(format!("Table 1 has rows 1..=10, got {row}")))
}

/// True when `(a, b)` lies in the row's printed parameter range for this `n`, `q`.
pub fn in_row_range(row: usize, p: &ParamPoint) -> bool {
    let (a, b, q, n) = (&p.a, &p.b, &p.q, p.n as i64);
    let zero = Rational::zero();
    let unit_b = b > &zero && b < &Rational::one();
    let past = q.pow(1 - n);
    match row {
        1 => unit_b && *a < b * q.pow(n - 1),
        2 => unit_b && (0..n).any(|j| *a == b * q.pow(j)),
        3 => *a > past && *b < zero,
        4 => *b > q.pow(2 - 2 * n) && *a > past && *a < b * q.pow(n + 1),
        5 => b.is_zero() && *a < zero,
        6 => b.is_zero() && *a > past,
        7 => *a > past,
        8 => unit_b,
        9 => b.is_zero(),
        10 => *b < zero,
        _ => false,
    }
}

/// The row's polynomial at `(n, a, b)`.
pub fn row_polynomial(row: usize, p: &ParamPoint) -> Result<PolyExact> {
    let spec = row_spec(row)?;
    let (upper, lower) = match spec.series {
        Series::TwoPhiOne => (vec![p.a.clone()], vec![p.b.clone()]),
        Series::TwoPhiZero => (vec![p.a.clone()], vec![]),
        Series::OnePhiOne => (vec![], vec![p.b.clone()]),
    };
    build_qhyper(&HyperSpec::new(p.n, upper, lower, p.q.clone()))
}

fn evaluate(spec: &RowSpec, p: &ParamPoint) -> Result<(bool, super::Witness)> {
    let poly = row_polynomial(spec.row, p)?;
    let rs = roots_of(&poly)?;
    let all_real = rs.certified_real_rooted && rs.degree() == p.n;
    let mut w = witness([("realRoots", format!("{}/{}", rs.total_count, p.n))]);
    if !all_real {
        return Ok((false, w));
    }
    let (zero, q) = (Rational::zero(), p.q.get());
    let located = match spec.region {
        Region::BelowQ => roots_within(&rs, &zero, q, false)?,
        Region::UpToQ => {
            let at_q = roots_equal_to(&rs, q)?;
            w.insert("rootsAtQ".into(), at_q.to_string());
            roots_within(&rs, &zero, q, true)?
        }
        Region::Negative => rs.is_empty() || rs.sign() == Some(Ordering::Less),
        Region::Positive => rs.is_empty() || rs.sign() == Some(Ordering::Greater),
    };
    w.insert("located".into(), located.to_string());
    let mut pass = located;
    if located && rs.degree() >= 2 {
        let threshold = p.q.pow(spec.threshold_power);
        let m = lmesh_against(&rs, &threshold)?;
        w.insert("lmesh".into(), format!("[{}, {}]", decimal(&m.lo), decimal(&m.hi)));
        w.insert("versusThreshold".into(), format!("{:?}", m.versus_q));
        pass &= match m.versus_q {
            Ordering::Less => true,
            Ordering::Equal => !spec.strict,
            Ordering::Greater => false,
        };
    }
    Ok((pass, w))
}

/// Check one Table 1 row at a grid point; points outside the row's range are skipped.
pub fn check_row(row: usize, p: &ParamPoint) -> VerificationRecord {
    let id = TABLE1_IDS[row - 1];
    if !in_row_range(row, p) {
        let spec = &ROWS[row - 1];
        return VerificationRecord::skipped(
            id,
            p,
            format!("row {row} needs a in {} and b in {}", spec.a_range, spec.b_range),
        );
    }
    finish(id, p, evaluate(&ROWS[row - 1], p))
}

const SAMPLE_QS: [(i64, i64); 4] = [(1, 4), (1, 2), (3, 4), (9, 10)];

/// `(a, b)` samples for one row at fixed `(q, n)`.
fn row_params(row: usize, q: &QValue<Rational>, n: i64) -> Vec<(Rational, Rational)> {
    let zero = Rational::zero;
    let unit_bs = [ratio(1, 10), ratio(1, 2), ratio(9, 10)];
    let past = q.pow(1 - n);
    match row {
        1 => unit_bs
            .iter()
            .flat_map(|b| {
                let top = b * q.pow(n - 1);
                [ratio(-5, 1), ratio(-1, 3), zero(), &top / ratio(2, 1), &top * ratio(99, 100)]
                    .into_iter()
                    .map(move |a| (a, b.clone()))
            })
            .collect(),
        2 => unit_bs.iter().flat_map(|b| (0..n).map(move |j| (b * q.pow(j), b.clone()))).collect(),
        3 => [ratio(11, 10), ratio(3, 1), ratio(100, 1)]
            .iter()
            .flat_map(|s| {
                let a = s * &past;
                [ratio(-5, 1), ratio(-1, 2), ratio(-1, 100)].into_iter().map(move |b| (a.clone(), b))
            })
            .collect(),
        4 => [ratio(11, 10), ratio(5, 1)]
            .iter()
            .flat_map(|s| {
                let b = s * q.pow(-2 * n);
                let (lo, hi) = (past.clone(), &b * q.pow(n + 1));
                [ratio(1, 10), ratio(1, 2), ratio(9, 10)].into_iter().map(move |t| (&lo + t * (&hi - &lo), b.clone()))
            })
            .collect(),
        5 => [ratio(-5, 1), ratio(-1, 1), ratio(-1, 100)].into_iter().map(|a| (a, zero())).collect(),
        6 | 7 => [ratio(11, 10), ratio(100, 1)].into_iter().map(|s| (s * &past, zero())).collect(),
        8 => unit_bs.into_iter().map(|b| (zero(), b)).collect(),
        9 => vec![(zero(), zero())],
        10 => [ratio(-5, 1), ratio(-1, 2)].into_iter().map(|b| (zero(), b)).collect(),
        _ => vec![],
    }
}

/// The first `count` deterministic samples of a row, sweeping `n = 2, 3, ...`
/// and `q` in `{1/4, 1/2, 3/4, 9/10}`.
pub fn sample_row(row: usize, count: usize) -> Result<Vec<ParamPoint>> {
    row_spec(row)?;
    let mut out = Vec::with_capacity(count);
    let mut n = 2;
    while out.len() < count {
        for (num, den) in SAMPLE_QS {
            let q = QValue::new(ratio(num, den))?;
            for (a, b) in row_params(row, &q, n as i64) {
                out.push(ParamPoint::new(q.clone(), n, a, b));
            }
        }
        n += 1;
    }
    out.truncate(count);
    Ok(out)
}

/// Check `samples` points of every listed row.
pub fn run_table1(rows: &[usize], samples: usize) -> Result<Report> {
    let mut jobs = Vec::new();
    for &row in rows {
        for p in sample_row(row, samples)? {
            jobs.push((row, p));
        }
    }
    let records = jobs.par_iter().map(|(row, p)| check_row(*row, p)).collect();
    Ok(Report::from_records(records))
}
