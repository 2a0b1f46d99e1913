//! Registry and runner for identity and theorem checks over parameter grids.

mod identities;
mod properties;
mod table1;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::QValue;
use crate::scalar::{
    deserialize_rational, deserialize_rationals, format_rational, ratio, serialize_rational, serialize_rationals,
};
use crate::Rational;

pub use identities::{check_identity, check_identity_corrupted, identity_sides, IDENTITY_IDS};
pub use properties::{check_property_at, PROPERTY_IDS};
pub use table1::{row_spec, run_table1, sample_row, Region, RowSpec, TABLE1_ROWS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Pass,
    Fail,
    SkippedOutOfRegime,
    Error,
}

/// One grid point. Checks read the fields they need and ignore the rest.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParamPoint {
    #[serde(serialize_with = "serialize_q")]
    pub q: QValue<Rational>,
    pub n: usize,
    #[serde(serialize_with = "serialize_rational")]
    pub a: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub b: Rational,
}

fn serialize_q<S: serde::Serializer>(q: &QValue<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    serialize_rational(q.get(), s)
}

impl ParamPoint {
    pub fn new(q: QValue<Rational>, n: usize, a: Rational, b: Rational) -> Self {
        ParamPoint { q, n, a, b }
    }
}

impl fmt::Display for ParamPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "q={} n={} a={} b={}",
            format_rational(self.q.get()),
            self.n,
            format_rational(&self.a),
            format_rational(&self.b)
        )
    }
}

/// Structured detail attached to a record.
pub type Witness = BTreeMap<String, String>;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationRecord {
    pub check_id: String,
    pub params: ParamPoint,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl VerificationRecord {
    fn new(check_id: &str, params: &ParamPoint, status: Status, witness: Option<Witness>) -> Self {
        debug_assert!(status != Status::Fail || witness.is_some(), "Fail without witness");
        VerificationRecord { check_id: check_id.to_string(), params: params.clone(), status, witness }
    }

    pub(crate) fn skipped(check_id: &str, params: &ParamPoint, reason: impl Into<String>) -> Self {
        Self::new(check_id, params, Status::SkippedOutOfRegime, Some(witness([("reason", reason.into())])))
    }

    pub(crate) fn error(check_id: &str, params: &ParamPoint, err: &Error) -> Self {
        Self::new(check_id, params, Status::Error, Some(witness([("error", err.to_string())])))
    }

    pub(crate) fn decided(check_id: &str, params: &ParamPoint, pass: bool, w: Witness) -> Self {
        let status = if pass { Status::Pass } else { Status::Fail };
        Self::new(check_id, params, status, Some(w))
    }
}

pub(crate) fn witness<const N: usize>(items: [(&str, String); N]) -> Witness {
    items.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// Parameter grid, mirrored field for field by the JSON config.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct GridSpec {
    #[serde(serialize_with = "serialize_rationals", deserialize_with = "deserialize_rationals")]
    pub q_values: Vec<Rational>,
    pub n_values: Vec<usize>,
    #[serde(serialize_with = "serialize_rationals", deserialize_with = "deserialize_rationals")]
    pub a_values: Vec<Rational>,
    #[serde(serialize_with = "serialize_rationals", deserialize_with = "deserialize_rationals")]
    pub b_values: Vec<Rational>,
    #[serde(default, serialize_with = "serialize_rationals", deserialize_with = "deserialize_rationals")]
    pub t_values: Vec<Rational>,
    #[serde(serialize_with = "serialize_rational", deserialize_with = "deserialize_rational")]
    pub eps: Rational,
    pub check_ids: Vec<String>,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        for q in &self.q_values {
            QValue::new(q.clone())?;
        }
        if !self.eps.is_positive() {
            return Err(Error::InvalidTolerance(format_rational(&self.eps)));
        }
        for id in &self.check_ids {
            if !is_known_check(id) {
                return Err(Error::UnknownCheck(id.clone()));
            }
        }
        Ok(())
    }

    /// Grid points in lexicographic `(q, n, a, b)` order.
    pub fn points(&self) -> Result<Vec<ParamPoint>> {
        let mut out = Vec::new();
        for q in &self.q_values {
            let qv = QValue::new(q.clone())?;
            for &n in &self.n_values {
                for a in &self.a_values {
                    for b in &self.b_values {
                        out.push(ParamPoint::new(qv.clone(), n, a.clone(), b.clone()));
                    }
                }
            }
        }
        Ok(out)
    }

    /// The `t` samples in `[q^2, 1]` for this `q`; defaults to `{q^2, (q^2+1)/2, 1}`.
    pub fn t_for(&self, q: &QValue<Rational>) -> Vec<Rational> {
        let (lo, hi) = (q.pow(2), ratio(1, 1));
        let picked: Vec<_> = self.t_values.iter().filter(|t| **t >= lo && **t <= hi).cloned().collect();
        if self.t_values.is_empty() {
            default_t(q)
        } else {
            picked
        }
    }

    /// The `t` samples strictly inside `(q^2, 1)`, or the midpoint when none are given.
    pub fn t_interior(&self, q: &QValue<Rational>) -> Vec<Rational> {
        let (lo, hi) = (q.pow(2), ratio(1, 1));
        let inner: Vec<_> = self.t_for(q).into_iter().filter(|t| *t > lo && *t < hi).collect();
        if inner.is_empty() {
            vec![(lo + hi) / ratio(2, 1)]
        } else {
            inner
        }
    }
}

pub fn default_t(q: &QValue<Rational>) -> Vec<Rational> {
    let q2 = q.pow(2);
    vec![q2.clone(), (&q2 + ratio(1, 1)) / ratio(2, 1), ratio(1, 1)]
}

pub fn is_known_check(id: &str) -> bool {
    IDENTITY_IDS.contains(&id) || PROPERTY_IDS.contains(&id)
}

/// Evaluate one check id at one point.
pub fn check_at(id: &str, point: &ParamPoint, grid: &GridSpec) -> Result<VerificationRecord> {
    if IDENTITY_IDS.contains(&id) {
        Ok(identities::check_identity_eps(id, point, &grid.eps))
    } else if PROPERTY_IDS.contains(&id) {
        Ok(check_property_at(id, point, grid))
    } else {
        Err(Error::UnknownCheck(id.to_string()))
    }
}

/// Run one property over every grid point.
pub fn check_property(id: &str, grid: &GridSpec) -> Result<Vec<VerificationRecord>> {
    if !PROPERTY_IDS.contains(&id) {
        return Err(Error::UnknownCheck(id.to_string()));
    }
    let single = GridSpec { check_ids: vec![id.to_string()], ..grid.clone() };
    Ok(run_grid(&single)?.records)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
    pub error: usize,
}

impl Summary {
    pub fn from_records(records: &[VerificationRecord]) -> Self {
        let mut s = Summary { total: records.len(), ..Summary::default() };
        for r in records {
            match r.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::SkippedOutOfRegime => s.skipped += 1,
                Status::Error => s.error += 1,
            }
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub records: Vec<VerificationRecord>,
    pub summary: Summary,
}

impl Report {
    pub fn from_records(records: Vec<VerificationRecord>) -> Self {
        let summary = Summary::from_records(&records);
        Report { records, summary }
    }
}

/// Evaluate every check id at every grid point, in parallel, keeping grid order:
/// points lexicographically, and within a point the configured check order.
pub fn run_grid(grid: &GridSpec) -> Result<Report> {
    grid.validate()?;
    let points = grid.points()?;
    let jobs: Vec<(&ParamPoint, &str)> =
        points.iter().flat_map(|p| grid.check_ids.iter().map(move |id| (p, id.as_str()))).collect();
    let records = jobs.par_iter().map(|(p, id)| check_at(id, p, grid)).collect::<Result<Vec<_>>>()?;
    Ok(Report::from_records(records))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(ids: &[&str]) -> GridSpec {
        GridSpec {
            q_values: vec![ratio(1, 2), ratio(1, 3)],
            n_values: vec![1, 3],
            a_values: vec![ratio(1, 2), ratio(5, 1)],
            b_values: vec![ratio(-1, 1)],
            t_values: vec![],
            eps: ratio(1, 1_000_000),
            check_ids: ids.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn grid_json_round_trip() {
        let g = grid(&["contig-1", "thm2-lmesh"]);
        let text = serde_json::to_string(&g).unwrap();
        assert!(text.contains("\"qValues\":[\"1/2\",\"1/3\"]"));
        let back: GridSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, g);
        assert!(serde_json::from_str::<GridSpec>(&text.replace("1/3", "1.5")).is_err());
    }

    #[test]
    fn validation() {
        let mut g = grid(&["bogus"]);
        assert_eq!(g.validate(), Err(Error::UnknownCheck("bogus".into())));
        g.check_ids = vec!["contig-1".into()];
        g.q_values.push(ratio(3, 2));
        assert!(matches!(g.validate(), Err(Error::InvalidQ(_))));
    }

    #[test]
    fn record_count_and_order() {
        let g = grid(&["contig-1", "thm1-monotone-b", "thm2-lmesh"]);
        let report = run_grid(&g).unwrap();
        assert_eq!(report.records.len(), 8 * 3);
        assert_eq!(report.records[0].check_id, "contig-1");
        assert_eq!(report.records[1].check_id, "thm1-monotone-b");
        assert_eq!(report.records[3].params.a, ratio(5, 1));
        // a = 5 is out of regime for both q
        assert_eq!(report.records[5].status, Status::SkippedOutOfRegime);
        assert_eq!(report.summary.fail, 0);
        assert_eq!(report.summary.error, 0);
        assert_eq!(run_grid(&g).unwrap(), report);
    }

    #[test]
    fn t_samples() {
        let q = QValue::new(ratio(1, 2)).unwrap();
        let mut g = grid(&[]);
        assert_eq!(g.t_for(&q), vec![ratio(1, 4), ratio(5, 8), ratio(1, 1)]);
        assert_eq!(g.t_interior(&q), vec![ratio(5, 8)]);
        g.t_values = vec![ratio(1, 10), ratio(1, 2), ratio(1, 1)];
        assert_eq!(g.t_for(&q), vec![ratio(1, 2), ratio(1, 1)]);
        assert_eq!(g.t_interior(&q), vec![ratio(1, 2)]);
    }
}
