//! Allen interval algebra, interval-set operations and the seasonal plus
//! moving-average forecaster.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use star_core::Real;

use crate::error::TemporalError;

/// Closed interval `[start, end]` with `start <= end`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[S; 2]", into = "[S; 2]")]
#[serde(bound(serialize = "S: Real + Serialize", deserialize = "S: Real + Deserialize<'de>"))]
pub struct Interval<S> {
    start: S,
    end: S,
}

impl<S: Real> Interval<S> {
    pub fn new(start: S, end: S) -> Result<Self, TemporalError> {
        if !(start <= end) || !start.is_finite() || !end.is_finite() {
            return Err(TemporalError::InvalidInterval {
                start: start.as_f64(),
                end: end.as_f64(),
            });
        }
        Ok(Interval { start, end })
    }

    /// For endpoints already known to be ordered.
    pub(crate) fn from_ordered(start: S, end: S) -> Self {
        debug_assert!(start <= end);
        Interval { start, end }
    }

    pub fn start(&self) -> S {
        self.start
    }

    pub fn end(&self) -> S {
        self.end
    }

    pub fn length(&self) -> S {
        self.end - self.start
    }

    pub fn is_point(&self) -> bool {
        self.start == self.end
    }

    pub fn contains_value(&self, v: S) -> bool {
        self.start <= v && v <= self.end
    }
}

impl<S: Real> TryFrom<[S; 2]> for Interval<S> {
    type Error = TemporalError;

    fn try_from(v: [S; 2]) -> Result<Self, Self::Error> {
        Interval::new(v[0], v[1])
    }
}

impl<S> From<Interval<S>> for [S; 2] {
    fn from(i: Interval<S>) -> Self {
        [i.start, i.end]
    }
}

/// The thirteen Allen relations, with strict endpoint comparisons.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AllenRelation {
    Before,
    After,
    Meets,
    MetBy,
    Overlaps,
    OverlappedBy,
    Starts,
    StartedBy,
    During,
    Contains,
    Finishes,
    FinishedBy,
    Equals,
}

impl AllenRelation {
    pub const ALL: [AllenRelation; 13] = [
        AllenRelation::Before,
        AllenRelation::After,
        AllenRelation::Meets,
        AllenRelation::MetBy,
        AllenRelation::Overlaps,
        AllenRelation::OverlappedBy,
        AllenRelation::Starts,
        AllenRelation::StartedBy,
        AllenRelation::During,
        AllenRelation::Contains,
        AllenRelation::Finishes,
        AllenRelation::FinishedBy,
        AllenRelation::Equals,
    ];

    pub fn name(self) -> &'static str {
        use AllenRelation::*;
        match self {
            Before => "before",
            After => "after",
            Meets => "meets",
            MetBy => "met_by",
            Overlaps => "overlaps",
            OverlappedBy => "overlapped_by",
            Starts => "starts",
            StartedBy => "started_by",
            During => "during",
            Contains => "contains",
            Finishes => "finishes",
            FinishedBy => "finished_by",
            Equals => "equals",
        }
    }

    /// `r(A, B) <=> r.converse()(B, A)`.
    pub fn converse(self) -> AllenRelation {
        use AllenRelation::*;
        match self {
            Before => After,
            After => Before,
            Meets => MetBy,
            MetBy => Meets,
            Overlaps => OverlappedBy,
            OverlappedBy => Overlaps,
            Starts => StartedBy,
            StartedBy => Starts,
            During => Contains,
            Contains => During,
            Finishes => FinishedBy,
            FinishedBy => Finishes,
            Equals => Equals,
        }
    }

    pub fn holds<S: Real>(self, a: &Interval<S>, b: &Interval<S>) -> bool {
        allen_relation(self, a, b)
    }
}

impl fmt::Display for AllenRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AllenRelation {
    type Err = TemporalError;

    /// Accepts `met_by`, `met-by`, `metby`, `allen_met_by` and similar.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .trim()
            .to_ascii_lowercase()
            .trim_start_matches("allen_")
            .chars()
            .filter(|c| c.is_ascii_alphabetic())
            .collect();
        AllenRelation::ALL
            .into_iter()
            .find(|r| r.name().replace('_', "") == key)
            .ok_or_else(|| TemporalError::UnknownRelation(s.to_string()))
    }
}

pub fn allen_relation<S: Real>(rel: AllenRelation, a: &Interval<S>, b: &Interval<S>) -> bool {
    use AllenRelation::*;
    let (as_, ae, bs, be) = (a.start, a.end, b.start, b.end);
    match rel {
        Equals => as_ == bs && ae == be,
        Before => ae < bs,
        After => be < as_,
        Meets => ae == bs && as_ < ae && bs < be,
        MetBy => be == as_ && bs < be && as_ < ae,
        Overlaps => as_ < bs && bs < ae && ae < be,
        OverlappedBy => bs < as_ && as_ < be && be < ae,
        Starts => as_ == bs && ae < be,
        StartedBy => as_ == bs && be < ae,
        During => bs < as_ && ae < be,
        Contains => as_ < bs && be < ae,
        Finishes => ae == be && bs < as_,
        FinishedBy => ae == be && as_ < bs,
    }
}

/// Evaluates a relation given by name.
pub fn allen_relation_by_name<S: Real>(
    name: &str,
    a: &Interval<S>,
    b: &Interval<S>,
) -> Result<bool, TemporalError> {
    Ok(allen_relation(name.parse()?, a, b))
}

/// The unique relation holding between `a` and `b`.
pub fn classify_allen<S: Real>(a: &Interval<S>, b: &Interval<S>) -> AllenRelation {
    AllenRelation::ALL
        .into_iter()
        .find(|r| allen_relation(*r, a, b))
        .expect("Allen relations are jointly exhaustive")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SetOp {
    Union,
    Intersection,
    Difference,
}

impl FromStr for SetOp {
    type Err = TemporalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "union" => Ok(SetOp::Union),
            "intersection" | "intersect" => Ok(SetOp::Intersection),
            "difference" | "minus" => Ok(SetOp::Difference),
            _ => Err(TemporalError::UnknownRelation(s.to_string())),
        }
    }
}

/// Sorted, pairwise-disjoint form; intervals sharing an endpoint merge.
pub fn canonicalize<S: Real>(set: &[Interval<S>]) -> Vec<Interval<S>> {
    let mut v = set.to_vec();
    v.sort_by(|x, y| {
        x.start
            .partial_cmp(&y.start)
            .unwrap()
            .then(x.end.partial_cmp(&y.end).unwrap())
    });
    let mut out: Vec<Interval<S>> = Vec::with_capacity(v.len());
    for iv in v {
        match out.last_mut() {
            Some(last) if iv.start <= last.end => last.end = last.end.max(iv.end),
            _ => out.push(iv),
        }
    }
    out
}

/// Closure of the set operation applied to two interval sets.
pub fn interval_set<S: Real>(op: SetOp, a: &[Interval<S>], b: &[Interval<S>]) -> Vec<Interval<S>> {
    let a = canonicalize(a);
    let b = canonicalize(b);
    match op {
        SetOp::Union => canonicalize(&[a, b].concat()),
        SetOp::Intersection => {
            let mut out = Vec::new();
            for x in &a {
                for y in &b {
                    let s = x.start.max(y.start);
                    let e = x.end.min(y.end);
                    if s <= e {
                        out.push(Interval::from_ordered(s, e));
                    }
                }
            }
            canonicalize(&out)
        }
        SetOp::Difference => {
            let mut out = Vec::new();
            for x in &a {
                if x.is_point() {
                    if !b.iter().any(|y| y.contains_value(x.start)) {
                        out.push(*x);
                    }
                    continue;
                }
                let mut cur = x.start;
                for y in &b {
                    if y.end <= cur || y.start >= x.end {
                        continue;
                    }
                    if y.start > cur {
                        out.push(Interval::from_ordered(cur, y.start));
                    }
                    cur = cur.max(y.end);
                    if cur >= x.end {
                        break;
                    }
                }
                if cur < x.end {
                    out.push(Interval::from_ordered(cur, x.end));
                }
            }
            canonicalize(&out)
        }
    }
}

/// Real-valued series with an optional seasonal period hint.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Series<S> {
    pub values: Vec<S>,
    #[serde(default)]
    pub period: Option<usize>,
}

impl<S: Real> Series<S> {
    pub fn new(values: Vec<S>) -> Self {
        Series { values, period: None }
    }

    pub fn with_period(mut self, period: usize) -> Self {
        self.period = Some(period);
        self
    }
}

/// Lag in `[2, len/2]` with the largest sample autocorrelation; ties and
/// zero-variance series give the smallest lag.
pub fn infer_period<S: Real>(values: &[S]) -> Result<usize, TemporalError> {
    let n = values.len();
    if n < 4 {
        return Err(TemporalError::InsufficientData { needed: 4, got: n });
    }
    let mean = values.iter().copied().sum::<S>() / S::from_usize_lossy(n);
    let denom: S = values.iter().map(|v| (*v - mean).powi(2)).sum();
    let mut best = (2, S::neg_infinity());
    if denom == S::zero() {
        return Ok(2);
    }
    for lag in 2..=n / 2 {
        let num: S = (0..n - lag)
            .map(|t| (values[t] - mean) * (values[t + lag] - mean))
            .sum();
        let r = num / denom;
        if r > best.1 {
            best = (lag, r);
        }
    }
    Ok(best.0)
}

/// Recursive multi-step forecast: each step is the mean of the seasonal-naive
/// value one period back and the trailing moving average (window = period).
pub fn forecast<S: Real>(series: &Series<S>, horizon: usize) -> Result<Vec<S>, TemporalError> {
    if horizon == 0 {
        return Ok(Vec::new());
    }
    let period = match series.period {
        Some(0) => return Err(TemporalError::InvalidPeriod(0)),
        Some(p) => p,
        None => infer_period(&series.values)?,
    };
    let window = period;
    let needed = (2 * period).max(window);
    if series.values.len() < needed {
        return Err(TemporalError::InsufficientData {
            needed,
            got: series.values.len(),
        });
    }
    let mut ext = series.values.clone();
    let half = S::lit(0.5);
    let w = S::from_usize_lossy(window);
    for _ in 0..horizon {
        let n = ext.len();
        let seasonal = ext[n - period];
        let ma = ext[n - window..].iter().copied().sum::<S>() / w;
        ext.push(half * (seasonal + ma));
    }
    Ok(ext.split_off(series.values.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: f64, b: f64) -> Interval<f64> {
        Interval::new(a, b).unwrap()
    }

    #[test]
    fn parse_names() {
        assert_eq!("allen_during".parse::<AllenRelation>().unwrap(), AllenRelation::During);
        assert_eq!("met-by".parse::<AllenRelation>().unwrap(), AllenRelation::MetBy);
        assert!("sideways".parse::<AllenRelation>().is_err());
    }

    #[test]
    fn invalid_interval() {
        assert!(Interval::new(2.0, 1.0).is_err());
        assert!(Interval::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn hand_forecast_period_four() {
        let vals: Vec<f64> = [1.0, 2.0, 3.0, 4.0].repeat(3);
        let s = Series::new(vals).with_period(4);
        let f = forecast(&s, 2).unwrap();
        assert!((f[0] - 1.75).abs() < 1e-12);
        // second step: seasonal 2, window [2,3,4,1.75]
        assert!((f[1] - 0.5 * (2.0 + (2.0 + 3.0 + 4.0 + 1.75) / 4.0)).abs() < 1e-12);
        assert_eq!(infer_period(&[1.0, 2.0, 3.0, 4.0].repeat(3)).unwrap(), 4);
    }

    #[test]
    fn short_series_rejected() {
        let s = Series::new(vec![1.0, 2.0, 3.0]).with_period(2);
        assert!(forecast(&s, 1).is_err());
        assert_eq!(forecast(&s, 0).unwrap(), Vec::<f64>::new());
    }

    #[test]
    fn set_examples() {
        assert_eq!(interval_set(SetOp::Union, &[iv(1.0, 3.0)], &[iv(2.0, 5.0)]), vec![iv(1.0, 5.0)]);
        assert!(interval_set(SetOp::Intersection, &[iv(0.0, 1.0)], &[iv(2.0, 3.0)]).is_empty());
        assert_eq!(
            interval_set(SetOp::Difference, &[iv(0.0, 10.0)], &[iv(3.0, 4.0)]),
            vec![iv(0.0, 3.0), iv(4.0, 10.0)]
        );
    }
}
