//! Exact match, regression metrics and the Wilson interval.

use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::dataset::{AnswerMode, QueryRecord};
use crate::error::HarnessError;

pub const DEFAULT_NUMERIC_TOL: f64 = 1e-3;
/// Relative error under which a regression answer counts as correct.
pub const REGRESSION_TOL: f64 = 0.05;

/// Bumped whenever the tables below change.
pub const NORMALIZATION_VERSION: u32 = 1;
/// Wrapper tokens removed before comparison.
pub const WRAPPERS: &[&str] = &["[results_start]", "[results_end]", "<answer>", "</answer>", "answer:", "option ("];
/// Whole-answer synonyms mapped to a canonical bit.
pub const BINARY: &[(&str, &str)] = &[("yes", "1"), ("true", "1"), ("no", "0"), ("false", "0")];

fn number_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?").expect("valid regex"))
}

/// Trims, case-folds, strips wrapper tokens and enclosing brackets, and maps
/// yes/no style answers to 1/0.
pub fn normalize_answer(s: &str) -> String {
    let mut out = s.trim().to_lowercase();
    for w in WRAPPERS {
        out = out.replace(w, " ");
    }
    let mut out = out.trim().to_string();
    loop {
        let t = out.trim_matches(|c: char| c.is_whitespace() || c == '.' || c == ')' && !out.contains('('));
        let unwrapped = ["[]", "()", "\"\"", "''"].iter().find_map(|p| {
            let (l, r) = (p.chars().next()?, p.chars().nth(1)?);
            t.strip_prefix(l).and_then(|x| x.strip_suffix(r))
        });
        let next = unwrapped.unwrap_or(t).trim().to_string();
        if next == out {
            break;
        }
        out = next;
    }
    BINARY.iter().find(|(k, _)| *k == out).map_or(out, |(_, v)| v.to_string())
}

fn numbers(s: &str) -> Vec<f64> {
    number_re().find_iter(s).filter_map(|m| m.as_str().parse().ok()).collect()
}

/// `|p - g| <= tol * max(|g|, 1)`: relative, absolute near zero.
fn close(p: f64, g: f64, tol: f64) -> bool {
    (p - g).abs() <= tol * g.abs().max(1.0)
}

/// Binary exact match. Regression mode falls back to numeric comparison.
pub fn evaluate_em(predicted: &str, gold: &str, mode: AnswerMode, numeric_tol: f64) -> bool {
    let (p, g) = (normalize_answer(predicted), normalize_answer(gold));
    match mode {
        AnswerMode::Exact => {
            p == g || matches!((p.parse::<f64>(), g.parse::<f64>()), (Ok(x), Ok(y)) if x == y)
        }
        AnswerMode::Numeric | AnswerMode::Regression => {
            let (pn, gn) = (numbers(&p), numbers(&g));
            if gn.is_empty() {
                return p == g;
            }
            pn.len() == gn.len() && pn.iter().zip(&gn).all(|(a, b)| close(*a, *b, numeric_tol))
        }
    }
}

/// Correctness bit of a prediction against its record. Regression answers
/// are correct within [`REGRESSION_TOL`] relative error.
pub fn grade(record: &QueryRecord, predicted: &str) -> bool {
    match record.mode {
        AnswerMode::Regression => match (numbers(predicted).first(), numbers(&record.gold).first()) {
            (Some(p), Some(g)) => (p - g).abs() <= REGRESSION_TOL * g.abs().max(f64::MIN_POSITIVE),
            _ => false,
        },
        mode => evaluate_em(predicted, &record.gold, mode, DEFAULT_NUMERIC_TOL),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Metric {
    Rmse,
    Mae,
}

pub fn evaluate_regression(predictions: &[f64], golds: &[f64], metric: Metric) -> Result<f64, HarnessError> {
    if predictions.len() != golds.len() || predictions.is_empty() {
        return Err(HarnessError::invalid(format!(
            "need equal non-empty lengths, got {} predictions and {} golds",
            predictions.len(),
            golds.len()
        )));
    }
    let n = predictions.len() as f64;
    let diffs = predictions.iter().zip(golds).map(|(p, g)| p - g);
    Ok(match metric {
        Metric::Mae => diffs.map(f64::abs).sum::<f64>() / n,
        Metric::Rmse => (diffs.map(|d| d * d).sum::<f64>() / n).sqrt(),
    })
}

/// Wilson score interval for `k` successes in `n` trials, as
/// `(center, half_width)`.
pub fn wilson_ci(k: u64, n: u64, z: f64) -> Result<(f64, f64), HarnessError> {
    if n == 0 {
        return Err(HarnessError::invalid("Wilson interval needs n >= 1"));
    }
    if k > n {
        return Err(HarnessError::invalid(format!("k = {k} exceeds n = {n}")));
    }
    let (kf, nf) = (k as f64, n as f64);
    let p = kf / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = z / denom * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
    Ok((center, half))
}
