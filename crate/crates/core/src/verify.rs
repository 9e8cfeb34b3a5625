//! Randomized exact identity testing of `W_P = φ^*(W_T)` and structural checks of `W_P`.

use std::time::{Duration, Instant};

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::combinat::FlagShape;
use crate::error::{Error, Result};
use crate::exactalg::{format_rational, rational, LaurentExpr, VarId};
use crate::geometry::{sample_with, SampleLocus};
use crate::mirror::{all_coefficients_one, build_wp, pullback_wt, reparametrize_plain, Externals};

/// A trial where the two sides differ or could not be evaluated.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialFailure {
    pub trial: u64,
    pub seed: u64,
    pub point: Value,
    pub pluckers: Value,
    pub q: Vec<String>,
    pub wp: Option<String>,
    pub pullback: Option<String>,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub shape: String,
    pub check: &'static str,
    pub trials: u64,
    pub seed: u64,
    pub externals: Option<String>,
    pub failures: Vec<TrialFailure>,
    pub term_count: usize,
    pub expected_term_count: usize,
    pub term_count_ok: bool,
    pub positivity_ok: bool,
    pub grading_ok: bool,
    pub degrees: Vec<i64>,
    pub note: String,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.term_count_ok && self.positivity_ok && self.grading_ok
    }

    pub fn to_json_value(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("serializable");
        v["passed"] = Value::Bool(self.passed());
        v
    }
}

fn random_q(rng: &mut ChaCha8Rng) -> BigRational {
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    rational(sign * rng.gen_range(1..=100), rng.gen_range(1..=100))
}

fn structure_fields(shape: &FlagShape) -> (usize, usize, bool, Vec<i64>) {
    let wp = build_wp(shape);
    let expected: usize = shape.levels().map(|i| shape.r(i - 1)).sum();
    let laurent = wp.to_laurent();
    let quantum_present = shape
        .levels()
        .all(|i| laurent.variables().contains(&VarId::q(i)));
    let positive = all_coefficients_one(&laurent) && quantum_present;
    (
        wp.len(),
        expected,
        positive,
        wp.degrees().into_iter().collect(),
    )
}

fn base_report(shape: &FlagShape, check: &'static str) -> VerificationReport {
    let (count, expected, positive, degrees) = structure_fields(shape);
    VerificationReport {
        shape: shape.spec_string(),
        check,
        trials: 0,
        seed: 0,
        externals: None,
        failures: Vec::new(),
        term_count: count,
        expected_term_count: expected,
        term_count_ok: count == expected,
        positivity_ok: positive,
        grading_ok: degrees == [1],
        degrees,
        note: String::new(),
        elapsed: Duration::ZERO,
    }
}

/// Term count `Σ r_{i-1}`, coefficients all `+1` with every `q_i` present, and every
/// summand of degree `1` under `deg p^i_λ = |λ|`, `deg q_i = r_{i-1} - r_{i+1}`.
pub fn check_structure(shape: &FlagShape) -> VerificationReport {
    let start = Instant::now();
    let mut report = base_report(shape, "structure");
    report.note = "term count, positivity and grading of W_P".into();
    report.elapsed = start.elapsed();
    report
}

pub fn check_main_theorem(shape: &FlagShape, trials: u64, seed: u64) -> VerificationReport {
    check_main_theorem_with(shape, trials, seed, Externals::Cumulative)
        .expect("cumulative externals always yield a Laurent pullback")
}

/// Compares `W_P` and `φ^*(W_T)` exactly at `trials` random points.
///
/// Trial `k` draws from stream `k` of `seed`, so the report depends only on
/// `(shape, trials, seed, externals)`. With plain externals the left side is `W_P`
/// after `q_i ↦ q_i / q_{i-1}`.
pub fn check_main_theorem_with(
    shape: &FlagShape,
    trials: u64,
    seed: u64,
    externals: Externals,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut wp = build_wp(shape).to_laurent();
    if externals == Externals::Plain {
        wp = reparametrize_plain(&wp)?;
    }
    let pullback: LaurentExpr = pullback_wt(shape, externals)?
        .as_laurent()
        .cloned()
        .ok_or_else(|| Error::Unsupported("pullback is not a Laurent polynomial".into()))?;

    let mut failures: Vec<TrialFailure> = (0..trials)
        .into_par_iter()
        .filter_map(|trial| run_trial(shape, &wp, &pullback, seed, trial))
        .collect();
    failures.sort_by_key(|f| f.trial);

    let mut report = base_report(shape, "main_theorem");
    report.trials = trials;
    report.seed = seed;
    report.externals = Some(externals.to_string());
    report.failures = failures;
    report.note = format!(
        "exact equality of two fixed rational functions at {trials} independent points with \
         entries a/b, |a|, b <= 100; a nonzero difference vanishes at a random point with \
         probability at most its degree over the sample range (Schwartz-Zippel)"
    );
    report.elapsed = start.elapsed();
    Ok(report)
}

fn run_trial(
    shape: &FlagShape,
    wp: &LaurentExpr,
    pullback: &LaurentExpr,
    seed: u64,
    trial: u64,
) -> Option<TrialFailure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let failure = |reason: String| TrialFailure {
        trial,
        seed,
        point: Value::Null,
        pluckers: Value::Null,
        q: Vec::new(),
        wp: None,
        pullback: None,
        reason,
    };
    let point = match sample_with(shape, &mut rng, SampleLocus::RectanglesTorus) {
        Ok(p) => p,
        Err(e) => return Some(failure(e.to_string())),
    };
    let q: Vec<BigRational> = shape.levels().map(|_| random_q(&mut rng)).collect();
    let pluckers = match point.pluckers() {
        Ok(p) => p,
        Err(e) => return Some(failure(e.to_string())),
    };
    let assignment = pluckers.with_q(&q);
    let lhs = wp.evaluate::<BigRational, _>(&assignment);
    let rhs = pullback.evaluate::<BigRational, _>(&assignment);
    let reason = match (&lhs, &rhs) {
        (Ok(a), Ok(b)) if a == b => return None,
        (Ok(_), Ok(_)) => "values differ".to_string(),
        (Err(e), _) | (_, Err(e)) => e.to_string(),
    };
    Some(TrialFailure {
        trial,
        seed,
        point: point.to_json_value(),
        pluckers: pluckers.to_json_value(),
        q: q.iter().map(format_rational).collect(),
        wp: lhs.ok().map(|v| format_rational(&v)),
        pullback: rhs.ok().map(|v| format_rational(&v)),
        reason,
    })
}
