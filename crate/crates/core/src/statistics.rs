//! Discrepancy statistics between a table and its homogeneity model.
//!
//! Every statistic is accumulated row-major with compensated summation, so a
//! given table always yields bit-identical values whether it is evaluated
//! through the public functions, [`compute_all`] or the simulation kernel.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::table::{expected_count, ContingencyTable, HomogeneityModel};

/// Which discrepancy measure to compute.
#[derive(Debug, Clone, Copy)]
pub enum StatisticKind {
    ChiSquare,
    LogLikelihoodRatio,
    FreemanTukey,
    Frobenius,
    NegLogLikelihood,
    /// Cressie–Read power divergence with parameter lambda.
    PowerDivergence(f64),
}

impl StatisticKind {
    /// The five statistics reported for every dataset.
    pub const STANDARD: [StatisticKind; 5] = [
        StatisticKind::ChiSquare,
        StatisticKind::LogLikelihoodRatio,
        StatisticKind::FreemanTukey,
        StatisticKind::NegLogLikelihood,
        StatisticKind::Frobenius,
    ];

    /// The four statistics that vanish exactly when the table equals its model.
    pub const DIVERGENCES: [StatisticKind; 4] = [
        StatisticKind::ChiSquare,
        StatisticKind::LogLikelihoodRatio,
        StatisticKind::FreemanTukey,
        StatisticKind::Frobenius,
    ];

    /// Short name used on the command line and in JSON.
    pub fn name(&self) -> String {
        match self {
            StatisticKind::ChiSquare => "chi2".into(),
            StatisticKind::LogLikelihoodRatio => "g2".into(),
            StatisticKind::FreemanTukey => "ft".into(),
            StatisticKind::Frobenius => "frobenius".into(),
            StatisticKind::NegLogLikelihood => "nll".into(),
            StatisticKind::PowerDivergence(lambda) => format!("cr:{lambda}"),
        }
    }

    /// Human-readable label.
    pub fn label(&self) -> String {
        match self {
            StatisticKind::ChiSquare => "chi-square (X^2)".into(),
            StatisticKind::LogLikelihoodRatio => "log-likelihood-ratio (G^2)".into(),
            StatisticKind::FreemanTukey => "Freeman-Tukey/Hellinger (H^2)".into(),
            StatisticKind::Frobenius => "Frobenius (F^2)".into(),
            StatisticKind::NegLogLikelihood => "negative log-likelihood".into(),
            StatisticKind::PowerDivergence(lambda) => format!("power divergence (lambda = {lambda})"),
        }
    }

    /// Parses a comma-separated list; `all` expands to [`StatisticKind::STANDARD`].
    pub fn parse_list(text: &str) -> Result<Vec<StatisticKind>> {
        let mut kinds = Vec::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            if item.eq_ignore_ascii_case("all") {
                kinds.extend(StatisticKind::STANDARD);
            } else {
                kinds.push(item.parse()?);
            }
        }
        if kinds.is_empty() {
            return Err(Error::UnknownStatistic(text.to_owned()));
        }
        Ok(dedup(&kinds))
    }

    fn key(&self) -> (u8, u64) {
        match *self {
            StatisticKind::ChiSquare => (0, 0),
            StatisticKind::LogLikelihoodRatio => (1, 0),
            StatisticKind::FreemanTukey => (2, 0),
            StatisticKind::Frobenius => (3, 0),
            StatisticKind::NegLogLikelihood => (4, 0),
            // +0.0 folds -0.0 into the same key.
            StatisticKind::PowerDivergence(lambda) => (5, (lambda + 0.0).to_bits()),
        }
    }
}

impl PartialEq for StatisticKind {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for StatisticKind {}

impl Hash for StatisticKind {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state);
    }
}

impl fmt::Display for StatisticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for StatisticKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let kind = match lower.as_str() {
            "chi2" | "x2" | "chisquare" => StatisticKind::ChiSquare,
            "g2" | "llr" => StatisticKind::LogLikelihoodRatio,
            "ft" | "h2" | "hellinger" => StatisticKind::FreemanTukey,
            "frobenius" | "f2" => StatisticKind::Frobenius,
            "nll" => StatisticKind::NegLogLikelihood,
            other => {
                let lambda = other
                    .strip_prefix("cr:")
                    .and_then(|v| v.parse::<f64>().ok())
                    .ok_or_else(|| Error::UnknownStatistic(s.to_owned()))?;
                if !lambda.is_finite() {
                    return Err(Error::NonFiniteLambda(lambda));
                }
                StatisticKind::PowerDivergence(lambda)
            }
        };
        Ok(kind)
    }
}

impl Serialize for StatisticKind {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.name())
    }
}

impl<'de> Deserialize<'de> for StatisticKind {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A computed statistic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StatisticValue {
    pub kind: StatisticKind,
    pub value: f64,
}

/// How the negative log-likelihood treats the multinomial coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NllConvention {
    /// Full multinomial probability of each column.
    #[default]
    WithCoefficient,
    /// Only the product of cell probabilities; the coefficient is dropped.
    WithoutCoefficient,
}

/// Kahan–Babuška (Neumaier) compensated sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    #[inline]
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub(crate) fn value(&self) -> f64 {
        // An infinite term leaves a NaN compensation behind.
        if self.sum.is_infinite() {
            return self.sum;
        }
        self.sum + self.compensation
    }
}

/// Cached `ln(i!)`; indices past the table fall back to log-gamma, which is
/// also how the table is filled, so both paths agree bit for bit.
#[derive(Debug, Clone, Default)]
pub(crate) struct LnFactorial {
    table: Vec<f64>,
}

impl LnFactorial {
    pub(crate) fn up_to(max: u64) -> Self {
        LnFactorial { table: (0..=max).map(|i| ln_gamma(i as f64 + 1.0)).collect() }
    }

    #[inline]
    pub(crate) fn get(&self, i: u64) -> f64 {
        match self.table.get(i as usize) {
            Some(&v) => v,
            None => ln_gamma(i as f64 + 1.0),
        }
    }
}

/// Borrowed counts plus margins; what the kernel needs to evaluate statistics.
#[derive(Debug, Clone, Copy)]
pub(crate) struct CountsView<'a> {
    pub rows: usize,
    pub cols: usize,
    pub counts: &'a [u64],
    pub row_totals: &'a [u64],
    pub col_totals: &'a [u64],
    pub total: u64,
}

impl<'a> CountsView<'a> {
    pub(crate) fn of(table: &'a ContingencyTable) -> Self {
        CountsView {
            rows: table.rows(),
            cols: table.cols(),
            counts: table.counts(),
            row_totals: table.row_totals(),
            col_totals: table.col_totals(),
            total: table.total(),
        }
    }
}

#[inline]
fn chi_square_term(n: f64, e: f64) -> f64 {
    if e == 0.0 {
        0.0
    } else {
        let d = n - e;
        d * d / e
    }
}

#[inline]
fn llr_term(n: f64, e: f64) -> f64 {
    if n == 0.0 {
        0.0
    } else {
        n * (n / e).ln()
    }
}

#[inline]
fn freeman_tukey_term(n: f64, e: f64) -> f64 {
    let d = n.sqrt() - e.sqrt();
    d * d
}

#[inline]
fn frobenius_term(n: f64, e: f64) -> f64 {
    let d = n - e;
    d * d
}

/// Unscaled Cressie–Read cell term for `lambda` outside {0, -1}.
#[inline]
fn power_term(n: f64, e: f64, lambda: f64) -> f64 {
    if n == 0.0 {
        if lambda > -1.0 || e == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        n * (lambda * (n / e).ln()).exp_m1()
    }
}

/// Cell term of the modified log-likelihood, the `lambda = -1` member.
#[inline]
fn modified_llr_term(n: f64, e: f64) -> f64 {
    if e == 0.0 {
        0.0
    } else if n == 0.0 {
        f64::INFINITY
    } else {
        e * (e / n).ln()
    }
}

#[inline]
fn nonnegative(v: f64) -> f64 {
    // Rounding can leave a tiny negative on a mathematically nonnegative sum;
    // `+ 0.0` turns -0.0 into 0.0.
    if v < 0.0 {
        0.0
    } else {
        v + 0.0
    }
}

/// Evaluates one statistic over a view whose expected counts come from
/// `expected(j, k)`.
pub(crate) fn evaluate(
    view: &CountsView<'_>,
    expected: impl Fn(usize, usize) -> f64,
    kind: StatisticKind,
    nll: NllConvention,
    ln_fact: &LnFactorial,
) -> f64 {
    if let StatisticKind::NegLogLikelihood = kind {
        return neg_log_likelihood_kernel(view, nll, ln_fact);
    }
    let mut acc = CompensatedSum::default();
    let cells = |acc: &mut CompensatedSum, term: &dyn Fn(f64, f64) -> f64| {
        for j in 0..view.rows {
            for k in 0..view.cols {
                acc.add(term(view.counts[j * view.cols + k] as f64, expected(j, k)));
            }
        }
    };
    let value = match kind {
        StatisticKind::ChiSquare => {
            cells(&mut acc, &chi_square_term);
            acc.value()
        }
        StatisticKind::LogLikelihoodRatio => {
            cells(&mut acc, &llr_term);
            2.0 * acc.value()
        }
        StatisticKind::FreemanTukey => {
            cells(&mut acc, &freeman_tukey_term);
            4.0 * acc.value()
        }
        StatisticKind::Frobenius => {
            cells(&mut acc, &frobenius_term);
            acc.value()
        }
        StatisticKind::PowerDivergence(lambda) => {
            if lambda == 0.0 {
                cells(&mut acc, &llr_term);
                2.0 * acc.value()
            } else if lambda == -1.0 {
                cells(&mut acc, &modified_llr_term);
                2.0 * acc.value()
            } else {
                cells(&mut acc, &|n, e| power_term(n, e, lambda));
                2.0 / (lambda * (lambda + 1.0)) * acc.value()
            }
        }
        StatisticKind::NegLogLikelihood => unreachable!(),
    };
    nonnegative(value)
}

/// `-sum_k ln Multinomial(column k; n_.k, p)` with `p_j = n_j. / n` taken from
/// the view's own row totals.
fn neg_log_likelihood_kernel(view: &CountsView<'_>, nll: NllConvention, ln_fact: &LnFactorial) -> f64 {
    let n = view.total as f64;
    let mut acc = CompensatedSum::default();
    for j in 0..view.rows {
        let row_total = view.row_totals[j];
        let ln_p = if row_total == 0 { 0.0 } else { (row_total as f64 / n).ln() };
        for k in 0..view.cols {
            let c = view.counts[j * view.cols + k];
            if c > 0 {
                acc.add(-(c as f64) * ln_p);
            }
            if nll == NllConvention::WithCoefficient {
                acc.add(ln_fact.get(c));
            }
        }
    }
    if nll == NllConvention::WithCoefficient {
        for &col_total in view.col_totals {
            acc.add(-ln_fact.get(col_total));
        }
    }
    nonnegative(acc.value())
}

fn observed(t: &ContingencyTable, m: &HomogeneityModel, kind: StatisticKind) -> StatisticValue {
    debug_assert_eq!((m.expected.rows(), m.expected.cols()), (t.rows(), t.cols()));
    let value =
        evaluate(&CountsView::of(t), |j, k| m.expected(j, k), kind, NllConvention::default(), &LnFactorial::default());
    StatisticValue { kind, value }
}

/// Pearson's chi-square; cells with zero expectation contribute 0.
pub fn chi_square(t: &ContingencyTable, m: &HomogeneityModel) -> StatisticValue {
    observed(t, m, StatisticKind::ChiSquare)
}

/// `2 * sum n ln(n / e)` with `0 ln 0 = 0`.
pub fn log_likelihood_ratio(t: &ContingencyTable, m: &HomogeneityModel) -> StatisticValue {
    observed(t, m, StatisticKind::LogLikelihoodRatio)
}

/// `4 * sum (sqrt n - sqrt e)^2`.
pub fn freeman_tukey(t: &ContingencyTable, m: &HomogeneityModel) -> StatisticValue {
    observed(t, m, StatisticKind::FreemanTukey)
}

/// Unweighted sum of squared differences.
pub fn frobenius(t: &ContingencyTable, m: &HomogeneityModel) -> StatisticValue {
    observed(t, m, StatisticKind::Frobenius)
}

/// Negative log of the probability of the table, each column multinomial
/// with the table's own row proportions. In nats.
pub fn neg_log_likelihood(t: &ContingencyTable) -> StatisticValue {
    neg_log_likelihood_with(t, NllConvention::default())
}

pub fn neg_log_likelihood_with(t: &ContingencyTable, convention: NllConvention) -> StatisticValue {
    let value = neg_log_likelihood_kernel(&CountsView::of(t), convention, &LnFactorial::default());
    StatisticValue { kind: StatisticKind::NegLogLikelihood, value }
}

/// Cressie–Read power divergence
/// `2 / (lambda (lambda + 1)) * sum n ((n / e)^lambda - 1)`, continuous at
/// `lambda = 0` (G^2) and `lambda = -1` (modified log-likelihood). For
/// `lambda <= -1` an empty cell with positive expectation makes the value
/// infinite.
pub fn power_divergence(t: &ContingencyTable, m: &HomogeneityModel, lambda: f64) -> Result<StatisticValue> {
    if !lambda.is_finite() {
        return Err(Error::NonFiniteLambda(lambda));
    }
    Ok(observed(t, m, StatisticKind::PowerDivergence(lambda)))
}

/// Evaluates each distinct requested statistic, in request order.
pub fn compute_all(t: &ContingencyTable, m: &HomogeneityModel, kinds: &[StatisticKind]) -> Result<Vec<StatisticValue>> {
    validate_kinds(kinds)?;
    Ok(dedup(kinds).into_iter().map(|kind| observed(t, m, kind)).collect())
}

pub(crate) fn validate_kinds(kinds: &[StatisticKind]) -> Result<()> {
    for kind in kinds {
        if let StatisticKind::PowerDivergence(lambda) = kind {
            if !lambda.is_finite() {
                return Err(Error::NonFiniteLambda(*lambda));
            }
        }
    }
    Ok(())
}

pub(crate) fn dedup(kinds: &[StatisticKind]) -> Vec<StatisticKind> {
    let mut out: Vec<StatisticKind> = Vec::with_capacity(kinds.len());
    for &kind in kinds {
        if !out.contains(&kind) {
            out.push(kind);
        }
    }
    out
}

/// Expected counts of a view computed from its own margins.
#[inline]
pub(crate) fn own_expected<'a>(view: &'a CountsView<'a>) -> impl Fn(usize, usize) -> f64 + 'a {
    move |j, k| expected_count(view.row_totals[j], view.col_totals[k], view.total)
}
