//! Exact P-values by enumerating every table with the observed column totals.

use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use super::exceedance_threshold;
use crate::error::{Error, Result};
use crate::statistics::{self, own_expected, CompensatedSum, CountsView, LnFactorial, NllConvention, StatisticKind};
use crate::table::{homogeneity_model, ContingencyTable};

pub const DEFAULT_BUDGET: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactOptions {
    /// Largest outcome space that will be enumerated.
    pub budget: u128,
    pub tie_epsilon: Option<f64>,
    pub nll_convention: NllConvention,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions { budget: DEFAULT_BUDGET, tie_epsilon: None, nll_convention: NllConvention::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactResult {
    pub kind: StatisticKind,
    pub observed: f64,
    pub p_value: f64,
    /// Size of the enumerated outcome space.
    pub outcomes: u128,
}

fn compositions_count(total: u64, parts: usize) -> Option<u128> {
    // C(total + parts - 1, parts - 1), built so every intermediate is an integer.
    let mut c: u128 = 1;
    for i in 1..parts as u128 {
        c = c.checked_mul(u128::from(total) + i)? / i;
    }
    Some(c)
}

/// Number of tables with the column totals of `table`; saturates at `u128::MAX`.
pub fn outcome_space_size(table: &ContingencyTable) -> u128 {
    table
        .col_totals()
        .iter()
        .try_fold(1u128, |acc, &n| acc.checked_mul(compositions_count(n, table.rows())?))
        .unwrap_or(u128::MAX)
}

/// All compositions of `total` into `parts` nonnegative parts, colexicographic.
fn compositions(total: u64, parts: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut current = vec![0u64; parts];
    current[0] = total;
    loop {
        out.push(current.clone());
        // Move one unit from the lowest nonzero part to the next part up,
        // sweeping the remainder of the lower parts back into part 0.
        let Some(i) = current[..parts - 1].iter().position(|&c| c > 0) else {
            break;
        };
        let moved = current[i];
        current[i] = 0;
        current[i + 1] += 1;
        current[0] = moved - 1;
    }
    out
}

/// Exact P-value of each requested statistic: the probability, under
/// independent multinomial columns with the observed row proportions, of a
/// table whose statistic is at least `observed - tie_epsilon`.
pub fn exact_pvalues(
    table: &ContingencyTable,
    kinds: &[StatisticKind],
    options: &ExactOptions,
) -> Result<Vec<ExactResult>> {
    statistics::validate_kinds(kinds)?;
    if kinds.is_empty() {
        return Err(Error::InvalidConfig("no statistics requested".into()));
    }
    let required = outcome_space_size(table);
    if required > options.budget {
        return Err(Error::BudgetExceeded { required, budget: options.budget });
    }

    let kinds = statistics::dedup(kinds);
    let rows = table.rows();
    let cols = table.cols();
    let n = table.total();
    let ln_fact = LnFactorial::up_to(table.col_totals().iter().copied().max().unwrap_or(0));
    let model = homogeneity_model(table);
    let observed_view = CountsView::of(table);
    let observed: Vec<f64> = kinds
        .iter()
        .map(|&kind| {
            statistics::evaluate(&observed_view, |j, k| model.expected(j, k), kind, options.nll_convention, &ln_fact)
        })
        .collect();
    let thresholds: Vec<f64> = observed.iter().map(|&o| exceedance_threshold(o, options.tie_epsilon)).collect();

    let ln_p: Vec<Option<f64>> =
        table.row_totals().iter().map(|&t| (t > 0).then(|| (t as f64 / n as f64).ln())).collect();
    // Per column: every composition with positive probability and its log-probability.
    let columns: Vec<Vec<(Vec<u64>, f64)>> = table
        .col_totals()
        .iter()
        .map(|&total| {
            compositions(total, rows)
                .into_iter()
                .filter_map(|comp| {
                    let mut log_pmf = ln_gamma(total as f64 + 1.0);
                    for (c, lp) in comp.iter().zip(&ln_p) {
                        if *c > 0 {
                            log_pmf += *c as f64 * (*lp)? - ln_fact.get(*c);
                        }
                    }
                    Some((comp, log_pmf))
                })
                .collect()
        })
        .collect();

    let mut sums = vec![CompensatedSum::default(); kinds.len()];
    let mut counts = vec![0u64; rows * cols];
    let mut row_totals = vec![0u64; rows];
    let mut odometer = vec![0usize; cols];
    'outer: loop {
        let mut log_prob = 0.0;
        for (k, &choice) in odometer.iter().enumerate() {
            let (comp, lp) = &columns[k][choice];
            log_prob += lp;
            for (j, &c) in comp.iter().enumerate() {
                counts[j * cols + k] = c;
            }
        }
        for (j, total) in row_totals.iter_mut().enumerate() {
            *total = counts[j * cols..(j + 1) * cols].iter().sum();
        }
        let view = CountsView {
            rows,
            cols,
            counts: &counts,
            row_totals: &row_totals,
            col_totals: table.col_totals(),
            total: n,
        };
        let prob = log_prob.exp();
        for (i, &kind) in kinds.iter().enumerate() {
            let value = statistics::evaluate(&view, own_expected(&view), kind, options.nll_convention, &ln_fact);
            if value >= thresholds[i] {
                sums[i].add(prob);
            }
        }

        for k in 0..cols {
            odometer[k] += 1;
            if odometer[k] < columns[k].len() {
                continue 'outer;
            }
            odometer[k] = 0;
        }
        break;
    }

    Ok(kinds
        .iter()
        .zip(observed)
        .zip(sums)
        .map(|((&kind, observed), sum)| ExactResult {
            kind,
            observed,
            p_value: sum.value().clamp(0.0, 1.0),
            outcomes: required,
        })
        .collect())
}
