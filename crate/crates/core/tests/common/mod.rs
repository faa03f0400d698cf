// Strategies and property checks shared by the property tests and the acceptance run.
#![allow(dead_code)]

use homogeneity::{
    compute_all, estimate_pvalues, homogeneity_model, neg_log_likelihood, power_divergence, residuals,
    ContingencyTable, NullSpec, SimulationConfig, StatisticKind,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

pub type Check = std::result::Result<(), TestCaseError>;

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

/// Any valid table with positive column totals.
pub fn table(max_rows: usize, max_cols: usize, max_count: u64) -> impl Strategy<Value = ContingencyTable> {
    (2..=max_rows, 2..=max_cols)
        .prop_flat_map(move |(r, s)| (Just(r), Just(s), prop::collection::vec(0..=max_count, r * s)))
        .prop_filter_map("empty column", |(r, s, counts)| {
            let t = ContingencyTable::from_counts(r, s, counts).ok()?;
            t.col_totals().iter().all(|&c| c > 0).then_some(t)
        })
}

/// Tables with every count positive.
pub fn positive_table() -> impl Strategy<Value = ContingencyTable> {
    (2..=5usize, 2..=4usize)
        .prop_flat_map(|(r, s)| (Just(r), Just(s), prop::collection::vec(1..=40u64, r * s)))
        .prop_map(|(r, s, counts)| ContingencyTable::from_counts(r, s, counts).unwrap())
}

/// Tables whose columns are exact multiples of one row profile.
pub fn proportional_table() -> impl Strategy<Value = ContingencyTable> {
    (prop::collection::vec(0..=6u64, 2..=6), prop::collection::vec(1..=5u64, 2..=4))
        .prop_filter("profile needs a positive entry", |(profile, _)| profile.iter().any(|&b| b > 0))
        .prop_map(|(profile, scale)| {
            let counts = profile.iter().flat_map(|&b| scale.iter().map(move |&c| b * c)).collect();
            ContingencyTable::from_counts(profile.len(), scale.len(), counts).unwrap()
        })
}

/// A table together with a row and a column permutation.
pub fn permuted_table() -> impl Strategy<Value = (ContingencyTable, Vec<usize>, Vec<usize>)> {
    table(6, 4, 30).prop_flat_map(|t| {
        let rows: Vec<usize> = (0..t.rows()).collect();
        let cols: Vec<usize> = (0..t.cols()).collect();
        (Just(t), Just(rows).prop_shuffle(), Just(cols).prop_shuffle())
    })
}

pub fn permute(t: &ContingencyTable, rows: &[usize], cols: &[usize]) -> ContingencyTable {
    let counts = rows.iter().flat_map(|&j| cols.iter().map(move |&k| t.get(j, k))).collect();
    ContingencyTable::from_counts(t.rows(), t.cols(), counts).unwrap()
}

pub fn check_residual_sums(t: &ContingencyTable) -> Check {
    let report = residuals(t, &homogeneity_model(t));
    for j in 0..t.rows() {
        let s: f64 = (0..t.cols()).map(|k| report.differences.get(j, k)).sum();
        prop_assert!(s.abs() <= 1e-9, "row {} sums to {}", j, s);
    }
    for k in 0..t.cols() {
        let s: f64 = (0..t.rows()).map(|j| report.differences.get(j, k)).sum();
        prop_assert!(s.abs() <= 1e-9, "column {} sums to {}", k, s);
    }
    Ok(())
}

pub fn check_model_equivariance(t: &ContingencyTable, rows: &[usize], cols: &[usize]) -> Check {
    let model = homogeneity_model(t);
    let permuted = homogeneity_model(&permute(t, rows, cols));
    for (pj, &j) in rows.iter().enumerate() {
        for (pk, &k) in cols.iter().enumerate() {
            prop_assert!(close(permuted.expected(pj, pk), model.expected(j, k), 1e-12));
        }
    }
    Ok(())
}

pub fn check_permutation_invariance(t: &ContingencyTable, rows: &[usize], cols: &[usize]) -> Check {
    let p = permute(t, rows, cols);
    let kinds = [&StatisticKind::STANDARD[..], &[StatisticKind::PowerDivergence(2.0 / 3.0)]].concat();
    let a = compute_all(t, &homogeneity_model(t), &kinds).unwrap();
    let b = compute_all(&p, &homogeneity_model(&p), &kinds).unwrap();
    for (x, y) in a.iter().zip(&b) {
        prop_assert!(close(x.value, y.value, 1e-12), "{}: {} vs {}", x.kind, x.value, y.value);
    }
    Ok(())
}

/// Proportional tables have zero residuals and zero divergences; moving one
/// unit between rows of a column makes every divergence positive.
pub fn check_zero_divergence(t: &ContingencyTable) -> Check {
    let model = homogeneity_model(t);
    let report = residuals(t, &model);
    prop_assert!(report.differences.as_slice().iter().all(|&d| d == 0.0));
    prop_assert!(report.standardized.as_slice().iter().all(|&d| d == 0.0));
    for v in compute_all(t, &model, &StatisticKind::DIVERGENCES).unwrap() {
        prop_assert_eq!(v.value, 0.0, "{}", v.kind);
    }

    let (from, k) = (0..t.rows())
        .flat_map(|j| (0..t.cols()).map(move |k| (j, k)))
        .find(|&(j, k)| t.get(j, k) > 0)
        .expect("nonempty table");
    let to = (from + 1) % t.rows();
    let mut counts = t.counts().to_vec();
    counts[from * t.cols() + k] -= 1;
    counts[to * t.cols() + k] += 1;
    let perturbed = ContingencyTable::from_counts(t.rows(), t.cols(), counts).unwrap();
    for v in compute_all(&perturbed, &homogeneity_model(&perturbed), &StatisticKind::DIVERGENCES).unwrap() {
        prop_assert!(v.value > 0.0, "{} is {} on a perturbed table", v.kind, v.value);
    }
    Ok(())
}

pub fn check_family_coherence(t: &ContingencyTable) -> Check {
    let model = homogeneity_model(t);
    let values = compute_all(t, &model, &StatisticKind::DIVERGENCES).unwrap();
    let (x2, g2, h2) = (values[0].value, values[1].value, values[2].value);
    let pd = |lambda| power_divergence(t, &model, lambda).unwrap().value;
    prop_assert!((pd(1.0) - x2).abs() <= 1e-9 * (1.0 + x2));
    prop_assert!((pd(-0.5) - h2).abs() <= 1e-9 * (1.0 + h2));
    prop_assert!((pd(1e-8) - g2).abs() <= 1e-6, "{} vs {}", pd(1e-8), g2);
    Ok(())
}

pub fn check_cell_scaling(t: &ContingencyTable, c: u64) -> Check {
    let scaled =
        ContingencyTable::from_counts(t.rows(), t.cols(), t.counts().iter().map(|&n| n * c).collect()).unwrap();
    let a = compute_all(t, &homogeneity_model(t), &StatisticKind::DIVERGENCES).unwrap();
    let b = compute_all(&scaled, &homogeneity_model(&scaled), &StatisticKind::DIVERGENCES).unwrap();
    let c = c as f64;
    for (x, y) in a.iter().zip(&b) {
        let factor = if x.kind == StatisticKind::Frobenius { c * c } else { c };
        prop_assert!(close(y.value, factor * x.value, 1e-9), "{}: {} vs {} * {}", x.kind, y.value, factor, x.value);
    }
    Ok(())
}

/// Every simulated table keeps the column totals of its spec.
pub fn check_conservation(t: &ContingencyTable, seed: u64, tables: u64) -> Check {
    let spec = NullSpec::from_table(t).unwrap();
    let mut counts = vec![0u64; t.rows() * t.cols()];
    for i in 0..tables {
        spec.simulate_into(&mut homogeneity::rng_init(seed, i), &mut counts);
        for k in 0..t.cols() {
            let total: u64 = (0..t.rows()).map(|j| counts[j * t.cols() + k]).sum();
            prop_assert_eq!(total, t.col_totals()[k]);
        }
    }
    Ok(())
}

pub fn check_worker_determinism(t: &ContingencyTable, seed: u64, m: u64) -> Check {
    let cfg = SimulationConfig::new(m, seed, &StatisticKind::STANDARD);
    let one = estimate_pvalues(t, &cfg.clone().with_workers(1)).unwrap();
    for workers in [2, 8] {
        let many = estimate_pvalues(t, &cfg.clone().with_workers(workers)).unwrap();
        prop_assert_eq!(&one, &many, "{} workers", workers);
    }
    Ok(())
}

/// Raising the bar for "at least as extreme" never adds exceedances. The
/// slack shrinks step by step, which moves the threshold up with the same
/// simulated tables.
pub fn check_monotonicity(t: &ContingencyTable, seed: u64, m: u64) -> Check {
    let mut previous: Option<Vec<u64>> = None;
    for eps in [10.0, 1.0, 0.1, 1e-9, 0.0] {
        let cfg = SimulationConfig::new(m, seed, &StatisticKind::STANDARD).with_tie_epsilon(eps);
        let counts: Vec<u64> = estimate_pvalues(t, &cfg).unwrap().iter().map(|r| r.exceedances).collect();
        if let Some(prev) = &previous {
            for (a, b) in prev.iter().zip(&counts) {
                prop_assert!(b <= a, "exceedances rose from {} to {}", a, b);
            }
        }
        previous = Some(counts);
    }
    Ok(())
}

pub fn check_homogeneous_pvalue(t: &ContingencyTable, seed: u64) -> Check {
    for r in estimate_pvalues(t, &SimulationConfig::new(500, seed, &StatisticKind::DIVERGENCES)).unwrap() {
        prop_assert_eq!(r.observed, 0.0);
        prop_assert_eq!(r.exceedances, r.m, "{}", r.kind);
        prop_assert_eq!(r.p_hat, 1.0);
    }
    Ok(())
}

pub fn check_std_err_identity(t: &ContingencyTable, seed: u64, m: u64) -> Check {
    for r in estimate_pvalues(t, &SimulationConfig::new(m, seed, &StatisticKind::STANDARD)).unwrap() {
        prop_assert_eq!(r.p_hat, r.exceedances as f64 / r.m as f64);
        let expected = (r.p_hat * (1.0 - r.p_hat) / r.m as f64).sqrt();
        prop_assert!((r.std_err - expected).abs() <= 1e-15);
    }
    Ok(())
}

/// A table whose row profile has one support point has likelihood one.
pub fn check_certain_nll(row: usize, rows: usize, totals: &[u64]) -> Check {
    let counts = (0..rows).flat_map(|j| totals.iter().map(move |&c| if j == row { c } else { 0 })).collect();
    let t = ContingencyTable::from_counts(rows, totals.len(), counts).unwrap();
    prop_assert_eq!(neg_log_likelihood(&t).value, 0.0);
    Ok(())
}

pub fn certain_nll_case() -> impl Strategy<Value = (usize, usize, Vec<u64>)> {
    (2..=6usize, prop::collection::vec(1..=50u64, 2..=4))
        .prop_flat_map(|(rows, totals)| (0..rows, Just(rows), Just(totals)))
}

/// Runs `test` on `cases` inputs drawn deterministically from `strategy`.
pub fn run<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Check) -> Result<(), String> {
    let mut runner = TestRunner::new_with_rng(
        Config { cases, failure_persistence: None, ..Config::default() },
        proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha),
    );
    runner.run(&strategy, test).map_err(|e| e.to_string())
}
