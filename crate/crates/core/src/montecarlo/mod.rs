//! Monte-Carlo P-values with standard errors, and an exact enumeration oracle.
//!
//! Simulation `i` always draws from RNG stream `i` of the configured seed, so
//! exceedance counts depend only on `(seed, m, kinds)` and not on how the
//! simulations are spread across workers.

mod exact;

pub use exact::{exact_pvalues, outcome_space_size, ExactOptions, ExactResult, DEFAULT_BUDGET};

use std::ops::Range;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampler::{CmwcRng, NullSpec};
use crate::statistics::{self, own_expected, CountsView, LnFactorial, NllConvention, StatisticKind};
use crate::table::{homogeneity_model, ContingencyTable};

/// Simulations handed to a worker at a time.
const CHUNK: u64 = 2048;
/// Largest log-factorial table cached for a run.
const LN_FACTORIAL_CACHE: u64 = 1 << 20;

/// Default comparison slack: `1e-9 * max(1, |observed|)`.
pub fn default_tie_epsilon(observed: f64) -> f64 {
    1e-9 * observed.abs().max(1.0)
}

/// Smallest simulated value that counts as "at least as extreme".
pub(crate) fn exceedance_threshold(observed: f64, tie_epsilon: Option<f64>) -> f64 {
    if observed.is_infinite() {
        return observed;
    }
    observed - tie_epsilon.unwrap_or_else(|| default_tie_epsilon(observed))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    /// Number of simulated tables.
    pub m: u64,
    pub seed: u64,
    pub workers: usize,
    pub kinds: Vec<StatisticKind>,
    /// Absolute comparison slack; `None` uses [`default_tie_epsilon`].
    pub tie_epsilon: Option<f64>,
    pub nll_convention: NllConvention,
}

impl SimulationConfig {
    pub fn new(m: u64, seed: u64, kinds: &[StatisticKind]) -> Self {
        SimulationConfig {
            m,
            seed,
            workers: default_workers(),
            kinds: kinds.to_vec(),
            tie_epsilon: None,
            nll_convention: NllConvention::default(),
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_tie_epsilon(mut self, tie_epsilon: f64) -> Self {
        self.tie_epsilon = Some(tie_epsilon);
        self
    }

    pub fn with_nll_convention(mut self, convention: NllConvention) -> Self {
        self.nll_convention = convention;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::InvalidConfig("number of simulations must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(Error::InvalidConfig("number of workers must be at least 1".into()));
        }
        if self.kinds.is_empty() {
            return Err(Error::InvalidConfig("no statistics requested".into()));
        }
        if self.tie_epsilon.is_some_and(|e| e.is_nan() || e < 0.0) {
            return Err(Error::InvalidConfig("tie epsilon must be nonnegative".into()));
        }
        statistics::validate_kinds(&self.kinds)
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Estimated P-value of one statistic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloResult {
    pub kind: StatisticKind,
    pub observed: f64,
    pub exceedances: u64,
    pub m: u64,
    pub p_hat: f64,
    pub std_err: f64,
    pub seed: u64,
}

impl MonteCarloResult {
    pub fn new(kind: StatisticKind, observed: f64, exceedances: u64, m: u64, seed: u64) -> Self {
        assert!(m > 0 && exceedances <= m, "{exceedances} exceedances out of {m}");
        let p_hat = exceedances as f64 / m as f64;
        let std_err = (p_hat * (1.0 - p_hat) / m as f64).sqrt();
        MonteCarloResult { kind, observed, exceedances, m, p_hat, std_err, seed }
    }
}

/// Exceedance count from a contiguous range of simulations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartialCount {
    pub kind: StatisticKind,
    pub observed: f64,
    pub seed: u64,
    pub exceedances: u64,
    pub m: u64,
}

/// Sums partial counts of the same `(kind, observed, seed)` run.
pub fn merge_partials(parts: &[PartialCount]) -> Result<MonteCarloResult> {
    let first = parts.first().ok_or_else(|| Error::Provenance("no partial results".into()))?;
    let mut exceedances = 0u64;
    let mut m = 0u64;
    for part in parts {
        if part.seed != first.seed {
            return Err(Error::Provenance(format!("seeds differ ({} vs {})", first.seed, part.seed)));
        }
        if part.kind != first.kind {
            return Err(Error::Provenance(format!("statistics differ ({} vs {})", first.kind, part.kind)));
        }
        if part.observed.to_bits() != first.observed.to_bits() {
            return Err(Error::Provenance("observed statistics differ".into()));
        }
        if part.exceedances > part.m {
            return Err(Error::Provenance(format!("{} exceedances out of {}", part.exceedances, part.m)));
        }
        exceedances += part.exceedances;
        m += part.m;
    }
    if m == 0 {
        return Err(Error::Provenance("partials contain no simulations".into()));
    }
    Ok(MonteCarloResult::new(first.kind, first.observed, exceedances, m, first.seed))
}

/// Everything a worker needs, shared read-only.
struct Run {
    spec: NullSpec,
    kinds: Vec<StatisticKind>,
    observed: Vec<f64>,
    thresholds: Vec<f64>,
    nll: NllConvention,
    ln_fact: LnFactorial,
    seed: u64,
}

impl Run {
    fn prepare(table: &ContingencyTable, cfg: &SimulationConfig) -> Result<Self> {
        cfg.validate()?;
        let spec = NullSpec::from_table(table)?;
        let kinds = statistics::dedup(&cfg.kinds);
        let max_col = table.col_totals().iter().copied().max().unwrap_or(0);
        let ln_fact = if kinds.contains(&StatisticKind::NegLogLikelihood) {
            LnFactorial::up_to(max_col.min(LN_FACTORIAL_CACHE))
        } else {
            LnFactorial::default()
        };
        let model = homogeneity_model(table);
        let view = CountsView::of(table);
        let observed: Vec<f64> = kinds
            .iter()
            .map(|&kind| statistics::evaluate(&view, |j, k| model.expected(j, k), kind, cfg.nll_convention, &ln_fact))
            .collect();
        let thresholds = observed.iter().map(|&o| exceedance_threshold(o, cfg.tie_epsilon)).collect();
        Ok(Run { spec, kinds, observed, thresholds, nll: cfg.nll_convention, ln_fact, seed: cfg.seed })
    }

    /// Exceedances per kind over simulations `range`.
    fn simulate(&self, range: Range<u64>) -> Vec<u64> {
        let rows = self.spec.rows();
        let cols = self.spec.cols();
        let mut counts = vec![0u64; rows * cols];
        let mut row_totals = vec![0u64; rows];
        let mut hits = vec![0u64; self.kinds.len()];
        for index in range {
            let mut rng = CmwcRng::new(self.seed, index);
            self.spec.simulate_into(&mut rng, &mut counts);
            for (j, total) in row_totals.iter_mut().enumerate() {
                *total = counts[j * cols..(j + 1) * cols].iter().sum();
            }
            let view = CountsView {
                rows,
                cols,
                counts: &counts,
                row_totals: &row_totals,
                col_totals: self.spec.col_totals(),
                total: self.spec.total(),
            };
            for (i, &kind) in self.kinds.iter().enumerate() {
                let value = statistics::evaluate(&view, own_expected(&view), kind, self.nll, &self.ln_fact);
                if value >= self.thresholds[i] {
                    hits[i] += 1;
                }
            }
        }
        hits
    }

    fn run_parallel(&self, range: Range<u64>, workers: usize) -> Result<Vec<u64>> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::Resource(format!("cannot start {workers} workers: {e}")))?;
        let start = range.start;
        let chunks = (range.end - range.start).div_ceil(CHUNK);
        let zero = vec![0u64; self.kinds.len()];
        Ok(pool.install(|| {
            (0..chunks)
                .into_par_iter()
                .map(|c| {
                    let lo = start + c * CHUNK;
                    self.simulate(lo..(lo + CHUNK).min(range.end))
                })
                .reduce(|| zero.clone(), |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect())
        }))
    }
}

/// Estimates the P-value of every requested statistic from `cfg.m` tables
/// simulated under the homogeneity null of `table`.
///
/// All statistics are evaluated on the same simulated tables, each against
/// its own homogeneity model. A simulated value counts as an exceedance when
/// it is at least `observed - tie_epsilon`.
pub fn estimate_pvalues(table: &ContingencyTable, cfg: &SimulationConfig) -> Result<Vec<MonteCarloResult>> {
    let run = Run::prepare(table, cfg)?;
    let hits = run.run_parallel(0..cfg.m, cfg.workers)?;
    Ok(run
        .kinds
        .iter()
        .zip(&run.observed)
        .zip(hits)
        .map(|((&kind, &observed), hits)| MonteCarloResult::new(kind, observed, hits, cfg.m, cfg.seed))
        .collect())
}

/// Exceedance counts for simulations `sims` only; `cfg.m` is ignored. Partials
/// over disjoint ranges merge to the same result as one run over their union.
pub fn estimate_partial(
    table: &ContingencyTable,
    cfg: &SimulationConfig,
    sims: Range<u64>,
) -> Result<Vec<PartialCount>> {
    let cfg = SimulationConfig { m: cfg.m.max(1), ..cfg.clone() };
    let run = Run::prepare(table, &cfg)?;
    let m = sims.end.saturating_sub(sims.start);
    let hits = if m == 0 { vec![0; run.kinds.len()] } else { run.run_parallel(sims, cfg.workers)? };
    Ok(run
        .kinds
        .iter()
        .zip(&run.observed)
        .zip(hits)
        .map(|((&kind, &observed), exceedances)| PartialCount { kind, observed, seed: cfg.seed, exceedances, m })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity() -> ContingencyTable {
        ContingencyTable::from_rows(&[[1u64, 0], [0, 1]]).unwrap()
    }

    #[test]
    fn std_err_identity() {
        let r = MonteCarloResult::new(StatisticKind::Frobenius, 1.0, 3, 100, 0);
        assert_eq!(r.p_hat, 0.03);
        assert_eq!(r.std_err, (0.03f64 * 0.97 / 100.0).sqrt());
    }

    #[test]
    fn merge_is_additive() {
        let part =
            |exceedances, m| PartialCount { kind: StatisticKind::Frobenius, observed: 1.0, seed: 7, exceedances, m };
        let merged = merge_partials(&[part(3, 100), part(5, 100)]).unwrap();
        assert_eq!((merged.exceedances, merged.m), (8, 200));
        assert_eq!(merged.p_hat, 0.04);

        let single = merge_partials(&[part(3, 100)]).unwrap();
        assert_eq!(single, MonteCarloResult::new(StatisticKind::Frobenius, 1.0, 3, 100, 7));

        let other_seed = PartialCount { seed: 8, ..part(5, 100) };
        assert!(matches!(merge_partials(&[part(3, 100), other_seed]), Err(Error::Provenance(_))));
        assert!(merge_partials(&[]).is_err());
    }

    #[test]
    fn config_is_validated() {
        let t = identity();
        let kinds = [StatisticKind::Frobenius];
        assert!(matches!(estimate_pvalues(&t, &SimulationConfig::new(0, 0, &kinds)), Err(Error::InvalidConfig(_))));
        assert!(estimate_pvalues(&t, &SimulationConfig::new(10, 0, &kinds).with_workers(0)).is_err());
        assert!(estimate_pvalues(&t, &SimulationConfig::new(10, 0, &[])).is_err());
        assert!(estimate_pvalues(&t, &SimulationConfig::new(10, 0, &kinds).with_tie_epsilon(-1.0)).is_err());
    }

    #[test]
    fn homogeneous_table_has_p_one() {
        let t = ContingencyTable::from_rows(&[[2u64, 2], [3, 3]]).unwrap();
        let cfg = SimulationConfig::new(2000, 5, &StatisticKind::DIVERGENCES).with_workers(2);
        for r in estimate_pvalues(&t, &cfg).unwrap() {
            assert_eq!(r.observed, 0.0);
            assert_eq!(r.p_hat, 1.0, "{}", r.kind);
        }
    }

    #[test]
    fn partial_ranges_merge_to_full_run() {
        let t = ContingencyTable::from_rows(&[[5u64, 1, 2], [1, 4, 3]]).unwrap();
        let cfg = SimulationConfig::new(3000, 99, &StatisticKind::STANDARD).with_workers(1);
        let full = estimate_pvalues(&t, &cfg).unwrap();
        let a = estimate_partial(&t, &cfg, 0..1234).unwrap();
        let b = estimate_partial(&t, &cfg, 1234..3000).unwrap();
        for (i, whole) in full.iter().enumerate() {
            let merged = merge_partials(&[a[i].clone(), b[i].clone()]).unwrap();
            assert_eq!(&merged, whole);
        }
    }

    #[test]
    fn infinite_observed_only_counts_infinite() {
        assert_eq!(exceedance_threshold(f64::INFINITY, None), f64::INFINITY);
        assert_eq!(exceedance_threshold(2.0, Some(0.5)), 1.5);
        assert_eq!(exceedance_threshold(0.0, None), -1e-9);
    }
}
