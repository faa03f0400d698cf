//! Exact tests of homogeneity of proportions for two-way contingency tables.
//!
//! Columns are groups with fixed totals; rows are categories. The null model
//! gives every column the same row distribution, estimated from the row
//! totals. P-values come from Monte-Carlo simulation of that null (with the
//! standard error `sqrt(p (1 - p) / m)`) or, for small tables, from exhaustive
//! enumeration. Five discrepancy statistics are available: chi-square, the
//! log-likelihood ratio, Freeman–Tukey, the negative log-likelihood and the
//! Frobenius distance, plus the whole Cressie–Read power-divergence family.
//!
//! ```
//! use homogeneity::{datasets, homogeneity_model, residuals, frobenius};
//!
//! let danish = datasets::get_dataset("danish").unwrap();
//! let model = homogeneity_model(&danish.table);
//! assert!((model.expected(0, 0) - 441.6).abs() < 0.05);
//! let report = residuals(&danish.table, &model);
//! assert!((report.differences.get(0, 0) + 25.6).abs() < 0.05);
//! assert!(frobenius(&danish.table, &model).value > 0.0);
//! ```

pub mod cli;
pub mod datasets;
mod error;
pub mod montecarlo;
pub mod sampler;
pub mod statistics;
pub mod table;

pub use error::{Error, Result};
pub use montecarlo::{
    estimate_partial, estimate_pvalues, exact_pvalues, merge_partials, ExactOptions, ExactResult, MonteCarloResult,
    PartialCount, SimulationConfig,
};
pub use sampler::{rng_init, rng_uniform, CmwcRng, NullSpec, RngState, UniformSource};
pub use statistics::{
    chi_square, compute_all, freeman_tukey, frobenius, log_likelihood_ratio, neg_log_likelihood,
    neg_log_likelihood_with, power_divergence, NllConvention, StatisticKind, StatisticValue,
};
pub use table::{
    homogeneity_model, parse_table, residuals, ContingencyTable, CsvLayout, Grid, HomogeneityModel, ResidualReport,
};
