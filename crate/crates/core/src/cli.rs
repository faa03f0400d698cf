//! Command-line front end.
//!
//! Subcommands: `test` (Monte-Carlo P-values), `residuals` (model and residual
//! tables), `exact` (enumeration) and `datasets` (list or export the bundled
//! tables). Exit codes: 2 for unreadable input, 3 for invalid tables or
//! settings, 4 for resource failures, 5 when exact enumeration exceeds its
//! budget.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::datasets;
use crate::error::Error;
use crate::montecarlo::{
    self, estimate_pvalues, exact_pvalues, ExactOptions, ExactResult, MonteCarloResult, SimulationConfig,
};
use crate::statistics::{NllConvention, StatisticKind};
use crate::table::{homogeneity_model, parse_table, residuals, ContingencyTable, CsvLayout, Grid};

pub const EXIT_PARSE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;
pub const EXIT_BUDGET: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "homogeneity", version, about = "Exact tests of homogeneity of proportions for contingency tables")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Estimate P-values by Monte-Carlo simulation.
    Test(TestArgs),
    /// Print the homogeneity model and the residual tables.
    Residuals(InputArgs),
    /// Compute P-values exactly by enumerating every possible table.
    Exact(ExactArgs),
    /// List the bundled datasets or export one as CSV.
    Datasets(DatasetsArgs),
}

#[derive(Debug, Args)]
struct InputArgs {
    /// CSV file; columns are the groups with fixed totals.
    #[arg(long, value_name = "PATH", conflicts_with = "dataset", required_unless_present = "dataset")]
    input: Option<PathBuf>,
    /// Bundled dataset (danish, mania, republican, mania2).
    #[arg(long, value_name = "NAME")]
    dataset: Option<String>,
    /// Swap rows and columns after reading.
    #[arg(long)]
    transpose: bool,
    /// The CSV has no header row of column labels.
    #[arg(long)]
    no_header: bool,
    /// The CSV has no leading column of row labels.
    #[arg(long)]
    no_row_labels: bool,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct TestArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Comma-separated statistics: chi2, g2, ft, frobenius, nll, all, cr:LAMBDA.
    #[arg(long, default_value = "all")]
    stats: String,
    /// Number of simulated tables.
    #[arg(long, default_value_t = 4_000_000)]
    m: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Args)]
struct ExactArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value = "all")]
    stats: String,
    /// Largest number of tables to enumerate.
    #[arg(long, default_value_t = montecarlo::DEFAULT_BUDGET)]
    budget: u128,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct DatasetsArgs {
    /// Print the names of the bundled datasets.
    #[arg(long)]
    list: bool,
    /// Write the named dataset to stdout as CSV.
    #[arg(long, value_name = "NAME")]
    emit: Option<String>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(clap::Error),
    Input(String),
    Core(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(e) if !e.use_stderr() => 0,
            CliError::Usage(_) | CliError::Input(_) => EXIT_PARSE,
            CliError::Core(e) => match e {
                Error::Csv { .. }
                | Error::InvalidCell { .. }
                | Error::Ragged { .. }
                | Error::UnknownStatistic(_)
                | Error::UnknownDataset { .. } => EXIT_PARSE,
                Error::Resource(_) => EXIT_RESOURCE,
                Error::BudgetExceeded { .. } => EXIT_BUDGET,
                _ => EXIT_VALIDATION,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(e) => write!(f, "{e}"),
            CliError::Input(msg) => write!(f, "error: {msg}"),
            CliError::Core(e) => write!(f, "error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

/// Observed table as echoed in reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableEcho {
    pub counts: Vec<Vec<u64>>,
    pub row_labels: Option<Vec<String>>,
    pub col_labels: Option<Vec<String>>,
    /// Each cell as a percentage of its column total.
    pub col_percentages: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualEcho {
    pub diff: Vec<Vec<f64>>,
    pub standardized: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub source: String,
    pub m: u64,
    pub seed: u64,
    pub threads: usize,
    pub stats: Vec<StatisticKind>,
    pub tie_epsilon: String,
    pub nll_convention: NllConvention,
    pub transpose: bool,
}

/// Output of `test`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub table: TableEcho,
    pub model: Vec<Vec<f64>>,
    pub residuals: ResidualEcho,
    pub results: Vec<MonteCarloResult>,
    pub config: ConfigEcho,
    pub seconds: f64,
}

/// Output of `residuals`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualsReport {
    pub table: TableEcho,
    pub model: Vec<Vec<f64>>,
    pub residuals: ResidualEcho,
}

/// Output of `exact`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactReport {
    pub table: TableEcho,
    pub results: Vec<ExactResult>,
}

fn echo(table: &ContingencyTable) -> TableEcho {
    let col_percentages = (0..table.rows())
        .map(|j| (0..table.cols()).map(|k| percent(table.get(j, k) as f64, table.col_totals()[k])).collect())
        .collect();
    TableEcho {
        counts: table.to_nested(),
        row_labels: table.row_labels().map(<[String]>::to_vec),
        col_labels: table.col_labels().map(<[String]>::to_vec),
        col_percentages,
    }
}

fn percent(value: f64, col_total: u64) -> f64 {
    if col_total == 0 {
        0.0
    } else {
        100.0 * value / col_total as f64
    }
}

fn load(args: &InputArgs) -> Result<(ContingencyTable, String), CliError> {
    let (table, source) = match (&args.input, &args.dataset) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
            let layout =
                CsvLayout { has_header: !args.no_header, has_row_labels: !args.no_row_labels, transpose: false };
            (parse_table(&text, layout)?, path.display().to_string())
        }
        (None, Some(name)) => {
            let dataset = datasets::get_dataset(name)?;
            (dataset.table, format!("dataset:{}", dataset.name))
        }
        (None, None) => return Err(CliError::Input("one of --input or --dataset is required".into())),
    };
    Ok((if args.transpose { table.transposed() } else { table }, source))
}

fn residuals_report(table: &ContingencyTable) -> ResidualsReport {
    let model = homogeneity_model(table);
    let res = residuals(table, &model);
    ResidualsReport {
        table: echo(table),
        model: model.expected.to_nested(),
        residuals: ResidualEcho { diff: res.differences.to_nested(), standardized: res.standardized.to_nested() },
    }
}

/// Runs the CLI on `args` (program name first), writing the report to `out`.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(CliError::Usage)?;
    match cli.command {
        Command::Test(args) => {
            let (table, source) = load(&args.input)?;
            let kinds = StatisticKind::parse_list(&args.stats)?;
            let threads = args.threads.unwrap_or_else(montecarlo::default_workers);
            let cfg = SimulationConfig::new(args.m, args.seed, &kinds).with_workers(threads);
            let started = Instant::now();
            let results = estimate_pvalues(&table, &cfg)?;
            let seconds = started.elapsed().as_secs_f64();
            let base = residuals_report(&table);
            let report = RunReport {
                table: base.table,
                model: base.model,
                residuals: base.residuals,
                results,
                config: ConfigEcho {
                    source,
                    m: cfg.m,
                    seed: cfg.seed,
                    threads,
                    stats: kinds,
                    tie_epsilon: "1e-9*max(1,|observed|)".into(),
                    nll_convention: cfg.nll_convention,
                    transpose: args.input.transpose,
                },
                seconds,
            };
            if args.input.json {
                write_json(out, &report)?;
            } else {
                out.write_all(render_run(&table, &report).as_bytes())?;
            }
        }
        Command::Residuals(args) => {
            let (table, _) = load(&args)?;
            let report = residuals_report(&table);
            if args.json {
                write_json(out, &report)?;
            } else {
                out.write_all(render_residuals(&table, &report).as_bytes())?;
            }
        }
        Command::Exact(args) => {
            let (table, _) = load(&args.input)?;
            let kinds = StatisticKind::parse_list(&args.stats)?;
            let options = ExactOptions { budget: args.budget, ..ExactOptions::default() };
            let results = exact_pvalues(&table, &kinds, &options)?;
            let report = ExactReport { table: echo(&table), results };
            if args.input.json {
                write_json(out, &report)?;
            } else {
                out.write_all(render_exact(&report).as_bytes())?;
            }
        }
        Command::Datasets(args) => {
            if args.list {
                for d in datasets::all() {
                    writeln!(out, "{:<12}{:>3} x {:<3}{}", d.name, d.table.rows(), d.table.cols(), d.source)?;
                }
            } else if let Some(name) = args.emit {
                out.write_all(datasets::get_dataset(&name)?.table.to_csv().as_bytes())?;
            }
        }
    }
    Ok(())
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(|e| CliError::Input(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

/// Process entry point; returns the exit code.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(std::env::args_os(), &mut out) {
        Ok(()) => 0,
        Err(CliError::Usage(e)) => {
            let _ = e.print();
            CliError::Usage(e).exit_code()
        }
        Err(e) => {
            let _ = out.flush();
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

/// Formats `p` with three significant digits.
pub fn format_pvalue(p: f64) -> String {
    if p <= 0.0 || !p.is_finite() {
        return format!("{p}");
    }
    let decimals = (2 - p.log10().floor() as i32).max(0) as usize;
    format!("{p:.decimals$}")
}

fn labels(given: Option<&Vec<String>>, len: usize) -> Vec<String> {
    given.cloned().unwrap_or_else(|| (1..=len).map(|i| i.to_string()).collect())
}

/// Aligned text table; `cell(j, k)` renders one entry and `footer` the "All" row.
fn render_grid(
    out: &mut String,
    title: &str,
    row_labels: &[String],
    col_labels: &[String],
    cell: impl Fn(usize, usize) -> String,
    footer: Option<Vec<String>>,
) {
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut header = vec![String::new()];
    header.extend(col_labels.iter().cloned());
    rows.push(header);
    for (j, label) in row_labels.iter().enumerate() {
        let mut row = vec![label.clone()];
        row.extend((0..col_labels.len()).map(|k| cell(j, k)));
        rows.push(row);
    }
    let body_end = rows.len();
    if let Some(footer) = footer {
        let mut row = vec!["All".to_owned()];
        row.extend(footer);
        rows.push(row);
    }
    let widths: Vec<usize> =
        (0..=col_labels.len()).map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0)).collect();
    let _ = writeln!(out, "{title}");
    for (i, row) in rows.iter().enumerate() {
        if i == 1 || (i == body_end && i < rows.len()) {
            let _ = writeln!(out, "{}", "-".repeat(widths.iter().sum::<usize>() + 3 * col_labels.len()));
        }
        let mut line = format!("{:<w$}", row[0], w = widths[0]);
        for (c, text) in row.iter().enumerate().skip(1) {
            let _ = write!(line, "   {:>w$}", text, w = widths[c]);
        }
        let _ = writeln!(out, "{}", line.trim_end());
    }
    out.push('\n');
}

fn render_residuals(table: &ContingencyTable, report: &ResidualsReport) -> String {
    let rl = labels(report.table.row_labels.as_ref(), table.rows());
    let cl = labels(report.table.col_labels.as_ref(), table.cols());
    let col_totals = table.col_totals();
    let mut out = String::new();
    render_grid(
        &mut out,
        "Observed counts",
        &rl,
        &cl,
        |j, k| format!("{} ({:.1}%)", table.get(j, k), report.table.col_percentages[j][k]),
        Some(col_totals.iter().map(|t| format!("{t} (100.0%)")).collect()),
    );
    render_grid(
        &mut out,
        "Model of homogeneous proportions",
        &rl,
        &cl,
        |j, k| format!("{:.1} ({:.1}%)", report.model[j][k], percent(report.model[j][k], col_totals[k])),
        Some(col_totals.iter().map(|t| format!("{t}.0 (100.0%)")).collect()),
    );
    let diff = &report.residuals.diff;
    render_grid(
        &mut out,
        "Differences (observed - model)",
        &rl,
        &cl,
        |j, k| format!("{:.1}", diff[j][k]),
        Some(vec!["0.0".into(); cl.len()]),
    );
    let std = &report.residuals.standardized;
    render_grid(
        &mut out,
        "Differences divided by the square root of the model",
        &rl,
        &cl,
        |j, k| format!("{:.1}", std[j][k]),
        None,
    );
    out
}

fn render_run(table: &ContingencyTable, report: &RunReport) -> String {
    let base = ResidualsReport {
        table: report.table.clone(),
        model: report.model.clone(),
        residuals: report.residuals.clone(),
    };
    let mut out = render_residuals(table, &base);
    let _ = writeln!(
        out,
        "P-values from {} simulations (seed {}, {} thread{}, {:.2} s)",
        report.config.m,
        report.config.seed,
        report.config.threads,
        if report.config.threads == 1 { "" } else { "s" },
        report.seconds
    );
    let width = report.results.iter().map(|r| r.kind.label().len()).max().unwrap_or(0);
    for r in &report.results {
        let _ = writeln!(
            out,
            "  {:<width$}   observed {:>12.6}   P = {:<9} (std. err. {:.2e}, {} of {})",
            r.kind.label(),
            r.observed,
            format_pvalue(r.p_hat),
            r.std_err,
            r.exceedances,
            r.m,
        );
    }
    out
}

fn render_exact(report: &ExactReport) -> String {
    let mut out = String::new();
    let outcomes = report.results.first().map_or(0, |r| r.outcomes);
    let _ = writeln!(out, "Exact P-values over {outcomes} outcomes");
    let width = report.results.iter().map(|r| r.kind.label().len()).max().unwrap_or(0);
    for r in &report.results {
        let _ = writeln!(out, "  {:<width$}   observed {:>12.6}   P = {}", r.kind.label(), r.observed, r.p_value);
    }
    out
}

/// Residual grid as rendered by the `residuals` subcommand, one decimal.
pub fn format_grid(grid: &Grid) -> Vec<Vec<String>> {
    (0..grid.rows()).map(|j| grid.row(j).iter().map(|v| format!("{v:.1}")).collect()).collect()
}
