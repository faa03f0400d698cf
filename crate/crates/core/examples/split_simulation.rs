// Splitting one simulation run into independent ranges and merging them.
//
// Simulation i always uses RNG stream i, so ranges can run on different
// machines and still add up to exactly the single-run counts.
//
// cargo run --release --example split_simulation

use homogeneity::{datasets, estimate_partial, estimate_pvalues, merge_partials, SimulationConfig, StatisticKind};

pub fn run_example(m: u64) -> Result<(), Box<dyn std::error::Error>> {
    let republican = datasets::get_dataset("republican")?;
    let cfg = SimulationConfig::new(m, 11, &[StatisticKind::Frobenius, StatisticKind::LogLikelihoodRatio]);
    let whole = estimate_pvalues(&republican.table, &cfg)?;

    let cut = m / 3;
    let first = estimate_partial(&republican.table, &cfg, 0..cut)?;
    let second = estimate_partial(&republican.table, &cfg, cut..m)?;
    for (i, single) in whole.iter().enumerate() {
        let merged = merge_partials(&[first[i].clone(), second[i].clone()])?;
        println!(
            "  {:<28} single run {}/{}  merged {}/{}",
            single.kind.label(),
            single.exceedances,
            single.m,
            merged.exceedances,
            merged.m
        );
        assert_eq!(&merged, single);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example(60_000)
}
