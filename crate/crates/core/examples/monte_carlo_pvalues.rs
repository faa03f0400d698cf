// Monte-Carlo P-values for one dataset, next to the published values.
//
// cargo run --release --example monte_carlo_pvalues -- danish 4000000

use std::time::Instant;

use homogeneity::{datasets, estimate_pvalues, SimulationConfig, StatisticKind};

pub fn run_example(name: &str, m: u64) -> Result<(), Box<dyn std::error::Error>> {
    let dataset = datasets::get_dataset(name)?;
    let cfg = SimulationConfig::new(m, 2024, &StatisticKind::STANDARD);
    let started = Instant::now();
    let results = estimate_pvalues(&dataset.table, &cfg)?;
    println!("{}: {} simulations on {} workers in {:.2?}", dataset.name, m, cfg.workers, started.elapsed());
    println!("  {:<32} {:>10} {:>10} {:>10}", "statistic", "P-value", "std.err.", "published");
    for r in &results {
        let published = dataset.published(r.kind).map_or_else(String::new, |p| p.to_string());
        println!("  {:<32} {:>10.5} {:>10.5} {:>10}", r.kind.label(), r.p_hat, r.std_err, published);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "mania".into());
    let m = args.next().map(|s| s.parse()).transpose()?.unwrap_or(250_000);
    run_example(&name, m)
}
