// Exact P-values by enumeration, checked against simulation on a small table.
//
// cargo run --release --example exact_oracle

use homogeneity::{estimate_pvalues, exact_pvalues, ContingencyTable, ExactOptions, SimulationConfig, StatisticKind};

pub fn run_example(m: u64) -> Result<(), Box<dyn std::error::Error>> {
    let table = ContingencyTable::from_rows(&[[5u64, 1, 2], [0, 3, 1], [1, 2, 4]])?;
    let exact = exact_pvalues(&table, &StatisticKind::STANDARD, &ExactOptions::default())?;
    let simulated = estimate_pvalues(&table, &SimulationConfig::new(m, 7, &StatisticKind::STANDARD))?;
    println!("{} outcomes enumerated, {} simulations", exact[0].outcomes, m);
    for (e, s) in exact.iter().zip(&simulated) {
        let z = if s.std_err > 0.0 { (s.p_hat - e.p_value) / s.std_err } else { 0.0 };
        println!("  {:<32} exact {:.6}  simulated {:.6}  z = {:+.2}", e.kind.label(), e.p_value, s.p_hat, z);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example(1_000_000)
}
