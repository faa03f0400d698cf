// The five discrepancy statistics, and the Cressie–Read family around them.
//
// cargo run --example discrepancy_statistics

use homogeneity::{compute_all, datasets, homogeneity_model, power_divergence, StatisticKind};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for dataset in datasets::all() {
        let model = homogeneity_model(&dataset.table);
        println!("{}", dataset.name);
        for value in compute_all(&dataset.table, &model, &StatisticKind::STANDARD)? {
            println!("  {:<32} {:>12.6}", value.kind.label(), value.value);
        }
    }

    // chi-square is lambda = 1, G^2 the limit lambda -> 0, Freeman-Tukey lambda = -1/2.
    let danish = datasets::get_dataset("danish")?;
    let model = homogeneity_model(&danish.table);
    println!("power divergence on danish");
    for lambda in [-2.0, -1.0, -0.5, 0.0, 2.0 / 3.0, 1.0, 2.0] {
        println!("  lambda = {lambda:>6.3}: {:>10.6}", power_divergence(&danish.table, &model, lambda)?.value);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
