// Seeded substreams and tables simulated under the homogeneity null.
//
// cargo run --release --example null_sampler

use homogeneity::{datasets, rng_init, rng_uniform, NullSpec};

pub fn run_example(replicates: u64) -> Result<(), Box<dyn std::error::Error>> {
    let mut a = rng_init(42, 0);
    let mut b = rng_init(42, 1);
    println!("stream 0: {:.6} {:.6} {:.6}", rng_uniform(&mut a), rng_uniform(&mut a), rng_uniform(&mut a));
    println!("stream 1: {:.6} {:.6} {:.6}", rng_uniform(&mut b), rng_uniform(&mut b), rng_uniform(&mut b));

    let danish = datasets::get_dataset("danish")?;
    let spec = NullSpec::from_table(&danish.table)?;
    let mut sum = vec![0.0; spec.rows() * spec.cols()];
    for i in 0..replicates {
        let table = spec.simulate_table(&mut rng_init(42, i));
        assert_eq!(table.col_totals(), spec.col_totals());
        for (s, &c) in sum.iter_mut().zip(table.counts()) {
            *s += c as f64;
        }
    }
    println!("mean simulated count vs expected, first column");
    for j in 0..spec.rows() {
        let expected = spec.col_totals()[0] as f64 * spec.row_props()[j];
        println!("  row {:>2}: {:>9.3} {:>9.3}", j + 1, sum[j * spec.cols()] / replicates as f64, expected);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example(20_000)
}
