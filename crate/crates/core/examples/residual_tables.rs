// Model of homogeneous proportions and residual tables for a bundled dataset.
//
// cargo run --example residual_tables -- republican

use homogeneity::{datasets, homogeneity_model, residuals};

pub fn run_example(name: &str) -> Result<(), Box<dyn std::error::Error>> {
    let dataset = datasets::get_dataset(name)?;
    let table = &dataset.table;
    let model = homogeneity_model(table);
    let report = residuals(table, &model);
    let rows = table.row_labels().unwrap_or_default();
    let cols = table.col_labels().unwrap_or_default();

    println!("{} ({}x{}, n = {})", dataset.name, table.rows(), table.cols(), table.total());
    println!("{:<32}{}", "", cols.iter().map(|c| format!("{c:>29}")).collect::<String>());
    for j in 0..table.rows() {
        let mut line = format!("{:<32}", rows.get(j).map_or("", String::as_str));
        for k in 0..table.cols() {
            line.push_str(&format!(
                "{:>8} {:>7.1} {:>6.1} {:>5.1}",
                table.get(j, k),
                model.expected(j, k),
                report.differences.get(j, k),
                report.standardized.get(j, k)
            ));
        }
        println!("{line}");
    }
    println!("(observed, model, difference, standardized)");

    for k in 0..table.cols() {
        let column_sum: f64 = (0..table.rows()).map(|j| report.differences.get(j, k)).sum();
        assert!(column_sum.abs() < 1e-9);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "danish".into());
    run_example(&name)
}
