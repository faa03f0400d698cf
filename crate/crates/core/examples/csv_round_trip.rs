// Export a bundled dataset as CSV, read it back, and read a transposed file.
//
// cargo run --example csv_round_trip

use homogeneity::{datasets, parse_table, CsvLayout};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mania = datasets::get_dataset("mania")?;
    let csv = mania.table.to_csv();
    print!("{csv}");
    let back = parse_table(&csv, CsvLayout::default())?;
    assert_eq!(back, mania.table);

    // Groups stored as rows: transpose so the fixed totals land on columns.
    let by_rows = "group,yes,no\ntreated,12,30\ncontrol,20,22\n";
    let table = parse_table(by_rows, CsvLayout { transpose: true, ..CsvLayout::default() })?;
    println!("column totals after transpose: {:?}", table.col_totals());
    assert_eq!(table.col_totals(), [42, 42]);

    match parse_table("1,-2\n3,4", CsvLayout::bare()) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!("negative counts are invalid"),
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
