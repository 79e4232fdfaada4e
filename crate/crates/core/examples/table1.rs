// Recomputes the published error table.

use skl::report;

pub fn run_example() -> skl::Result<()> {
    let table = report::table1()?;
    print!("{}", table.table.to_csv());
    println!("{}", table.summary());
    assert!(table.qualitative_tier());
    Ok(())
}

#[allow(dead_code)]
fn main() -> skl::Result<()> {
    run_example()
}
