// The fast invariant suite and lemma audit.

use skl::verify::{self, Level};

pub fn run_example() -> skl::Result<()> {
    let report = verify::run(Level::Fast)?;
    print!("{}", report.render());
    assert_eq!(report.exit_code(), 0);
    Ok(())
}

#[allow(dead_code)]
fn main() -> skl::Result<()> {
    run_example()
}
